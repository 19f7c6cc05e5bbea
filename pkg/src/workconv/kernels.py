"""Backend selection for the majorisation kernels.

The compiled extension is used when it imports; setting the environment
variable ``WORKCONV_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
import os

from . import _kernels_py

if os.environ.get("WORKCONV_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

partial_sum_gaps = _impl.partial_sum_gaps
t_transform_chain = _impl.t_transform_chain
birkhoff = _impl.birkhoff

__all__ = ["BACKEND", "partial_sum_gaps", "t_transform_chain", "birkhoff"]
