"""Hermitian linear algebra: validated construction, eigendecomposition,
spectral matrix functions and random sampling."""
from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import DomainError, NumericalError, ValidationError


class EigenDecomposition(NamedTuple):
    """Eigenvalues in non-increasing order and matching eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def hermitian(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Return ``(m + m^dagger)/2`` as a complex array.

    Raises ``ValidationError`` if ``m`` is not square or deviates from
    Hermiticity by more than ``tol.construction`` (max-abs entry).
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValidationError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    defect = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if defect > tol.construction:
        raise ValidationError(f"matrix is not Hermitian (max |M - M^dagger| = {defect:.3g})")
    return 0.5 * (a + a.conj().T)


def eigh(m, tol: Tolerances = DEFAULT_TOL) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix with values sorted descending."""
    a = hermitian(m, tol)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver did not converge: {exc}") from exc
    w = w[::-1].copy()
    v = v[:, ::-1].copy()
    dec = EigenDecomposition(w, v)
    scale = max(1.0, float(np.linalg.norm(a)))
    residual = float(np.linalg.norm(dec.reconstruct() - a))
    if residual > tol.reconstruction * scale:
        raise NumericalError("eigendecomposition failed to reconstruct its input", residual)
    return dec


def herm_func(m, f: Callable[[np.ndarray], np.ndarray], tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Apply a real scalar function spectrally: ``V f(diag(w)) V^dagger``.

    ``f`` is called on the whole eigenvalue vector. A non-finite output at
    any eigenvalue raises ``DomainError`` naming that eigenvalue.
    """
    dec = m if isinstance(m, EigenDecomposition) else eigh(m, tol)
    with np.errstate(all="ignore"):
        fw = np.asarray(f(dec.values), dtype=float)
    bad = ~np.isfinite(fw)
    if np.any(bad):
        lam = float(dec.values[np.argmax(bad)])
        raise DomainError(f"function undefined at eigenvalue {lam!r}", lam)
    return (dec.vectors * fw) @ dec.vectors.conj().T


def trace_norm(m) -> float:
    """Schatten-1 norm of a Hermitian matrix."""
    return float(np.sum(np.abs(np.linalg.eigvalsh(hermitian(m)))))


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def sample_haar_unitary(d: int, seed=None, size: int | None = None) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix.

    The phases of ``R``'s diagonal are absorbed into ``Q`` so that the
    distribution is exactly Haar. ``size`` draws a stack of shape
    ``(size, d, d)``.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = _rng(seed)
    shape = (d, d) if size is None else (size, d, d)
    z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phases = diag / np.abs(diag)
    return q * phases[..., None, :]


def sample_hs_state(d: int, seed=None) -> np.ndarray:
    """Density matrix drawn from the Hilbert-Schmidt measure, ``G G^dagger / tr``."""
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = _rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real
