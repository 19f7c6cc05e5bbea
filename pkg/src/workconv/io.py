"""JSON formats for states, Hamiltonians, bipartite pure states and free sets.

Matrices are row-major nested lists whose entries are ``[re, im]`` pairs
(plain real numbers are accepted too)::

    {"dim": 2, "matrix": [[[0.75, 0], [0, 0]], [[0, 0], [0.25, 0]]]}

Hamiltonians may carry ``"kBT"``; bipartite states use ``"amplitudes"``;
free sets are ``{"label": ..., "extreme_points": [<state>, ...]}``.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .states import DensityMatrix, FreeSet, Hamiltonian, PureBipartiteState


class InputError(ValidationError):
    """Malformed or invalid input file; ``path`` names the offending field."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


def load_json(file) -> dict:
    p = Path(file)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read file ({exc.strerror})", str(p)) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
                         str(p)) from exc
    if not isinstance(data, dict):
        raise InputError("top-level JSON value must be an object", str(p))
    return data


def _number(x, path: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise InputError(f"expected a number, got {type(x).__name__}", path)
    return float(x)


def parse_matrix(rows, path: str = "matrix") -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise InputError("expected a non-empty list of rows", path)
    n = len(rows)
    out = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise InputError(f"expected a row of length {n}", f"{path}[{i}]")
        for j, z in enumerate(row):
            here = f"{path}[{i}][{j}]"
            if isinstance(z, list):
                if len(z) != 2:
                    raise InputError("complex entry must be [re, im]", here)
                out[i, j] = complex(_number(z[0], here + "[0]"), _number(z[1], here + "[1]"))
            else:
                out[i, j] = _number(z, here)
    return out


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _matrix_field(data: dict, key: str, where: str) -> np.ndarray:
    if key not in data:
        raise InputError(f"missing field {key!r}", where)
    m = parse_matrix(data[key], f"{where}.{key}" if where else key)
    if "dim" in data:
        dim = data["dim"]
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
            raise InputError("dim must be a positive integer", f"{where}.dim" if where else "dim")
        if dim != m.shape[0]:
            raise InputError(f"dim is {dim} but matrix is {m.shape[0]} x {m.shape[0]}",
                             f"{where}.dim" if where else "dim")
    return m


def _validated(ctor, where: str, *args, **kwargs):
    try:
        return ctor(*args, **kwargs)
    except InputError:
        raise
    except ValidationError as exc:
        raise InputError(str(exc), where) from exc


def parse_state(data: dict, where: str = "") -> DensityMatrix:
    m = _matrix_field(data, "matrix", where)
    return _validated(DensityMatrix, f"{where}.matrix" if where else "matrix", m)


def parse_hamiltonian(data: dict, kBT: float | None = None, where: str = "") -> Hamiltonian:
    m = _matrix_field(data, "matrix", where)
    if kBT is None:
        kBT = _number(data.get("kBT", 1.0), f"{where}.kBT" if where else "kBT")
    return _validated(Hamiltonian, f"{where}.matrix" if where else "matrix", m, kBT=kBT)


def parse_bipartite(data: dict, where: str = "") -> PureBipartiteState:
    key = "amplitudes" if "amplitudes" in data else "matrix"
    m = _matrix_field(data, key, where)
    return _validated(PureBipartiteState, f"{where}.{key}" if where else key, m)


def parse_free_set(data: dict) -> FreeSet:
    pts = data.get("extreme_points")
    if not isinstance(pts, list) or not pts:
        raise InputError("expected a non-empty list of states", "extreme_points")
    states = []
    for i, p in enumerate(pts):
        where = f"extreme_points[{i}]"
        if not isinstance(p, dict):
            raise InputError("expected a state object", where)
        states.append(parse_state(p, where))
    label = data.get("label", "")
    return _validated(FreeSet, "extreme_points", states, label=str(label))


def state_to_json(rho) -> dict:
    m = rho.matrix if hasattr(rho, "matrix") else np.asarray(rho)
    return {"dim": int(m.shape[0]), "matrix": matrix_to_json(m)}


def hamiltonian_to_json(h: Hamiltonian) -> dict:
    return {"dim": h.dim, "matrix": matrix_to_json(h.matrix), "kBT": h.kBT}


def dumps(obj) -> str:
    """Deterministic JSON: insertion-ordered keys, shortest round-trip floats."""
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"
