"""Quantum state and Hamiltonian value types.

All types validate on construction and are immutable afterwards (their
arrays are flagged read-only), so they can be shared freely between threads.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import ValidationError
from .linalg import eigh, hermitian


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def as_spectrum(values, tol: float = 1e-12) -> np.ndarray:
    """Validate a real vector as a non-increasing spectrum."""
    x = np.asarray(values, dtype=float).ravel()
    if x.size == 0:
        raise ValidationError("spectrum must be non-empty")
    if np.any(np.diff(x) > tol):
        raise ValidationError("spectrum must be sorted in non-increasing order")
    return x


class DensityMatrix:
    """Positive semidefinite, unit-trace Hermitian matrix.

    Eigenvalues in ``[-tol.state, 0)`` are clamped to zero and the spectrum
    renormalised; anything more negative is rejected.
    """

    __slots__ = ("_matrix", "_spectrum", "_vectors")

    def __init__(self, matrix, tol: Tolerances = DEFAULT_TOL):
        a = hermitian(matrix, tol)
        tr = float(np.trace(a).real)
        if abs(tr - 1.0) > tol.state:
            raise ValidationError(f"density matrix trace is {tr!r}, expected 1")
        dec = eigh(a, tol)
        vals = dec.values
        if vals[-1] < -tol.state:
            raise ValidationError(
                f"density matrix has negative eigenvalue {vals[-1]!r}")
        vals = np.clip(vals, 0.0, None)
        vals = vals / vals.sum()
        self._matrix = _frozen(a)
        self._spectrum = _frozen(vals)
        self._vectors = _frozen(dec.vectors)

    @classmethod
    def maximally_mixed(cls, d: int) -> "DensityMatrix":
        return cls(np.eye(d) / d)

    @classmethod
    def diagonal(cls, probabilities) -> "DensityMatrix":
        return cls(np.diag(np.asarray(probabilities, dtype=float)))

    @classmethod
    def pure(cls, vector) -> "DensityMatrix":
        v = np.asarray(vector, dtype=complex).ravel()
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def spectrum(self) -> np.ndarray:
        """Eigenvalues, non-increasing, clamped and summing to one."""
        return self._spectrum

    @property
    def eigenvectors(self) -> np.ndarray:
        """Unitary whose columns are eigenvectors aligned with ``spectrum``."""
        return self._vectors

    def conjugate(self, u: np.ndarray) -> "DensityMatrix":
        """Return ``U rho U^dagger``."""
        u = np.asarray(u)
        return DensityMatrix(u @ self._matrix @ u.conj().T)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._matrix, dtype=dtype)

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim}, spectrum={np.round(self._spectrum, 6).tolist()})"


class Hamiltonian:
    """Hermitian energy operator with a temperature and optional bounds.

    ``bounds = (eps, delta)`` asserts ``eps*I <= H <= delta*I``.
    """

    __slots__ = ("_matrix", "_energies", "_vectors", "kBT", "bounds")

    def __init__(self, matrix, kBT: float = 1.0, bounds: tuple[float, float] | None = None,
                 tol: Tolerances = DEFAULT_TOL):
        if not (np.isfinite(kBT) and kBT > 0):
            raise ValidationError(f"kBT must be positive and finite, got {kBT!r}")
        a = hermitian(matrix, tol)
        dec = eigh(a, tol)
        if bounds is not None:
            lo, hi = (float(b) for b in bounds)
            if not (0 <= lo < hi):
                raise ValidationError(f"bounds must satisfy 0 <= eps < delta, got {bounds!r}")
            if dec.values[-1] < lo - tol.state or dec.values[0] > hi + tol.state:
                raise ValidationError(
                    f"spectrum [{dec.values[-1]!r}, {dec.values[0]!r}] "
                    f"outside declared bounds [{lo!r}, {hi!r}]")
            bounds = (lo, hi)
        self._matrix = _frozen(a)
        self._energies = _frozen(dec.values)
        self._vectors = _frozen(dec.vectors)
        self.kBT = float(kBT)
        self.bounds = bounds

    @classmethod
    def diagonal(cls, energies, kBT: float = 1.0, bounds=None) -> "Hamiltonian":
        return cls(np.diag(np.asarray(energies, dtype=float)), kBT, bounds)

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def energies(self) -> np.ndarray:
        """Eigen-energies in non-increasing order."""
        return self._energies

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._vectors

    def __repr__(self) -> str:
        return (f"Hamiltonian(dim={self.dim}, energies={np.round(self._energies, 6).tolist()}, "
                f"kBT={self.kBT!r}, bounds={self.bounds!r})")


class PureBipartiteState:
    """Pure state on C^d (x) C^d stored as its d x d coefficient matrix.

    Amplitudes within ``tol.construction`` of unit norm are renormalised;
    larger deviations are rejected.
    """

    __slots__ = ("_amplitudes",)

    def __init__(self, amplitudes, tol: Tolerances = DEFAULT_TOL):
        a = np.asarray(amplitudes, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValidationError(f"amplitudes must be a square d x d matrix, got shape {a.shape}")
        norm = float(np.linalg.norm(a))
        if abs(norm - 1.0) > tol.construction:
            raise ValidationError(f"amplitudes have Frobenius norm {norm!r}, expected 1")
        self._amplitudes = _frozen(a / norm)

    @classmethod
    def from_schmidt(cls, squared_coefficients) -> "PureBipartiteState":
        p = np.asarray(squared_coefficients, dtype=float)
        return cls(np.diag(np.sqrt(p)))

    @classmethod
    def maximally_entangled(cls, d: int) -> "PureBipartiteState":
        return cls(np.eye(d) / np.sqrt(d))

    @property
    def local_dim(self) -> int:
        return self._amplitudes.shape[0]

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amplitudes

    def __repr__(self) -> str:
        return f"PureBipartiteState(local_dim={self.local_dim})"


class FreeSet:
    """Finitely generated set of free states, given by its extreme points."""

    __slots__ = ("extreme_points", "label")

    def __init__(self, extreme_points: Iterable[DensityMatrix], label: str = ""):
        pts = tuple(p if isinstance(p, DensityMatrix) else DensityMatrix(p) for p in extreme_points)
        if not pts:
            raise ValidationError("free set must contain at least one state")
        dims = {p.dim for p in pts}
        if len(dims) != 1:
            raise ValidationError(f"free states have mixed dimensions {sorted(dims)}")
        self.extreme_points = pts
        self.label = label

    @classmethod
    def maximally_mixed(cls, d: int) -> "FreeSet":
        return cls([DensityMatrix.maximally_mixed(d)], label="max-mixed")

    @property
    def dim(self) -> int:
        return self.extreme_points[0].dim

    def __len__(self) -> int:
        return len(self.extreme_points)

    def __repr__(self) -> str:
        return f"FreeSet(label={self.label!r}, size={len(self)}, dim={self.dim})"


def _basis_matrix(basis, d: int, tol: float) -> np.ndarray:
    if basis is None:
        return np.eye(d, dtype=complex)
    if isinstance(basis, np.ndarray) and basis.ndim == 2:
        b = basis.astype(complex)
    else:
        b = np.column_stack([np.asarray(v, dtype=complex).ravel() for v in basis])
    if b.shape != (d, d):
        raise ValidationError(f"basis must contain {d} vectors of length {d}")
    err = float(np.max(np.abs(b.conj().T @ b - np.eye(d))))
    if err > tol:
        raise ValidationError(f"basis is not orthonormal (max Gram defect {err:.3g})")
    return b


def reorder_descending(rho: DensityMatrix, basis=None, tol: Tolerances = DEFAULT_TOL) -> DensityMatrix:
    """Sum_i rho_i^down |b_i><b_i| for the given orthonormal basis.

    ``basis`` is a d x d matrix whose columns are the basis vectors, or a
    sequence of d vectors; ``None`` means the computational basis.
    """
    b = _basis_matrix(basis, rho.dim, tol.state)
    return DensityMatrix((b * rho.spectrum) @ b.conj().T, tol)


def reduced_state(psi: PureBipartiteState) -> DensityMatrix:
    """First-subsystem marginal ``A A^dagger``; its spectrum is the squared Schmidt coefficients."""
    a = psi.amplitudes
    return DensityMatrix(a @ a.conj().T)


def two_level_hamiltonian(d: int, k: int, omega: float = 1.0, kBT: float = 1.0) -> Hamiltonian:
    """``omega * sum_{i<=k} |i><i|``: energy omega on the first k+1 levels, zero elsewhere."""
    if d < 2 or not (0 <= k <= d - 2):
        raise ValueError(f"need 0 <= k <= d-2, got d={d}, k={k}")
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega!r}")
    e = np.zeros(d)
    e[: k + 1] = omega
    return Hamiltonian.diagonal(e, kBT=kBT, bounds=(0.0, float(omega)))


def hk_family(d: int, omega: float = 1.0, kBT: float = 1.0) -> Sequence[Hamiltonian]:
    return [two_level_hamiltonian(d, k, omega, kBT) for k in range(d - 1)]
