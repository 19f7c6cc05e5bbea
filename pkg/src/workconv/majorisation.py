"""Majorisation predicate and constructive mixed-unitary certificates."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .config import DEFAULT_TOL, Tolerances
from .errors import DecompositionError, NotConvertibleError, ValidationError
from .states import DensityMatrix, as_spectrum

CHAIN_TOL = 1e-13
BIRKHOFF_TOL = 1e-13


@dataclass(frozen=True)
class MajorisationReport:
    """Partial-sum diagnostics for ``rho > sigma``.

    ``partial_sum_gaps[k] = sum_{i<=k} (rho_i^down - sigma_i^down)`` for
    ``k = 0..d-2``. ``boundary`` marks gaps within the tolerance band of zero.
    """

    holds: bool
    partial_sum_gaps: tuple[float, ...]
    worst_k: int | None
    boundary: bool

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "partial_sum_gaps": list(self.partial_sum_gaps),
            "worst_k": self.worst_k,
            "boundary": self.boundary,
        }


def spectrum_report(x, y, tol: float = DEFAULT_TOL.verdict) -> MajorisationReport:
    """Majorisation report for two sorted probability vectors."""
    x = as_spectrum(x)
    y = as_spectrum(y)
    if x.size != y.size:
        raise ValidationError(f"dimension mismatch: {x.size} vs {y.size}")
    gaps = tuple(kernels.partial_sum_gaps(x, y))
    if not gaps:
        return MajorisationReport(True, (), None, False)
    worst = int(np.argmin(gaps))
    holds = gaps[worst] >= -tol
    boundary = any(abs(g) <= tol for g in gaps)
    return MajorisationReport(holds, gaps, worst, boundary)


def majorises(rho: DensityMatrix, sigma: DensityMatrix,
              tol: Tolerances = DEFAULT_TOL) -> MajorisationReport:
    """Does ``rho`` majorise ``sigma``? Compares leading partial sums of the sorted spectra."""
    if rho.dim != sigma.dim:
        raise ValidationError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    return spectrum_report(rho.spectrum, sigma.spectrum, tol.verdict)


def t_matrix(d: int, t: float, i: int, j: int) -> np.ndarray:
    m = np.eye(d)
    m[i, i] = m[j, j] = t
    m[i, j] = m[j, i] = 1.0 - t
    return m


def apply_chain(x, chain) -> np.ndarray:
    x = np.array(x, dtype=float)
    for t, i, j in chain:
        xi, xj = x[i], x[j]
        x[i] = t * xi + (1 - t) * xj
        x[j] = (1 - t) * xi + t * xj
    return x


def chain_matrix(d: int, chain) -> np.ndarray:
    """Doubly stochastic product ``T_m ... T_1`` of a T-transform chain."""
    m = np.eye(d)
    for t, i, j in chain:
        m = t_matrix(d, t, i, j) @ m
    return m


def t_transform_chain(x, y, tol: float = DEFAULT_TOL.verdict) -> list[tuple[float, int, int]]:
    """T-transform sequence taking ``x`` to ``y`` (both sorted, ``x`` majorising ``y``).

    At most ``d - 1`` steps. Raises ``NotConvertibleError`` (with the
    violated report) when ``x`` does not majorise ``y``.
    """
    report = spectrum_report(x, y, tol)
    if not report.holds:
        raise NotConvertibleError(
            f"x does not majorise y (partial sum {report.worst_k} short by "
            f"{-report.partial_sum_gaps[report.worst_k]:.3g})", report)
    chain = [(float(t), int(i), int(j)) for t, i, j in kernels.t_transform_chain(x, y, CHAIN_TOL)]
    return chain


def is_doubly_stochastic(m, tol: float = 1e-8) -> bool:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.all(m >= -tol)
                and np.allclose(m.sum(axis=0), 1.0, atol=tol, rtol=0)
                and np.allclose(m.sum(axis=1), 1.0, atol=tol, rtol=0))


def permutation_matrix(perm) -> np.ndarray:
    """``P[i, perm[i]] = 1`` so that ``(P x)_i = x[perm[i]]``."""
    n = len(perm)
    p = np.zeros((n, n))
    p[np.arange(n), perm] = 1.0
    return p


def birkhoff_decompose(d_matrix, tol: float = 1e-8) -> list[tuple[float, tuple[int, ...]]]:
    """Convex decomposition of a doubly stochastic matrix into permutations.

    Greedy: find a perfect matching on the positive support, subtract its
    smallest entry, repeat. Yields at most ``(d-1)**2 + 1`` terms.
    """
    m = np.asarray(d_matrix, dtype=float)
    if not is_doubly_stochastic(m, tol):
        raise ValidationError("matrix is not doubly stochastic")
    n = m.shape[0]
    terms, remaining = kernels.birkhoff(np.clip(m, 0.0, None), BIRKHOFF_TOL)
    if abs(remaining) > 1e-9:
        raise DecompositionError(
            "no perfect matching on the remaining support", abs(remaining))
    out = [(float(w), tuple(int(v) for v in perm)) for w, perm in terms if w > 0]
    recon = sum((w * permutation_matrix(p) for w, p in out), np.zeros((n, n)))
    err = float(np.max(np.abs(recon - m))) if out else float(np.max(np.abs(m)))
    if err > tol:
        raise DecompositionError("Birkhoff terms do not reconstruct the matrix", err)
    return out


def _complex_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


@dataclass(frozen=True)
class ConversionCertificate:
    """Explicit mixed-unitary channel realising ``rho -> sigma``.

    The channel is ``X -> sum_m w_m K_m X K_m^dagger`` with Kraus unitaries
    ``K_m = basis_out @ P_m @ basis_in^dagger``.
    """

    doubly_stochastic: np.ndarray
    birkhoff_terms: tuple[tuple[float, tuple[int, ...]], ...]
    basis_in: np.ndarray
    basis_out: np.ndarray

    def unitaries(self) -> list[tuple[float, np.ndarray]]:
        vin = self.basis_in.conj().T
        return [(w, self.basis_out @ permutation_matrix(p) @ vin) for w, p in self.birkhoff_terms]

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        out = np.zeros_like(x)
        for w, k in self.unitaries():
            out += w * (k @ x @ k.conj().T)
        return out

    def to_dict(self) -> dict:
        return {
            "doubly_stochastic": [[float(v) for v in row] for row in self.doubly_stochastic],
            "birkhoff_terms": [{"weight": w, "permutation": list(p)} for w, p in self.birkhoff_terms],
            "basis_in": _complex_to_json(self.basis_in),
            "basis_out": _complex_to_json(self.basis_out),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ConversionCertificate":
        def cmat(rows):
            return np.array([[complex(re, im) for re, im in row] for row in rows])
        return cls(
            doubly_stochastic=np.array(data["doubly_stochastic"], dtype=float),
            birkhoff_terms=tuple((float(t["weight"]), tuple(int(v) for v in t["permutation"]))
                                 for t in data["birkhoff_terms"]),
            basis_in=cmat(data["basis_in"]),
            basis_out=cmat(data["basis_out"]),
        )


def build_mixed_unitary_certificate(rho: DensityMatrix, sigma: DensityMatrix,
                                    tol: Tolerances = DEFAULT_TOL) -> ConversionCertificate:
    """Construct a mixed-unitary channel mapping ``rho`` to ``sigma``.

    Raises ``NotConvertibleError`` carrying the report when ``rho`` does not
    majorise ``sigma``.
    """
    report = majorises(rho, sigma, tol)
    if not report.holds:
        raise NotConvertibleError(
            f"rho does not majorise sigma (worst k = {report.worst_k})", report)
    x, y = rho.spectrum, sigma.spectrum
    chain = t_transform_chain(x, y, tol.verdict)
    dmat = chain_matrix(rho.dim, chain)
    terms = birkhoff_decompose(dmat)
    cert = ConversionCertificate(dmat, tuple(terms), rho.eigenvectors, sigma.eigenvectors)
    return cert
