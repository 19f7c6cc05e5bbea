"""Deciders for state conversion: unital / mixed-unitary channels via the
two-level Hamiltonian family, sampling falsification over bounded
Hamiltonians, and the pure-state LOCC test."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import TheoremViolationError, ValidationError
from .linalg import sample_haar_unitary
from .majorisation import (ConversionCertificate, MajorisationReport,
                           build_mixed_unitary_certificate, majorises)
from .states import (DensityMatrix, PureBipartiteState, hk_family, reduced_state,
                     reorder_descending)
from .thermo import delta

UNITAL_MU = "unital_mu"
LOCC_PURE = "locc_pure"

# Random Hamiltonians per RNG stream. Fixed so that results do not depend on
# the number of worker threads.
SAMPLE_CHUNK = 256


@dataclass(frozen=True)
class ConversionVerdict:
    convertible: bool
    via: str
    delta_gaps: tuple[float, ...]
    majorisation_report: MajorisationReport
    certificate: ConversionCertificate | None = None

    @property
    def boundary(self) -> bool:
        return self.majorisation_report.boundary

    def to_dict(self, certificate: bool = False) -> dict:
        out = {
            "convertible": self.convertible,
            "via": self.via,
            "delta_gaps": list(self.delta_gaps),
            "majorisation": self.majorisation_report.to_dict(),
        }
        if certificate and self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        return out


def hk_delta_gaps(rho: DensityMatrix, sigma: DensityMatrix, omega: float = 1.0,
                  kBT: float = 1.0, tol: Tolerances = DEFAULT_TOL) -> tuple[float, ...]:
    """``Delta(rho^down, H_k) - Delta(sigma^down, H_k)`` for ``k = 0..d-2``."""
    if rho.dim != sigma.dim:
        raise ValidationError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    r = reorder_descending(rho, tol=tol)
    s = reorder_descending(sigma, tol=tol)
    return tuple(delta(r, h, tol).delta - delta(s, h, tol).delta
                 for h in hk_family(rho.dim, omega, kBT))


def unital_convertible(rho: DensityMatrix, sigma: DensityMatrix, omega: float = 1.0,
                       kBT: float = 1.0, tol: Tolerances = DEFAULT_TOL,
                       certificate: bool = True) -> ConversionVerdict:
    """Decide ``rho -> sigma`` under unital (equivalently mixed-unitary) channels.

    The work-gap route over the two-level family and the partial-sum route
    are evaluated independently and must agree; gaps are compared at the
    verdict tolerance after dividing out ``omega``.
    """
    if not omega > 0:
        raise ValidationError(f"omega must be positive, got {omega!r}")
    gaps = hk_delta_gaps(rho, sigma, omega, kBT, tol)
    report = majorises(rho, sigma, tol)
    by_work = all(g / omega >= -tol.verdict for g in gaps)
    if by_work != report.holds:
        raise TheoremViolationError(
            f"work-gap verdict ({by_work}) and majorisation verdict ({report.holds}) disagree; "
            f"gaps={gaps}, partial sums={report.partial_sum_gaps}")
    cert = build_mixed_unitary_certificate(rho, sigma, tol) if (certificate and by_work) else None
    return ConversionVerdict(by_work, UNITAL_MU, gaps, report, cert)


def nielsen_locc_check(psi: PureBipartiteState, phi: PureBipartiteState, omega: float = 1.0,
                       kBT: float = 1.0, tol: Tolerances = DEFAULT_TOL) -> ConversionVerdict:
    """Decide ``|psi> -> |phi>`` under LOCC.

    Convertible iff the marginal of ``phi`` majorises that of ``psi``, so the
    work gaps are ``Delta(phi^down, H_k) - Delta(psi^down, H_k)``.
    """
    if psi.local_dim != phi.local_dim:
        raise ValidationError(f"local dimension mismatch: {psi.local_dim} vs {phi.local_dim}")
    v = unital_convertible(reduced_state(phi), reduced_state(psi), omega, kBT, tol,
                           certificate=False)
    return ConversionVerdict(v.convertible, LOCC_PURE, v.delta_gaps, v.majorisation_report, None)


@dataclass(frozen=True)
class Violation:
    source: str           # "hk" or "random"
    index: int            # k for the H_k sweep, sample number otherwise
    gap: float
    energies: tuple[float, ...]
    hamiltonian: np.ndarray | None = field(default=None, compare=False)


@dataclass(frozen=True)
class SamplingReport:
    n_checked: int
    min_gap: float
    violations: tuple[Violation, ...]

    @property
    def violated(self) -> bool:
        return bool(self.violations)

    def to_dict(self) -> dict:
        return {
            "n_checked": self.n_checked,
            "min_gap": self.min_gap,
            "violated": self.violated,
            "violations": [{"source": v.source, "index": v.index, "gap": v.gap,
                            "energies": list(v.energies)} for v in self.violations],
        }


def _mu_gap(rho_down: np.ndarray, sigma_down: np.ndarray, energies: np.ndarray) -> np.ndarray:
    # Delta_MU(rho, H) - Delta_MU(sigma, H); the partition-function terms cancel.
    return energies @ (rho_down - sigma_down)


def _sample_chunk(seed_seq, count, d, eps, top):
    rng = np.random.default_rng(seed_seq)
    spectra = rng.uniform(eps, top, size=(count, d))
    bases = sample_haar_unitary(d, rng, size=count)
    hams = np.einsum("nij,nj,nkj->nik", bases, spectra, bases.conj())
    energies = np.linalg.eigvalsh(hams)[:, ::-1]
    return hams, energies


def theorem1_sampling_check(rho: DensityMatrix, sigma: DensityMatrix, eps: float, top: float,
                            n_samples: int, seed: int = 0, omega: float = 1.0,
                            threads: int = 1, tol: Tolerances = DEFAULT_TOL,
                            keep_hamiltonians: bool = False) -> SamplingReport:
    """Search for a Hamiltonian ``eps*I <= H <= top*I`` with
    ``Delta_MU(rho, H) < Delta_MU(sigma, H)``.

    Checks the rescaled two-level family ``eps*I + (top-eps) H_k/omega``
    followed by ``n_samples`` random Hamiltonians (uniform spectrum, Haar
    eigenbasis). A violation disproves convertibility; finding none is
    evidence only.
    """
    if not (0 <= eps < top):
        raise ValidationError(f"need 0 <= eps < top, got eps={eps!r}, top={top!r}")
    if n_samples < 0:
        raise ValidationError("n_samples must be non-negative")
    if rho.dim != sigma.dim:
        raise ValidationError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    d = rho.dim
    x, y = rho.spectrum, sigma.spectrum
    violations: list[Violation] = []
    min_gap = math.inf
    scale = max(top, 1.0)

    for k, h in enumerate(hk_family(d, omega) if d > 1 else []):
        e = eps + (top - eps) * h.energies / omega
        g = float(_mu_gap(x, y, e))
        min_gap = min(min_gap, g)
        if g < -tol.verdict * scale:
            violations.append(Violation("hk", k, g, tuple(e.tolist()),
                                        np.diag(e).astype(complex) if keep_hamiltonians else None))

    chunks = []
    left = n_samples
    while left > 0:
        chunks.append(min(SAMPLE_CHUNK, left))
        left -= chunks[-1]
    seqs = np.random.SeedSequence(seed).spawn(len(chunks))

    def work_on(i):
        return _sample_chunk(seqs[i], chunks[i], d, eps, top)

    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work_on, range(len(chunks))))
    else:
        results = [work_on(i) for i in range(len(chunks))]

    offset = 0
    for hams, energies in results:
        gaps = _mu_gap(x, y, energies) if energies.size else np.empty(0)
        if gaps.size:
            min_gap = min(min_gap, float(gaps.min()))
        for j in np.flatnonzero(gaps < -tol.verdict * scale):
            violations.append(Violation("random", offset + int(j), float(gaps[j]),
                                        tuple(energies[j].tolist()),
                                        hams[j] if keep_hamiltonians else None))
        offset += len(energies)

    n_checked = (d - 1) + n_samples
    return SamplingReport(n_checked, min_gap if n_checked else 0.0, tuple(violations))
