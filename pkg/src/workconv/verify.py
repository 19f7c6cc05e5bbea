"""Seeded property suites behind ``workconv verify``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .conversion import hk_delta_gaps, nielsen_locc_check, theorem1_sampling_check, unital_convertible
from .linalg import sample_haar_unitary, sample_hs_state, trace_norm
from .majorisation import build_mixed_unitary_certificate, majorises, spectrum_report, t_transform_chain
from .states import DensityMatrix, FreeSet, Hamiltonian, PureBipartiteState, reduced_state
from .thermo import delta, delta_mu_assisted, free_set_max_delta, work, work_inf
from .witness import SamplingPlan, measure_m, witness_search

SUITES = ("thermo", "majorisation", "conversion", "witness")


@dataclass
class PropertyResult:
    suite: str
    name: str
    passed: int = 0
    total: int = 0

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def record(self, ok: bool) -> None:
        self.total += 1
        self.passed += bool(ok)


def random_state(d: int, rng) -> DensityMatrix:
    return DensityMatrix(sample_hs_state(d, rng))


def random_hamiltonian(d: int, rng, lo: float = 0.0, hi: float = 2.0, kBT: float = 1.0) -> Hamiltonian:
    u = sample_haar_unitary(d, rng)
    e = rng.uniform(lo, hi, size=d)
    return Hamiltonian((u * e) @ u.conj().T, kBT=kBT)


def random_mixed_unitary(d: int, rng, terms: int | None = None):
    """Random mixed-unitary channel as a list of (weight, unitary)."""
    m = terms or int(rng.integers(1, 5))
    w = rng.dirichlet(np.ones(m))
    us = sample_haar_unitary(d, rng, size=m)
    return list(zip(w, us))


def apply_channel(channel, rho) -> np.ndarray:
    m = rho.matrix if isinstance(rho, DensityMatrix) else rho
    return sum(w * (u @ m @ u.conj().T) for w, u in channel)


def _dims(i: int, dims) -> int:
    return dims[i % len(dims)]


def suite_thermo(n: int, seed: int, tol: Tolerances) -> list[PropertyResult]:
    rng = np.random.default_rng([seed, 1])
    closed = PropertyResult("thermo", "closed_form_consistency")
    linear = PropertyResult("thermo", "gap_linearity")
    winf = PropertyResult("thermo", "w_inf_unitary_invariance")
    passive = PropertyResult("thermo", "passive_dominance")
    nonneg = PropertyResult("thermo", "work_nonnegative")
    for i in range(n):
        d = _dims(i, (2, 3, 4))
        rho, sigma = random_state(d, rng), random_state(d, rng)
        h = random_hamiltonian(d, rng)
        r = delta(rho, h)
        closed.record(r.consistency_gap < 1e-8)
        lhs = r.delta - delta(sigma, h).delta
        rhs = float(np.real(np.trace(h.matrix @ (rho.matrix - sigma.matrix))))
        linear.record(abs(lhs - rhs) < 1e-9)
        u = sample_haar_unitary(d, rng)
        winf.record(abs(work_inf(rho.conjugate(u)) - work_inf(rho)) < 1e-9)
        top = delta_mu_assisted(rho, h)
        trials = sample_haar_unitary(d, rng, size=50)
        ok = all(delta(rho.conjugate(v), h).delta <= top + 1e-9 for v in trials)
        aligned = h.eigenvectors @ rho.eigenvectors.conj().T
        ok &= abs(delta(rho.conjugate(aligned), h).delta - top) < 1e-6
        passive.record(ok)
        nonneg.record(work(rho, h) >= -1e-12)
    return [closed, linear, winf, passive, nonneg]


def majorising_pair(d: int, rng) -> tuple[DensityMatrix, DensityMatrix]:
    rho = random_state(d, rng)
    sigma = DensityMatrix(apply_channel(random_mixed_unitary(d, rng), rho))
    return rho, sigma


def suite_majorisation(n: int, seed: int, tol: Tolerances) -> list[PropertyResult]:
    rng = np.random.default_rng([seed, 2])
    trans = PropertyResult("majorisation", "transitivity")
    sound = PropertyResult("majorisation", "certificate_soundness")
    unital = PropertyResult("majorisation", "certificate_unitality")
    length = PropertyResult("majorisation", "chain_length")
    for i in range(n):
        d = _dims(i, (2, 3, 4, 5, 6))
        rho, sigma = majorising_pair(d, rng)
        tau = DensityMatrix(apply_channel(random_mixed_unitary(d, rng), sigma))
        if majorises(rho, sigma, tol).holds and majorises(sigma, tau, tol).holds:
            trans.record(majorises(rho, tau, tol).holds)
        cert = build_mixed_unitary_certificate(rho, sigma, tol)
        sound.record(trace_norm(cert.apply(rho.matrix) - sigma.matrix) / 2 < 1e-7)
        unital.record(np.max(np.abs(cert.apply(np.eye(d) / d) - np.eye(d) / d)) < 1e-9)
        length.record(len(t_transform_chain(rho.spectrum, sigma.spectrum)) <= d - 1)
    return [trans, sound, unital, length]


def suite_conversion(n: int, seed: int, tol: Tolerances, corrupt: bool = False) -> list[PropertyResult]:
    rng = np.random.default_rng([seed, 3])
    equiv = PropertyResult("conversion", "verdict_equivalence")
    scale = PropertyResult("conversion", "omega_scale_invariance")
    forward = PropertyResult("conversion", "sampling_forward")
    nielsen = PropertyResult("conversion", "nielsen_agreement")
    # corrupted mode loosens only the partial-sum route, so the two routes must disagree
    ps_tol = 0.05 if corrupt else tol.verdict
    for i in range(n):
        d = _dims(i, (2, 3, 4, 5, 6))
        rho, sigma = random_state(d, rng), random_state(d, rng)
        gaps = hk_delta_gaps(rho, sigma, 1.0, 1.0, tol)
        by_work = all(g >= -tol.verdict for g in gaps)
        by_sums = spectrum_report(rho.spectrum, sigma.spectrum, ps_tol).holds
        equiv.record(by_work == by_sums)
        if not corrupt:
            verdicts = {unital_convertible(rho, sigma, w, tol=tol, certificate=False).convertible
                        for w in (1e-3, 1.0, 1e3)}
            scale.record(len(verdicts) == 1)
            a, b = majorising_pair(d, rng)
            rep = theorem1_sampling_check(a, b, 0.0, 1.0, 20, seed=int(rng.integers(2**31)), tol=tol)
            forward.record(not rep.violated)
            psi = PureBipartiteState(_random_amplitudes(d, rng))
            phi = PureBipartiteState(_random_amplitudes(d, rng))
            direct = majorises(reduced_state(phi), reduced_state(psi), tol).holds
            nielsen.record(nielsen_locc_check(psi, phi, tol=tol).convertible == direct)
    return [equiv, scale, forward, nielsen]


def _random_amplitudes(d: int, rng) -> np.ndarray:
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return a / np.linalg.norm(a)


def suite_witness(n: int, seed: int, tol: Tolerances) -> list[PropertyResult]:
    rng = np.random.default_rng([seed, 4])
    complete = PropertyResult("witness", "singleton_completeness")
    sound = PropertyResult("witness", "witness_soundness")
    free_zero = PropertyResult("witness", "measure_free_state_zero")
    mono = PropertyResult("witness", "measure_monotonicity")
    plan = SamplingPlan(n_random=16)
    for i in range(n):
        d = _dims(i, (2, 3, 4))
        rho = random_state(d, rng)
        free = FreeSet.maximally_mixed(d)
        res = witness_search(rho, free, 0.0, 1.0, tol=tol)
        expected = trace_norm(rho.matrix - np.eye(d) / d) / 2
        complete.record(res.found and abs(res.gap - expected) < 1e-9)
        if res.found:
            g = delta(rho, res.hamiltonian).delta - free_set_max_delta(free, res.hamiltonian)
            sound.record(g > 0)
        dm = _dims(i, (2, 3))
        free_zero.record(measure_m(DensityMatrix.maximally_mixed(dm), 0.1, 1.0, plan) < 1e-9)
        r = random_state(dm, rng)
        m0 = measure_m(r, 0.1, 1.0, plan)
        out = DensityMatrix(apply_channel(random_mixed_unitary(dm, rng), r))
        mono.record(measure_m(out, 0.1, 1.0, plan) <= m0 + 1e-6)
    return [complete, sound, free_zero, mono]


RUNNERS: dict[str, Callable[..., list[PropertyResult]]] = {
    "thermo": suite_thermo,
    "majorisation": suite_majorisation,
    "conversion": suite_conversion,
    "witness": suite_witness,
}


def run_suite(name: str, n: int, seed: int, tol: Tolerances = DEFAULT_TOL,
              corrupt: bool = False) -> list[PropertyResult]:
    if name == "all":
        names = SUITES
    elif name in RUNNERS:
        names = (name,)
    else:
        raise KeyError(name)
    results = []
    for s in names:
        if s == "conversion":
            results += suite_conversion(n, seed, tol, corrupt)
        else:
            results += RUNNERS[s](n, seed, tol)
    return results
