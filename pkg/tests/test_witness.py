import math

import mpmath
import numpy as np
import pytest

from oracles import trace_norm_svd, witness_grid_oracle, witness_objective
from workconv import witness as W
from workconv.errors import InconclusiveError, ValidationError
from workconv.linalg import sample_haar_unitary, sample_hs_state
from workconv.states import DensityMatrix, FreeSet, Hamiltonian
from workconv.thermo import delta, delta_mu_assisted, free_set_max_delta


def rand_state(d, rng):
    return DensityMatrix(sample_hs_state(d, rng))


def test_singleton_example():
    res = W.witness_search(DensityMatrix.diagonal([1, 0]), FreeSet.maximally_mixed(2), 0.0, 1.0)
    assert res.found and res.status == "found"
    assert res.gap == pytest.approx(0.5, abs=1e-12)
    np.testing.assert_allclose(res.hamiltonian.matrix, np.diag([1.0, 0.0]), atol=1e-12)


def test_singleton_formula_and_soundness(rng):
    for d in (2, 3, 4):
        rho = rand_state(d, rng)
        eta = rand_state(d, rng)
        res = W.witness_search(rho, FreeSet([eta]), 0.2, 1.5)
        want = 1.3 * trace_norm_svd(rho.matrix - eta.matrix) / 2
        assert abs(res.gap - want) < 1e-9
        # recomputed through the thermo module, not the linear shortcut
        h = res.hamiltonian
        assert delta(rho, h).delta - free_set_max_delta(FreeSet([eta]), h) == pytest.approx(res.gap, abs=1e-9)
        e = h.energies
        assert e.min() >= 0.2 - 1e-9 and e.max() <= 1.5 + 1e-9


def test_member_of_hull_not_found(rng):
    pts = [rand_state(3, rng) for _ in range(3)]
    rho = DensityMatrix(0.2 * pts[0].matrix + 0.5 * pts[1].matrix + 0.3 * pts[2].matrix)
    res = W.witness_search(rho, FreeSet(pts), 0.0, 1.0)
    assert not res.found and res.gap <= 1e-9 and res.status == "not_found"
    mm = W.witness_search(DensityMatrix.maximally_mixed(2), FreeSet.maximally_mixed(2), 0, 1)
    assert not mm.found and mm.status == "not_found"


def test_multi_point_matches_grid_oracle(rng):
    for _ in range(3):
        rho = rand_state(3, rng)
        pts = [rand_state(3, rng) for _ in range(3)]
        res = W.witness_search(rho, FreeSet(pts), 0.0, 1.0)
        lower, upper = witness_grid_oracle(rho.matrix, [p.matrix for p in pts], 0.0, 1.0)
        assert res.gap >= lower - 1e-4
        assert res.gap <= upper + 1e-9
        assert abs(res.gap - upper) <= 1e-4
        if res.found:
            assert witness_objective(res.hamiltonian.matrix, rho.matrix, [p.matrix for p in pts]) == \
                pytest.approx(res.gap, abs=1e-12)


def test_iterates_stay_feasible(rng):
    rho = rand_state(3, rng)
    pts = [rand_state(3, rng) for _ in range(3)]
    seen = []
    W.witness_search(rho, FreeSet(pts), 0.3, 0.9, max_iter=200, callback=seen.append)
    assert len(seen) == 200
    for h in seen:
        e = np.linalg.eigvalsh(h)
        assert e.min() >= 0.3 - 1e-9 and e.max() <= 0.9 + 1e-9


def test_witness_errors():
    with pytest.raises(ValidationError):
        W.witness_search(DensityMatrix.maximally_mixed(2), FreeSet.maximally_mixed(2), 1.0, 0.5)
    with pytest.raises(ValidationError):
        W.witness_search(DensityMatrix.maximally_mixed(2), FreeSet.maximally_mixed(3), 0.0, 1.0)


def test_free_set_max_delta_constant_h():
    free = FreeSet([DensityMatrix.diagonal([1, 0]), DensityMatrix.diagonal([0.3, 0.7])])
    assert free_set_max_delta(free, Hamiltonian(0.8 * np.eye(2))) == pytest.approx(0, abs=1e-12)


def test_measure_maximally_mixed():
    for d in (2, 3):
        assert W.measure_m(DensityMatrix.maximally_mixed(d), 0.1, 1.0) < 1e-9


def test_measure_pure_qubit_beats_grid_oracle():
    rho = DensityMatrix.pure([1, 0])
    value = W.measure_m(rho, 0.1, 1.0)
    assert value > 0
    grid = np.linspace(0.1, 1.0, 100)
    best = 0.0
    for a in grid:
        for b in grid:
            if a == b:
                continue
            h = Hamiltonian.diagonal([a, b])
            best = max(best, delta_mu_assisted(rho, h) / delta(DensityMatrix.maximally_mixed(2), h).delta)
    assert value >= math.log2(best) - 1e-9


def test_measure_ratio_matches_high_precision():
    mpmath.mp.dps = 50
    rho = DensityMatrix.diagonal([0.8, 0.2])
    rep = W.measure_report(rho, 0.1, 1.0)
    assert rep.at_threshold
    e0, e1 = (mpmath.mpf(x) for x in rep.energies)
    lnz = mpmath.log(mpmath.exp(-e0) + mpmath.exp(-e1)) - mpmath.log(2)
    num = mpmath.mpf("0.8") * e0 + mpmath.mpf("0.2") * e1 + lnz
    den = (e0 + e1) / 2 + lnz
    assert abs(rep.ratio - float(num / den)) / rep.ratio < 1e-7
    # along the spread floor the ratio is about 1 + 8 kT (p - 1/2) / spread
    assert rep.ratio == pytest.approx(1 + 8 * 0.3 / rep.spread, rel=1e-3)


def test_measure_floor_dependence():
    rho = DensityMatrix.pure([1, 0])
    coarse = W.measure_report(rho, 0.1, 1.0, W.SamplingPlan(spread_floor=1e-3))
    fine = W.measure_report(rho, 0.1, 1.0, W.SamplingPlan(spread_floor=1e-6))
    assert fine.value > coarse.value


def test_measure_inconclusive():
    with pytest.raises(InconclusiveError):
        W.measure_m(DensityMatrix.maximally_mixed(2), 0.5, 0.5 + 1e-8)
    with pytest.raises(InconclusiveError):
        W.measure_m(DensityMatrix.diagonal([1.0]), 0.0, 1.0)


def test_measure_monotone_under_mixed_unitaries(rng):
    for d in (2, 3):
        rho = rand_state(d, rng)
        m0 = W.measure_m(rho, 0.1, 1.0)
        for _ in range(10):
            n = rng.integers(1, 4)
            w = rng.dirichlet(np.ones(n))
            us = sample_haar_unitary(d, rng, size=n)
            out = DensityMatrix(sum(wi * u @ rho.matrix @ u.conj().T for wi, u in zip(w, us)))
            assert W.measure_m(out, 0.1, 1.0) <= m0 + 1e-6


def test_stable_free_enhancement_matches_direct():
    e = np.array([[2.0, 1.0, 0.5], [0.3, 0.2, 0.2 - 1e-3]])
    direct = [delta(DensityMatrix.maximally_mixed(3), Hamiltonian.diagonal(row)).delta for row in e]
    np.testing.assert_allclose(W.free_enhancement(e, 1.0), direct, rtol=1e-9)
