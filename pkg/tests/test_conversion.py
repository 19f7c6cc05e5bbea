import numpy as np
import pytest

from oracles import majorises_by_sums, schmidt_squares
from workconv import conversion as C
from workconv.errors import ValidationError
from workconv.linalg import sample_haar_unitary, sample_hs_state
from workconv.states import DensityMatrix, PureBipartiteState


def rand_state(d, rng):
    return DensityMatrix(sample_hs_state(d, rng))


def test_identity_conversion(rng):
    rho = rand_state(3, rng)
    v = C.unital_convertible(rho, rho)
    assert v.convertible and v.via == "unital_mu" and v.boundary
    np.testing.assert_allclose(v.delta_gaps, 0, atol=1e-12)
    np.testing.assert_allclose(v.certificate.doubly_stochastic, np.eye(3), atol=1e-12)
    assert [p for _, p in v.certificate.birkhoff_terms] == [(0, 1, 2)]


def test_pure_to_uniform():
    v = C.unital_convertible(DensityMatrix.pure([0, 0, 1]), DensityMatrix.maximally_mixed(3))
    assert v.convertible


def test_gap_example():
    rho = DensityMatrix.diagonal([0.2, 0.3, 0.5])
    sigma = DensityMatrix.diagonal([0.35, 0.25, 0.4])
    for omega in (1.0, 2.5):
        v = C.unital_convertible(rho, sigma, omega=omega)
        assert v.convertible
        np.testing.assert_allclose(v.delta_gaps, [0.1 * omega, 0.05 * omega], atol=1e-12)


def test_not_convertible_has_no_certificate():
    v = C.unital_convertible(DensityMatrix.maximally_mixed(2), DensityMatrix.diagonal([0.9, 0.1]))
    assert not v.convertible and v.certificate is None
    d = v.to_dict(certificate=True)
    assert "certificate" not in d and d["majorisation"]["worst_k"] == 0


def test_verdict_scale_invariant_and_matches_oracle(rng):
    for d in range(2, 7):
        for _ in range(20):
            rho, sigma = rand_state(d, rng), rand_state(d, rng)
            verdicts = {C.unital_convertible(rho, sigma, omega=w, certificate=False).convertible
                        for w in (1e-3, 1.0, 1e3)}
            assert verdicts == {majorises_by_sums(rho.spectrum, sigma.spectrum)}


def test_certificate_then_reflexive(rng):
    rho = rand_state(4, rng)
    u = sample_haar_unitary(4, rng)
    sigma = DensityMatrix(0.6 * u @ rho.matrix @ u.conj().T + 0.4 * np.eye(4) / 4)
    v = C.unital_convertible(rho, sigma)
    out = DensityMatrix(v.certificate.apply(rho.matrix))
    assert C.unital_convertible(out, sigma, certificate=False).convertible


def test_dimension_and_omega_errors():
    with pytest.raises(ValidationError):
        C.unital_convertible(DensityMatrix.maximally_mixed(2), DensityMatrix.maximally_mixed(3))
    with pytest.raises(ValidationError):
        C.unital_convertible(DensityMatrix.maximally_mixed(2), DensityMatrix.maximally_mixed(2), omega=0)


def test_nielsen_examples(rng):
    me = PureBipartiteState.maximally_entangled(3)
    prod = PureBipartiteState.from_schmidt([1, 0, 0])
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    other = PureBipartiteState(a / np.linalg.norm(a))
    assert C.nielsen_locc_check(me, other).convertible
    assert C.nielsen_locc_check(me, prod).convertible
    assert not C.nielsen_locc_check(prod, me).convertible
    v = C.nielsen_locc_check(PureBipartiteState.from_schmidt([0.6, 0.4]),
                             PureBipartiteState.from_schmidt([0.8, 0.2]), omega=3.0)
    assert v.convertible and v.via == "locc_pure" and v.certificate is None
    np.testing.assert_allclose(v.delta_gaps, [0.6], atol=1e-12)
    with pytest.raises(ValidationError):
        C.nielsen_locc_check(me, PureBipartiteState.maximally_entangled(2))


def test_nielsen_matches_schmidt_oracle(rng):
    for d in (2, 3, 4):
        for _ in range(30):
            a, b = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)) for _ in range(2))
            psi, phi = PureBipartiteState(a / np.linalg.norm(a)), PureBipartiteState(b / np.linalg.norm(b))
            want = majorises_by_sums(schmidt_squares(phi.amplitudes), schmidt_squares(psi.amplitudes))
            assert C.nielsen_locc_check(psi, phi).convertible == want


def test_sampling_examples(rng):
    rho = rand_state(3, rng)
    rep = C.theorem1_sampling_check(rho, rho, 0.0, 1.0, 300, seed=1)
    assert not rep.violated and rep.min_gap >= -1e-10 and rep.n_checked == 302
    sigma = DensityMatrix(0.5 * rho.matrix + 0.5 * np.eye(3) / 3)
    assert not C.theorem1_sampling_check(rho, sigma, 0.2, 1.0, 300).violated
    rep = C.theorem1_sampling_check(sigma, rho, 0.0, 1.0, 10)
    assert rep.violated and rep.violations[0].source == "hk"
    with pytest.raises(ValidationError):
        C.theorem1_sampling_check(rho, sigma, 1.0, 1.0, 10)


def test_sampling_thread_independent(rng):
    rho, sigma = rand_state(3, rng), rand_state(3, rng)
    a = C.theorem1_sampling_check(rho, sigma, 0.0, 1.0, 1000, seed=9, threads=1)
    b = C.theorem1_sampling_check(rho, sigma, 0.0, 1.0, 1000, seed=9, threads=4)
    assert a.to_dict() == b.to_dict()


def test_sampling_violation_is_real(rng):
    rho, sigma = DensityMatrix.diagonal([0.4, 0.35, 0.25]), DensityMatrix.diagonal([0.5, 0.3, 0.2])
    rep = C.theorem1_sampling_check(rho, sigma, 0.1, 1.0, 200, seed=3, keep_hamiltonians=True)
    from workconv.states import Hamiltonian
    from workconv.thermo import delta_mu_assisted
    for v in rep.violations:
        h = Hamiltonian(v.hamiltonian)
        assert delta_mu_assisted(rho, h) < delta_mu_assisted(sigma, h)
        assert h.energies.min() >= 0.1 - 1e-9 and h.energies.max() <= 1.0 + 1e-9
