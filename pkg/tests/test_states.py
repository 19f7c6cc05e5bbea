import numpy as np
import pytest

from oracles import schmidt_squares
from workconv import states as S
from workconv.errors import ValidationError
from workconv.linalg import sample_haar_unitary, sample_hs_state


def test_density_matrix_examples():
    rho = S.DensityMatrix(np.diag([0.75, 0.25]))
    np.testing.assert_allclose(rho.spectrum, [0.75, 0.25])
    assert rho.dim == 2
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1.0


def test_density_matrix_rejects():
    with pytest.raises(ValidationError):
        S.DensityMatrix(np.diag([0.6, 0.6]))
    with pytest.raises(ValidationError):
        S.DensityMatrix(np.diag([1.1, -0.1]))
    with pytest.raises(ValidationError):
        S.DensityMatrix([[0.5, 0.5], [0.4, 0.5]])


def test_tiny_negative_eigenvalue_clamped():
    rho = S.DensityMatrix(np.diag([1.0 + 5e-11, -5e-11]))
    assert rho.spectrum.min() == 0.0
    assert abs(rho.spectrum.sum() - 1) < 1e-15


def test_pure_and_conjugate():
    rho = S.DensityMatrix.pure([1, 1j])
    np.testing.assert_allclose(rho.spectrum, [1, 0], atol=1e-12)
    u = sample_haar_unitary(2, seed=1)
    np.testing.assert_allclose(rho.conjugate(u).spectrum, rho.spectrum, atol=1e-12)


def test_hamiltonian():
    h = S.Hamiltonian.diagonal([0.0, 1.0], kBT=2.0)
    np.testing.assert_allclose(h.energies, [1.0, 0.0])
    with pytest.raises(ValidationError):
        S.Hamiltonian(np.eye(2), kBT=0.0)
    with pytest.raises(ValidationError):
        S.Hamiltonian(np.diag([0.0, 3.0]), bounds=(0.0, 2.0))


def test_bipartite_normalisation():
    psi = S.PureBipartiteState(np.diag([1.0, 0.0]) * (1 + 1e-9))
    assert abs(np.linalg.norm(psi.amplitudes) - 1) < 1e-15
    with pytest.raises(ValidationError):
        S.PureBipartiteState(np.diag([0.5, 0.5]))
    with pytest.raises(ValidationError):
        S.PureBipartiteState(np.ones((2, 3)) / np.sqrt(6))


def test_reduced_state_matches_schmidt(rng):
    for d in (2, 3, 4):
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        psi = S.PureBipartiteState(a / np.linalg.norm(a))
        np.testing.assert_allclose(S.reduced_state(psi).spectrum, schmidt_squares(psi.amplitudes),
                                   atol=1e-12)
    np.testing.assert_allclose(S.reduced_state(S.PureBipartiteState.maximally_entangled(3)).spectrum,
                               [1 / 3] * 3)


def test_reorder_descending():
    rho = S.DensityMatrix(np.diag([0.25, 0.75]))
    np.testing.assert_allclose(S.reorder_descending(rho).matrix, np.diag([0.75, 0.25]))
    plus = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    out = S.reorder_descending(rho, plus)
    np.testing.assert_allclose(out.matrix, [[0.5, 0.25], [0.25, 0.5]], atol=1e-15)
    with pytest.raises(ValidationError):
        S.reorder_descending(rho, [[1, 0], [1, 0]])


def test_two_level_hamiltonians():
    h = S.two_level_hamiltonian(4, 1, omega=2.0)
    np.testing.assert_allclose(np.diag(h.matrix).real, [2, 2, 0, 0])
    assert len(S.hk_family(5)) == 4
    with pytest.raises(ValueError):
        S.two_level_hamiltonian(3, 2)


def test_free_set():
    fs = S.FreeSet.maximally_mixed(3)
    assert fs.label == "max-mixed" and len(fs) == 1 and fs.dim == 3
    with pytest.raises(ValidationError):
        S.FreeSet([])
    with pytest.raises(ValidationError):
        S.FreeSet([np.eye(2) / 2, np.eye(3) / 3])


def test_reduced_state_examples():
    psi = S.PureBipartiteState(np.diag(np.sqrt([0.7, 0.3])))
    np.testing.assert_allclose(S.reduced_state(psi).matrix, np.diag([0.7, 0.3]), atol=1e-15)
    prod = S.PureBipartiteState([[1, 0], [0, 0]])
    np.testing.assert_allclose(S.reduced_state(prod).matrix, np.diag([1, 0]))


def test_reorder_pure_and_random(rng):
    u = sample_haar_unitary(3, rng)
    pure = S.DensityMatrix.pure(rng.standard_normal(3) + 1j * rng.standard_normal(3))
    np.testing.assert_allclose(S.reorder_descending(pure, u).spectrum, [1, 0, 0], atol=1e-12)
    rho = S.DensityMatrix(sample_hs_state(3, rng))
    out = S.reorder_descending(rho, u)
    np.testing.assert_allclose(out.spectrum, rho.spectrum, atol=1e-12)
    ref = u @ np.diag([2.0, 1.0, 0.0]) @ u.conj().T
    np.testing.assert_allclose(out.matrix @ ref, ref @ out.matrix, atol=1e-12)


def test_hk_degeneracy():
    for d in range(2, 6):
        for k in range(d - 1):
            e = S.two_level_hamiltonian(d, k, omega=0.5).energies
            assert set(np.round(e, 12)) == {0.0, 0.5}
            assert np.count_nonzero(e == 0.0) == d - k - 1
    np.testing.assert_allclose(np.diag(S.two_level_hamiltonian(4, 2, 0.5).matrix).real, [0.5, 0.5, 0.5, 0])
