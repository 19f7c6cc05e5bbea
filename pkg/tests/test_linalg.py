import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import eigenvalues_by_bisection, expm_taylor
from workconv.errors import DomainError, ValidationError
from workconv.linalg import eigh, herm_func, hermitian, sample_haar_unitary, sample_hs_state


def random_hermitian(d, rng, scale=1.0):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * (a + a.conj().T) / 2


def test_eigh_diagonal():
    dec = eigh(np.diag([1.0, 0.0]))
    np.testing.assert_allclose(dec.values, [1.0, 0.0])
    np.testing.assert_allclose(np.abs(dec.vectors), np.eye(2))


def test_eigh_rank_one_projector():
    dec = eigh(0.5 * np.array([[1, 1], [1, 1]]))
    np.testing.assert_allclose(dec.values, [1.0, 0.0], atol=1e-15)


def test_eigh_matches_characteristic_polynomial(rng):
    for _ in range(5):
        m = random_hermitian(4, rng)
        np.testing.assert_allclose(eigh(m).values, eigenvalues_by_bisection(m), atol=1e-8)


def test_eigh_unitary_and_reconstruction(rng):
    m = random_hermitian(5, rng)
    dec = eigh(m)
    assert np.all(np.diff(dec.values) <= 0)
    assert np.linalg.norm(dec.vectors.conj().T @ dec.vectors - np.eye(5)) < 1e-10
    assert np.linalg.norm(dec.reconstruct() - m) < 1e-9


def test_hermitian_symmetrises_small_defects_and_rejects_large():
    m = np.array([[1.0, 2.0 + 1e-10], [2.0, 0.0]])
    h = hermitian(m)
    assert np.allclose(h, h.conj().T, atol=0)
    with pytest.raises(ValidationError):
        hermitian(np.array([[1.0, 2.0], [2.1, 0.0]]))
    with pytest.raises(ValidationError):
        hermitian(np.ones((2, 3)))


def test_herm_func_examples(rng):
    np.testing.assert_allclose(herm_func(np.diag([0.0, -1.0]), np.exp), np.diag([1.0, np.exp(-1)]),
                               atol=1e-15)
    m = random_hermitian(3, rng)
    np.testing.assert_allclose(herm_func(m, lambda x: x), m, atol=1e-12)
    np.testing.assert_allclose(herm_func(m, np.exp), expm_taylor(m), atol=1e-9)


def test_herm_func_domain_error():
    with pytest.raises(DomainError) as exc:
        herm_func(np.diag([1.0, -1.0]), np.log)
    assert exc.value.eigenvalue == -1.0


def test_exp_commutes_with_conjugation(rng):
    for _ in range(10):
        m = random_hermitian(3, rng)
        u = sample_haar_unitary(3, rng)
        lhs = u @ herm_func(m, np.exp) @ u.conj().T
        np.testing.assert_allclose(lhs, herm_func(u @ m @ u.conj().T, np.exp), atol=1e-9)


def test_haar_examples():
    u = sample_haar_unitary(1, seed=3)
    assert u.shape == (1, 1) and abs(abs(u[0, 0]) - 1) < 1e-12
    np.testing.assert_array_equal(sample_haar_unitary(2, seed=7), sample_haar_unitary(2, seed=7))
    v = sample_haar_unitary(4, seed=1)
    assert np.linalg.norm(v.conj().T @ v - np.eye(4)) < 1e-10


def test_haar_second_moment():
    u = sample_haar_unitary(3, seed=11, size=10_000)
    x = np.abs(u[:, 0, 0]) ** 2
    se = x.std() / np.sqrt(x.size)
    assert abs(x.mean() - 1 / 3) < 3 * se


def test_hs_state_examples():
    np.testing.assert_allclose(sample_hs_state(1, seed=0), [[1.0]])
    rho = sample_hs_state(4, seed=5)
    assert abs(np.trace(rho) - 1) < 1e-12
    assert np.linalg.eigvalsh(rho).min() >= -1e-12


def test_hs_mean_purity_qubit():
    # Hilbert-Schmidt qubits are uniform in the Bloch ball: E[r^2] = 3/5,
    # so E[tr rho^2] = (1 + 3/5)/2 = 4/5.
    rng = np.random.default_rng(99)
    rhos = np.array([sample_hs_state(2, rng) for _ in range(10_000)])
    purity = np.einsum("nij,nji->n", rhos, rhos).real
    se = purity.std() / np.sqrt(purity.size)
    assert abs(purity.mean() - 4 / 5) < 3 * se
    bloch_r2 = 2 * purity - 1
    assert abs(bloch_r2.mean() - 3 / 5) < 3 * (bloch_r2.std() / np.sqrt(bloch_r2.size))


@settings(max_examples=50, deadline=None)
@given(d=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_reconstruction_property(d, seed):
    rng = np.random.default_rng(seed)
    m = random_hermitian(d, rng, scale=rng.uniform(0.1, 10))
    dec = eigh(m)
    assert np.linalg.norm(dec.reconstruct() - m) < 1e-9 * max(1, np.linalg.norm(m))
    rho = sample_hs_state(d, rng)
    assert abs(np.linalg.eigvalsh(rho).sum() - 1) < 1e-12
