"""Thermodynamic functionals of a state and a Hamiltonian.

Everything is evaluated with natural logarithms and reported in energy units
(multiples of kBT). A relative entropy of ``D`` bits corresponds to
``kBT * ln(2) * D`` of work, so results agree with the bit-based
definitions up to that conversion.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import logsumexp

from .config import DEFAULT_TOL, Tolerances
from .errors import ConsistencyError, ValidationError
from .linalg import herm_func
from .states import DensityMatrix, FreeSet, Hamiltonian

LN2 = math.log(2.0)

# Support threshold for relative entropies: sigma eigenvalues below
# SUPPORT_EPS carrying rho-weight above WEIGHT_EPS make D infinite.
SUPPORT_EPS = 1e-12
WEIGHT_EPS = 1e-10

CONSISTENCY_LIMIT = 1e-6


@dataclass(frozen=True)
class WorkReport:
    w: float
    w_inf: float
    delta: float
    delta_closed_form: float
    consistency_gap: float

    def to_dict(self) -> dict:
        return asdict(self)


def _neg_entropy_nats(rho: DensityMatrix) -> float:
    p = rho.spectrum[rho.spectrum > 0]
    return float(np.sum(p * np.log(p)))


def _check_dims(rho: DensityMatrix, other) -> None:
    if rho.dim != other.dim:
        raise ValidationError(f"dimension mismatch: {rho.dim} vs {other.dim}")


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy in bits, with 0 log 0 = 0."""
    return -_neg_entropy_nats(rho) / LN2


def log_partition(h: Hamiltonian) -> float:
    """``ln tr exp(-H/kBT)``, evaluated without overflow."""
    return float(logsumexp(-h.energies / h.kBT))


def thermal_state(h: Hamiltonian) -> DensityMatrix:
    """Gibbs state ``exp(-H/kBT) / Z``."""
    x = -h.energies / h.kBT
    p = np.exp(x - logsumexp(x))
    v = h.eigenvectors
    return DensityMatrix((v * p) @ v.conj().T)


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Umegaki relative entropy ``tr rho (log2 rho - log2 sigma)`` in bits.

    Returns ``math.inf`` when rho has weight outside the support of sigma.
    """
    _check_dims(rho, sigma)
    v = sigma.eigenvectors
    q = sigma.spectrum
    # weight of rho on each eigenvector of sigma: <v_j|rho|v_j>
    weight = np.einsum("ij,ik,kj->j", v.conj(), rho.matrix, v).real
    outside = q < SUPPORT_EPS
    if np.any(weight[outside] > WEIGHT_EPS):
        return math.inf
    inside = ~outside
    cross = float(np.sum(weight[inside] * np.log(q[inside])))
    return (_neg_entropy_nats(rho) - cross) / LN2


def work(rho: DensityMatrix, h: Hamiltonian) -> float:
    """Optimal extractable work ``kBT ln2 D(rho || gamma)``.

    The thermal state is always full rank, so this is finite; its logarithm
    is formed spectrally from H to avoid underflow at large gaps.
    """
    _check_dims(rho, h)
    lnz = log_partition(h)
    log_gamma = herm_func(h.matrix, lambda e: -e / h.kBT - lnz)
    cross = float(np.real(np.sum(rho.matrix * log_gamma.T)))
    return h.kBT * (_neg_entropy_nats(rho) - cross)


def work_inf(rho: DensityMatrix, kBT: float = 1.0) -> float:
    """Work extractable from information content alone, ``W(rho, H=0)``."""
    return kBT * (_neg_entropy_nats(rho) + math.log(rho.dim))


def delta_closed_form(rho: DensityMatrix, h: Hamiltonian) -> float:
    """``tr(H rho) + kBT (ln Z - ln d)``."""
    _check_dims(rho, h)
    energy = float(np.real(np.sum(h.matrix * rho.matrix.T)))
    return energy + h.kBT * (log_partition(h) - math.log(h.dim))


def delta(rho: DensityMatrix, h: Hamiltonian, tol: Tolerances = DEFAULT_TOL) -> WorkReport:
    """Energy storage enhancement ``W(rho, H) - W_inf(rho)``.

    Both the definition and the closed form are evaluated; a disagreement
    above 1e-6 raises ``ConsistencyError``.
    """
    w = work(rho, h)
    w_inf = work_inf(rho, h.kBT)
    d = w - w_inf
    closed = delta_closed_form(rho, h)
    gap = abs(d - closed)
    if not gap <= CONSISTENCY_LIMIT:
        raise ConsistencyError(
            f"definition ({d!r}) and closed form ({closed!r}) of the storage enhancement disagree",
            gap)
    return WorkReport(w=w, w_inf=w_inf, delta=d, delta_closed_form=closed, consistency_gap=gap)


def passive_energy(rho: DensityMatrix, h: Hamiltonian) -> float:
    """``max_U tr(U rho U^dagger H) = sum_i rho_i^down E_i^down``."""
    _check_dims(rho, h)
    return float(np.dot(rho.spectrum, h.energies))


def delta_mu_assisted(rho: DensityMatrix, h: Hamiltonian, tol: Tolerances = DEFAULT_TOL) -> float:
    """Storage enhancement maximised over mixed-unitary channels (requires ``H >= 0``)."""
    if h.energies[-1] < -tol.state:
        raise ValidationError(
            f"mixed-unitary assisted enhancement requires H >= 0; lowest energy {h.energies[-1]!r}")
    return passive_energy(rho, h) + h.kBT * (log_partition(h) - math.log(h.dim))


def free_set_max_delta(free: FreeSet, h: Hamiltonian) -> float:
    """``max_eta Delta(eta, H)`` over the extreme points of the free set.

    Delta is affine in the state at fixed H, so extreme points suffice.
    """
    return max(delta(eta, h).delta for eta in free.extreme_points)


def delta_omin_assisted(rho: DensityMatrix, h: Hamiltonian, free: FreeSet) -> float:
    """Enhancement assisted by mixtures of the identity and free-state preparations.

    The objective ``p Delta(rho) + (1-p) max_eta Delta(eta)`` is linear in p,
    so the maximum sits at an endpoint.
    """
    if len(free) == 0:
        raise ValidationError("free set is empty")
    _check_dims(rho, free)
    return max(delta(rho, h).delta, free_set_max_delta(free, h))
