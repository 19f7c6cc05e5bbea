"""Resource witnessing over finitely generated free sets and the
work-extraction resource measure for mixed-unitary operations.

At fixed H the storage enhancement is affine in the state, and
``Delta(rho, H) - Delta(eta, H) = tr(H (rho - eta))``. The witness problem is
therefore the concave piecewise-linear maximisation

    max_{eps I <= H <= top I}  min_j tr(H (rho - eta_j)),

whose dual is ``(top - eps)/2 * min_lambda ||rho - sum_j lambda_j eta_j||_1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .config import DEFAULT_TOL, Tolerances
from .errors import InconclusiveError, ValidationError
from .linalg import hermitian
from .states import DensityMatrix, FreeSet, Hamiltonian, hk_family
from .thermo import free_set_max_delta  # noqa: F401  (public re-export)

FOUND = "found"
NOT_FOUND = "not_found"
INCONCLUSIVE = "inconclusive"

GAP_THRESHOLD = 1e-9


@dataclass(frozen=True)
class WitnessResult:
    """Outcome of a witness search.

    ``gap`` is the best ``Delta(rho, H) - max_eta Delta(eta, H)`` reached and
    ``upper_bound`` the dual bound on it. ``status`` is one of ``found``,
    ``not_found`` or ``inconclusive``.
    """

    found: bool
    hamiltonian: Hamiltonian | None
    gap: float
    iterations: int
    upper_bound: float
    status: str

    @property
    def converged(self) -> bool:
        return self.upper_bound - self.gap <= 1e-6 * max(1.0, abs(self.upper_bound))

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "status": self.status,
            "gap": self.gap,
            "upper_bound": self.upper_bound,
            "iterations": self.iterations,
        }


def _project_box(h: np.ndarray, eps: float, top: float) -> np.ndarray:
    """Frobenius-nearest H with spectrum in [eps, top]: clip the eigenvalues."""
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return (v * np.clip(w, eps, top)) @ v.conj().T


def _positive_part_witness(a: np.ndarray, eps: float, top: float) -> np.ndarray:
    w, v = np.linalg.eigh(a)
    p = v[:, w > 0]
    return eps * np.eye(a.shape[0]) + (top - eps) * (p @ p.conj().T)


def _objective(h: np.ndarray, diffs: np.ndarray) -> np.ndarray:
    # tr(H A_j) for each j; A_j Hermitian so the trace is real
    return np.einsum("ij,nji->n", h, diffs).real


def _dual_value(lam: np.ndarray, rho: np.ndarray, etas: np.ndarray) -> float:
    a = rho - np.tensordot(lam, etas, axes=1)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(a))))


def _simplex(x: np.ndarray) -> np.ndarray:
    x = np.abs(x)
    s = x.sum()
    return x / s if s > 0 else np.full_like(x, 1.0 / x.size)


def _dual_minimise(rho: np.ndarray, etas: np.ndarray, starts: list[np.ndarray]) -> tuple[float, np.ndarray]:
    """Minimise the trace distance from rho to the hull of the free points."""
    m = etas.shape[0]
    best_val, best_lam = math.inf, None
    for x0 in starts:
        res = minimize(lambda x: _dual_value(_simplex(x), rho, etas), x0,
                       method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 400 * m,
                                "maxfev": 800 * m})
        lam = _simplex(res.x)
        val = _dual_value(lam, rho, etas)
        if val < best_val:
            best_val, best_lam = val, lam
    return best_val, best_lam


def _recover_primal(lam: np.ndarray, rho: np.ndarray, etas: np.ndarray, diffs: np.ndarray,
                    eps: float, top: float) -> np.ndarray:
    """Witness built from a dual point.

    Positive eigenspace of ``rho - eta_lambda`` gets energy ``top``, negative
    gets ``eps``; on near-null directions the energy is chosen to maximise
    the objective (needed when the dual optimum sits on a kink).
    """
    d = rho.shape[0]
    a = rho - np.tensordot(lam, etas, axes=1)
    w, v = np.linalg.eigh(a)
    scale = max(1e-12, float(np.max(np.abs(w))))
    null = np.abs(w) <= 1e-4 * scale
    pos = (w > 0) & ~null
    base = eps * np.eye(d) + (top - eps) * (v[:, pos] @ v[:, pos].conj().T)
    vn = v[:, null]
    r = vn.shape[1]
    if r == 0:
        return base
    if r == 1:
        u = vn[:, 0]
        slope = (top - eps) * np.einsum("i,nij,j->n", u.conj(), diffs, u).real
        offset = _objective(base, diffs)
        res = minimize_scalar(lambda q: -np.min(offset + q * slope), bounds=(0.0, 1.0),
                              method="bounded", options={"xatol": 1e-13})
        cands = [0.0, 1.0, float(res.x)]
        # kinks of min_j(offset_j + q slope_j) are the exact maximisers
        for i in range(len(slope)):
            for j in range(i + 1, len(slope)):
                if slope[i] != slope[j]:
                    q = (offset[j] - offset[i]) / (slope[i] - slope[j])
                    if 0.0 <= q <= 1.0:
                        cands.append(float(q))
        q = max(cands, key=lambda q: np.min(offset + q * slope))
        return base + q * (top - eps) * np.outer(u, u.conj())
    # higher-dimensional null space: supergradient ascent on the restricted block
    q = 0.5 * np.eye(r)
    best_h, best_g = base, -math.inf
    for k in range(1, 2001):
        h = base + (top - eps) * (vn @ q @ vn.conj().T)
        vals = _objective(h, diffs)
        j = int(np.argmin(vals))
        if vals[j] > best_g:
            best_g, best_h = vals[j], h
        g = (top - eps) * (vn.conj().T @ diffs[j] @ vn)
        q = _project_box(q + g / (max(1e-15, np.linalg.norm(g)) * math.sqrt(k)), 0.0, 1.0)
    return best_h


def witness_search(rho: DensityMatrix, free: FreeSet, eps: float, top: float, *,
                   max_iter: int = 500, step_scale: float | None = None, kBT: float = 1.0,
                   callback: Callable[[np.ndarray], None] | None = None,
                   tol: Tolerances = DEFAULT_TOL) -> WitnessResult:
    """Find ``eps*I <= H <= top*I`` with ``Delta(rho, H) > max_eta Delta(eta, H)``.

    A singleton free set is solved in closed form. Otherwise projected
    supergradient ascent (step ``step_scale/sqrt(k)``, default
    ``step_scale = top - eps``, eigenvalue clipping, best iterate kept) is
    followed by a dual solve that certifies optimality and repairs the
    witness at non-smooth optima. ``callback`` sees every ascent iterate.
    """
    if not (0 <= eps < top):
        raise ValidationError(f"need 0 <= eps < top, got eps={eps!r}, top={top!r}")
    if rho.dim != free.dim:
        raise ValidationError(f"dimension mismatch: state {rho.dim}, free set {free.dim}")
    d = rho.dim
    r = rho.matrix
    etas = np.stack([e.matrix for e in free.extreme_points])
    diffs = r[None, :, :] - etas

    def result(h, gap, iters, upper):
        gap, upper = float(gap), float(max(upper, gap))
        if gap > GAP_THRESHOLD:
            ham = Hamiltonian(hermitian(h), kBT=kBT, bounds=(eps, top))
            return WitnessResult(True, ham, gap, iters, upper, FOUND)
        status = NOT_FOUND if upper <= GAP_THRESHOLD else INCONCLUSIVE
        return WitnessResult(False, None, gap, iters, upper, status)

    if len(free) == 1:
        h = _positive_part_witness(diffs[0], eps, top)
        gap = _objective(h, diffs)[0]
        return result(h, gap, 0, gap)

    # ascent, started from the best single-point closed-form witness
    starts = [_positive_part_witness(a, eps, top) for a in diffs]
    h = max(starts, key=lambda x: np.min(_objective(x, diffs)))
    best_h, best_g = h, float(np.min(_objective(h, diffs)))
    c = (top - eps) if step_scale is None else step_scale
    counts = np.zeros(len(free))
    for k in range(1, max_iter + 1):
        vals = _objective(h, diffs)
        j = int(np.argmin(vals))
        counts[j] += 1
        if vals[j] > best_g:
            best_g, best_h = float(vals[j]), h
        g = diffs[j]
        gn = np.linalg.norm(g)
        if gn == 0:
            break
        h = _project_box(h + (c / math.sqrt(k)) * g / gn, eps, top)
        if callback is not None:
            callback(h)
    vals = _objective(h, diffs)
    if vals.min() > best_g:
        best_g, best_h = float(vals.min()), h

    # dual certificate and primal repair
    m = len(free)
    lam_starts = [counts / counts.sum() if counts.sum() else np.full(m, 1.0 / m)]
    lam_starts += [np.eye(m)[i] * 0.9 + 0.1 / m for i in range(m)]
    lam_starts.append(np.full(m, 1.0 / m))
    dual, lam = _dual_minimise(r, etas, lam_starts)
    upper = (top - eps) * dual
    h2 = _recover_primal(lam, r, etas, diffs, eps, top)
    g2 = float(np.min(_objective(h2, diffs)))
    if g2 > best_g:
        best_g, best_h = g2, h2
    return result(best_h, best_g, max_iter, upper)


@dataclass(frozen=True)
class SamplingPlan:
    """Candidate Hamiltonians for the resource measure.

    Both numerator and denominator depend on H only through its spectrum, so
    candidates are spectra: the two-level family rescaled into [eps, top] and
    ``n_random`` spectra drawn uniformly from [eps, top]. Refinement contracts
    every candidate towards the identity down to ``spread_floor`` (the ratio
    only grows along that path) and then optimises the spectral shape locally.
    """

    n_random: int = 64
    seed: int = 0
    include_hk: bool = True
    refine: bool = True
    spread_floor: float = 1e-6
    shape_grid: int = 101


@dataclass(frozen=True)
class MeasureResult:
    value: float
    ratio: float
    energies: tuple[float, ...]
    spread: float
    at_threshold: bool
    n_candidates: int

    def to_dict(self) -> dict:
        return {
            "measure": self.value,
            "ratio": self.ratio,
            "energies": list(self.energies),
            "spread": self.spread,
            "at_threshold": self.at_threshold,
            "n_candidates": self.n_candidates,
        }


def _expm1_minus_id(z: np.ndarray) -> np.ndarray:
    small = np.abs(z) < 1e-2
    zs = z[small]
    out = np.empty_like(z)
    out[small] = zs * zs * (0.5 + zs * (1 / 6 + zs * (1 / 24 + zs * (1 / 120 + zs / 720))))
    out[~small] = np.expm1(z[~small]) - z[~small]
    return out


def free_enhancement(energies: np.ndarray, kBT: float) -> np.ndarray:
    """``Delta(I/d, H) = mean(E) + kBT (ln Z - ln d)`` for rows of energies.

    Evaluated as ``kBT ln mean exp(-(E - mean E)/kBT)`` with the linear term
    removed analytically, which keeps full relative accuracy when the
    spectral spread is tiny.
    """
    e = np.atleast_2d(energies)
    z = -(e - e.mean(axis=1, keepdims=True)) / kBT
    big = np.abs(z).max(axis=1) > 1e-2
    out = np.empty(e.shape[0])
    if np.any(~big):
        out[~big] = kBT * np.log1p(_expm1_minus_id(z[~big]).mean(axis=1))
    if np.any(big):
        zb = z[big]
        zmax = zb.max(axis=1, keepdims=True)
        lme = np.log(np.exp(zb - zmax).mean(axis=1)) + zmax[:, 0]
        out[big] = kBT * lme
    return out


def enhancement_ratio(spectrum: np.ndarray, energies: np.ndarray, kBT: float) -> np.ndarray:
    """``Delta_MU(rho, H) / Delta(I/d, H)`` for rows of non-increasing energies."""
    e = np.atleast_2d(energies)
    d = e.shape[1]
    shifted = e - e[:, -1:]
    excess = shifted @ (np.asarray(spectrum) - 1.0 / d)
    return 1.0 + excess / free_enhancement(e, kBT)


def measure_report(rho: DensityMatrix, eps: float, top: float, plan: SamplingPlan = SamplingPlan(),
                   kBT: float = 1.0) -> MeasureResult:
    """Work-extraction resource measure for mixed-unitary operations with free set ``{I/d}``.

    ``log2 max_H Delta_MU(rho, H) / Delta(I/d, H)``, floored at 0, over
    ``eps*I <= H <= top*I`` excluding Hamiltonians whose spectral spread is
    below ``plan.spread_floor`` (where the ratio is 0/0). The ratio grows
    without bound as the spread shrinks, so the maximiser normally lies on
    that exclusion threshold; ``at_threshold`` reports this.
    """
    if not (0 <= eps < top):
        raise ValidationError(f"need 0 <= eps < top, got eps={eps!r}, top={top!r}")
    d = rho.dim
    floor = plan.spread_floor
    if d < 2 or top - eps < floor:
        raise InconclusiveError("every admissible Hamiltonian is degenerate (H ~ c*I)")
    p = rho.spectrum
    cands = []
    if plan.include_hk:
        cands += [eps + (top - eps) * h.energies for h in hk_family(d)]
    if plan.n_random:
        rng = np.random.default_rng(plan.seed)
        cands += list(-np.sort(-rng.uniform(eps, top, size=(plan.n_random, d)), axis=1))
    if not cands:
        raise InconclusiveError("sampling plan produced no Hamiltonians")
    e = np.array(cands, dtype=float)
    spread = e[:, 0] - e[:, -1]
    keep = spread >= floor
    if not np.any(keep):
        raise InconclusiveError("all sampled Hamiltonians are degenerate (H ~ c*I)")
    e, spread = e[keep], spread[keep]
    ratios = enhancement_ratio(p, e, kBT)
    i = int(np.argmax(ratios))
    best_ratio, best_e = float(ratios[i]), e[i]

    if plan.refine:
        shapes = (e - e[:, -1:]) / spread[:, None]
        contracted = eps + floor * shapes
        cr = enhancement_ratio(p, contracted, kBT)
        j = int(np.argmax(cr))
        if cr[j] > best_ratio:
            best_ratio, best_e = float(cr[j]), contracted[j]
        if d >= 3:
            shape, r = _optimise_shape(p, shapes, cr, eps, floor, kBT, plan.shape_grid)
            if r > best_ratio:
                best_ratio, best_e = r, eps + floor * shape

    s = float(best_e[0] - best_e[-1])
    value = math.log2(best_ratio) if best_ratio > 1.0 else 0.0
    return MeasureResult(value, best_ratio, tuple(float(x) for x in best_e), s,
                         bool(s <= floor * (1 + 1e-9)), int(e.shape[0]))


def _optimise_shape(p, shapes, ratios, eps, floor, kBT, grid_size):
    """Maximise the ratio over spectral shapes ``(1, u_1, ..., u_{d-2}, 0)`` at the floor spread."""
    d = shapes.shape[1]

    def ratio_of(u):
        y = np.concatenate(([1.0], -np.sort(-np.clip(u, 0.0, 1.0)), [0.0]))
        return float(enhancement_ratio(p, eps + floor * y, kBT)[0]), y

    if d == 3:
        grid = np.linspace(0.0, 1.0, grid_size)
        y = np.column_stack([np.ones_like(grid), grid, np.zeros_like(grid)])
        vals = enhancement_ratio(p, eps + floor * y, kBT)
        k = int(np.argmax(vals))
        lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, grid_size - 1)]
        res = minimize_scalar(lambda u: -ratio_of(np.array([u]))[0], bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-12})
        r_opt, y_opt = ratio_of(np.array([res.x]))
        if r_opt >= vals[k]:
            return y_opt, r_opt
        return y[k], float(vals[k])

    order = np.argsort(-ratios)[:4]
    best_r, best_y = -math.inf, None
    for i in order:
        u0 = shapes[i, 1:-1]
        res = minimize(lambda u: -ratio_of(u)[0], u0, method="L-BFGS-B",
                       bounds=[(0.0, 1.0)] * (d - 2))
        r, y = ratio_of(res.x)
        if r > best_r:
            best_r, best_y = r, y
    return best_y, best_r


def measure_m(rho: DensityMatrix, eps: float, top: float, plan: SamplingPlan = SamplingPlan(),
              kBT: float = 1.0) -> float:
    return measure_report(rho, eps, top, plan, kBT).value
