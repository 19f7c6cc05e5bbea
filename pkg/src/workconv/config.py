"""Tolerances and user-facing energy scales shared by every module."""
from __future__ import annotations

from dataclasses import dataclass, field, replace


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds.

    construction
        Largest Hermiticity defect silently repaired by symmetrisation.
    reconstruction
        Frobenius error allowed when rebuilding a matrix from its eigenpairs.
    equality
        Generic "same number" threshold for derived quantities.
    state
        Trace / negativity tolerance for density matrices.
    verdict
        One-sided tolerance on majorisation and work gaps.
    """

    construction: float = 1e-8
    reconstruction: float = 1e-9
    equality: float = 1e-9
    state: float = 1e-10
    verdict: float = 1e-10

    def __post_init__(self) -> None:
        for name in ("construction", "reconstruction", "equality", "state", "verdict"):
            if not getattr(self, name) > 0:
                raise ValueError(f"tolerance {name!r} must be positive")


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class Config:
    kBT: float = 1.0
    epsilon: float = 0.0
    delta_max: float = 1.0
    omega: float = 1.0
    tol: Tolerances = field(default_factory=Tolerances)
    seed: int = 0
    threads: int = 1

    def __post_init__(self) -> None:
        if not self.kBT > 0:
            raise ValueError("kBT must be positive")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        if not self.epsilon < self.delta_max:
            raise ValueError("epsilon must be smaller than delta_max")
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")

    def with_(self, **changes) -> "Config":
        return replace(self, **changes)
