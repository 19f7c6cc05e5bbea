"""Exception hierarchy. CLI exit codes are keyed off these classes."""


class WorkConvError(Exception):
    """Base class for all package errors."""


class ValidationError(WorkConvError, ValueError):
    """Input violates a documented invariant (non-Hermitian, bad trace, ...)."""


class NumericalError(WorkConvError, ArithmeticError):
    """An iterative numerical routine failed; ``residual`` carries the defect."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class DomainError(WorkConvError, ValueError):
    """A scalar function is undefined at some eigenvalue."""

    def __init__(self, message: str, eigenvalue: float):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class ConsistencyError(NumericalError):
    """Two routes to the same quantity disagree beyond tolerance."""


class NotConvertibleError(WorkConvError):
    """A conversion certificate was requested for a non-majorising pair."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class DecompositionError(NumericalError):
    """Birkhoff decomposition ran out of perfect matchings."""


class TheoremViolationError(WorkConvError, AssertionError):
    """Independent deciders disagreed; indicates a bug, never expected."""


class InconclusiveError(WorkConvError):
    """An optimisation or sampling plan could not reach a verdict."""
