"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ``DataError`` -> 2, everything else
raised by the numerical layer -> 3.
"""


class SarfimaError(Exception):
    """Base class for all package errors."""


class DataError(SarfimaError):
    """Bad or degenerate input data (missing values, wrong shape, zero variance)."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class ModelInvariantError(SarfimaError):
    """A model violates its construction invariants.

    Carries the full list of violated conditions, not just the first.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid model: " + "; ".join(self.violations))


class EstimationError(SarfimaError):
    """An estimation step failed (singular design, degenerate objective, ...)."""

    def __init__(self, message, condition_number=None):
        super().__init__(message)
        self.condition_number = condition_number


class ConvergenceError(EstimationError):
    """An optimizer hit its iteration cap; carries the best point seen so far."""

    def __init__(self, message, best_params=None, trace=None):
        super().__init__(message)
        self.best_params = best_params
        self.trace = trace


class NumericalError(SarfimaError):
    """A numerical evaluation is undefined or unbounded at the requested point."""
