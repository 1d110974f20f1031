"""Exception hierarchy shared by every module."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested computation."""


class RegimeError(DomainError):
    """An asymptotic approximation was requested outside its regime."""


class PrecisionError(ArithmeticError):
    """Two evaluations that should agree did not, even after raising precision."""


class WorkBudgetExceeded(RuntimeError):
    """The estimated amount of big-number work exceeds the configured budget."""
