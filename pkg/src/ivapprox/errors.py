"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class IVAError(Exception):
    """Base class for every error raised by ivapprox."""


class InvalidInterval(IVAError, ValueError):
    pass


class DomainError(IVAError, ValueError):
    pass


class DomainMismatch(IVAError, ValueError):
    pass


class InvalidFunction(IVAError, ValueError):
    pass


class EndpointOrderError(InvalidFunction):
    def __init__(self, x: float, lower: float, upper: float):
        self.x = x
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"lower endpoint exceeds upper endpoint at x={x!r} ({lower!r} > {upper!r})"
        )


class ParseError(IVAError, ValueError):
    def __init__(self, message: str, position: int, expected: frozenset[str] | set[str] = frozenset()):
        self.position = position
        self.expected = frozenset(expected)
        detail = f"{message} at position {position}"
        if self.expected:
            words = {"number", "x", "function", "integer", "end of input"}
            shown = [e if e in words else f"'{e}'" for e in sorted(self.expected)]
            detail += "; expected one of: " + ", ".join(shown)
        super().__init__(detail)


class InvalidDelta(IVAError, ValueError):
    pass


class MonotonicityViolation(IVAError, ValueError):
    pass


class NotMonotone(IVAError, ValueError):
    pass


class NoModulusAvailable(IVAError, ValueError):
    pass


class SearchExhausted(IVAError, RuntimeError):
    def __init__(self, message: str, best_error: float | None = None):
        self.best_error = best_error
        super().__init__(message)


class CoverTooLarge(IVAError, RuntimeError):
    pass


class BudgetInfeasible(IVAError, RuntimeError):
    pass


class FitBudgetExceeded(IVAError, RuntimeError):
    def __init__(self, message: str, best_error: float, report=None):
        self.best_error = best_error
        self.report = report
        super().__init__(message)
