"""Exception hierarchy shared by the solver modules."""

from __future__ import annotations


class StefanError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(StefanError, ValueError):
    """A parameter failed validation.

    Attributes:
        field: Name of the offending parameter.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class DomainError(StefanError, ValueError):
    """A function was evaluated outside its domain (t <= 0, non-finite x, ...)."""


class NumericalError(StefanError):
    """Base for failures of the numerical machinery itself."""


class BracketError(NumericalError):
    """The bracket endpoints do not enclose a sign change."""

    def __init__(self, lo: float, hi: float, f_lo: float, f_hi: float):
        super().__init__(
            f"f does not change sign on [{lo!r}, {hi!r}]: f(lo)={f_lo!r}, f(hi)={f_hi!r}"
        )
        self.lo, self.hi = lo, hi
        self.f_lo, self.f_hi = f_lo, f_hi


class ConvergenceError(NumericalError):
    """An iteration exhausted its budget without meeting tolerance."""


class InvariantViolation(NumericalError):
    """A proved property (endpoint sign, positivity, ...) failed numerically.

    These are reported, never repaired: a failure means either a bug or a
    parameter regime where floating point cannot resolve the proved sign.
    """

    def __init__(self, message: str, **context):
        detail = ", ".join(f"{k}={v!r}" for k, v in context.items())
        super().__init__(f"{message} ({detail})" if detail else message)
        self.context = context
