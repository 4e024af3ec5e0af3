"""Exception types shared across the package."""


class HtAlgebraError(Exception):
    """Base class for all package errors."""


class MalformedInputError(HtAlgebraError, ValueError):
    """Input violates a structural precondition (e.g. a zero multiplicity)."""


class NonIntegralPoleError(MalformedInputError):
    """A denominator has a root that is not an integer."""


class NotRationalError(HtAlgebraError):
    """Components are inconsistent with a rational kernel for the given annihilator."""


class UnsupportedError(HtAlgebraError):
    """The requested product or extension is not defined."""


class UndefinedProductError(HtAlgebraError, KeyError):
    """A conformal product needs a table entry that is missing."""


class BoundExceededError(HtAlgebraError):
    """A vertex computation would exceed the configured degree bound."""


class DivergenceError(HtAlgebraError, ArithmeticError):
    """A numerical trajectory produced NaN or overflow."""

    def __init__(self, message: str, step: int):
        super().__init__(f"{message} at step {step}")
        self.step = step


class ParseError(HtAlgebraError, ValueError):
    """Textual expression could not be parsed."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ConfigError(HtAlgebraError, ValueError):
    """Invalid run configuration."""
