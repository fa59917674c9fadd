"""Exception types shared across the library."""


class ViewHedgeError(Exception):
    """Base class for all library errors."""


class DomainError(ViewHedgeError, ValueError):
    """An input violates a documented precondition.

    The message always names the offending field or argument.
    """


class MaturityExhaustedError(DomainError):
    """The holding interval consumes the option's remaining life (T - dt <= 0)."""


class DegenerateDenominatorError(ViewHedgeError, ZeroDivisionError):
    """A closed-form quotient is requested where its denominator vanishes.

    Raised by the lambda solvers when the direction they optimize over is
    unidentified (for example no vol-drift view at all); the direct share-count
    formulas remain available in that regime.
    """


class ConfigError(ViewHedgeError, ValueError):
    """A run configuration is malformed; the message names the offending key."""
