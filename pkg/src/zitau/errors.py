"""Exception hierarchy shared by all zitau modules."""


class ZitauError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ZitauError, ValueError):
    """A parameter lies outside its admissible range."""


class InsufficientDataError(ZitauError, ValueError):
    """Too few observations for the requested statistic."""


class DegenerateError(ZitauError, ArithmeticError):
    """A statistic is undefined because a margin or group is degenerate.

    ``fallback`` optionally carries a usable substitute result.
    """

    def __init__(self, message, fallback=None):
        super().__init__(message)
        self.fallback = fallback


class InvalidCdfError(ZitauError, ValueError):
    """A bivariate cdf produced a clearly negative rectangle probability."""


class PrecisionError(ZitauError, ArithmeticError):
    """Truncated tail mass is too large for the requested accuracy."""


class CostGuardError(ZitauError, ValueError):
    """Input is too large for a deliberately slow reference routine."""
