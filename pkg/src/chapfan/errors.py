"""Exception types shared across the package."""


class ChapfanError(Exception):
    """Base class for all package errors."""


class DomainError(ChapfanError, ValueError):
    """Invalid input: nonpositive density, malformed option, out-of-range argument."""


class RegimeError(ChapfanError, RuntimeError):
    """The requested object does not exist in the regime of the given Riemann data."""


class InfeasibleError(ChapfanError, RuntimeError):
    """No admissible choice exists for the requested construction parameter."""
