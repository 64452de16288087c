"""Exception types shared across the package."""


class LREError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgument(LREError, ValueError):
    pass


class ResourceLimit(LREError):
    """A computation would exceed a configured size cap."""


class UnsupportedGeneration(LREError, ValueError):
    """The requested object does not exist at this lattice generation."""


class NoSolution(LREError):
    """The parity system is inconsistent."""


class ConventionViolation(LREError):
    """A port or orientation convention failed a consistency check."""
