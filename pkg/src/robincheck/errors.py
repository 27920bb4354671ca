"""Exception hierarchy shared by all modules."""


class RobincheckError(Exception):
    """Base class for all toolkit errors."""


class UsageError(RobincheckError):
    """Invalid argument or malformed input (CLI exit code 64)."""


class ResourceError(RobincheckError):
    """Request exceeds a configured budget (sieve limit, summation cap, ...)."""


class DomainError(RobincheckError):
    """Mathematical domain violation (log of a non-positive enclosure, ...)."""


class PrecisionError(RobincheckError):
    """A certified decision could not be reached at the precision cap."""


class IncompleteFactorizationError(RobincheckError):
    """The available prime table cannot fully factor the input.

    Raised instead of ever returning a wrong factorization.
    """
