class MPGError(Exception):
    """Base class for all package errors."""


class InstanceError(MPGError, ValueError):
    """Malformed or invalid game instance."""


class DomainError(MPGError):
    """A mathematical precondition of the requested computation does not hold."""


class ResourceLimitError(MPGError):
    """A configured resource guard was exceeded.

    ``best_lower_bound`` carries whatever partial answer was available when the
    guard tripped; it is a valid lower bound but not the exact value.
    """

    def __init__(self, message, best_lower_bound=None):
        super().__init__(message)
        self.best_lower_bound = best_lower_bound
        self.exact = False
