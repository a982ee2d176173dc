"""Exception taxonomy shared by all modules.

The CLI maps these onto exit codes: AccuracyError -> 2,
DomainError / GeometryError -> 3, ResourceError -> 4.
"""


class TrimollError(Exception):
    """Base class for package errors."""


class DomainError(TrimollError):
    """Argument outside the mathematical domain (pole, branch cut, bad range)."""


class AccuracyError(TrimollError):
    """A numerical routine could not reach its accuracy target.

    Carries the best residual estimate when one is available.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ResourceError(TrimollError):
    """A configured budget (memory, term count, panel count) was exceeded."""

    def __init__(self, message, partial_count=None):
        super().__init__(message)
        self.partial_count = partial_count


class GeometryError(TrimollError):
    """A contour/rectangle problem could not be regularized (e.g. boundary zero)."""


class UsageError(TrimollError):
    """Bad CLI flags or config file contents."""
