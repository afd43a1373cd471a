"""Exception types shared across the package."""


class GapsieveError(Exception):
    """Base class for all package-specific errors."""


class DomainError(GapsieveError, ValueError):
    """Input outside an operation's documented domain."""


class BudgetError(GapsieveError):
    """A configured size/enumeration budget was exceeded."""


class ResourceLimitError(GapsieveError):
    """Result would exceed a configured ceiling (e.g. the sieve ceiling)."""


class ScaleError(GapsieveError):
    """Requested computation is beyond the supported toy-scale caps."""


class InadmissibleTupleError(GapsieveError):
    """Operation requires an admissible tuple; a covering prime witness is attached."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SingularityError(GapsieveError):
    """A product factor that must be nonzero/positive vanished or flipped sign."""


class InfeasibleError(GapsieveError):
    """Parameter search found no feasible candidate within budget."""
