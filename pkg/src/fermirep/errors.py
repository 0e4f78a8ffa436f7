"""Exception types raised across the package."""


class DomainError(ValueError):
    """Input outside the domain of an operation."""


class ResourceError(RuntimeError):
    """Requested problem size exceeds a built-in guard."""


class NumericError(ArithmeticError):
    """A quantity that must be real or finite came out otherwise."""


class ConsistencyError(RuntimeError):
    """Two independent computation routes disagreed."""
