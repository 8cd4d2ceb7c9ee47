"""Exception types shared across the package."""


class QmajError(Exception):
    """Base class for all errors raised by qmaj."""


class DomainError(QmajError, ValueError):
    """An argument lies outside the domain of the operation."""


class ResourceLimitError(QmajError, ValueError):
    """A request exceeds the size limits of brute-force enumeration."""


class ConsistencyError(QmajError, RuntimeError):
    """Independent routes to the same exact quantity disagreed."""
