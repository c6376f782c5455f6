"""Exception hierarchy shared across the package."""


class LRBoundsError(Exception):
    """Base class for all package errors."""


class DomainError(LRBoundsError, ValueError):
    """An argument lies outside the domain of a function."""


class RootNotBracketedError(LRBoundsError):
    """The supplied interval does not contain a sign change."""


class ConvergenceError(LRBoundsError):
    """An iterative routine exhausted its iteration budget."""


class NotPositiveDefiniteError(LRBoundsError):
    """A matrix failed the Cholesky positive-definiteness test."""


class DimensionError(LRBoundsError, ValueError):
    """Operand shapes do not agree."""


class UnknownEntryError(LRBoundsError, KeyError):
    """No catalog entry or family with the given name."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown entry"
