"""Exception hierarchy shared across the package."""


class DecoherenceError(Exception):
    """Base class for all package errors."""
    pass


class UnphysicalStateError(DecoherenceError):
    """Raised when a Bloch vector lies outside the unit ball."""
    pass


class InvariantBreachError(DecoherenceError):
    """Raised when a computed quantity violates a numerical invariant."""
    pass
