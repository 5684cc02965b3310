class InvalidInputError(ValueError):
    """Raised when an argument violates an operation's precondition."""


class CapacityError(RuntimeError):
    """Raised when a request exceeds a documented resource bound."""


class ConsistencyError(AssertionError):
    """An internal cross-check failed; indicates a bug, never bad input."""
