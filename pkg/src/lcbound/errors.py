"""Shared exception types."""


class UnsupportedSizeError(ValueError):
    """Raised when a register length exceeds what the implementation handles."""


class InvariantError(RuntimeError):
    """Raised when a computed result violates one of its own structural invariants."""
