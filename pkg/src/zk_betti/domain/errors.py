"""
zk-betti - Error Types

Every failure the library raises on purpose derives from ZkBettiError, so the
CLI can map it to an exit code without catching unrelated exceptions.
"""

from typing import Optional


class ZkBettiError(Exception):
    """Base class for zk-betti errors."""
    pass


class ComplexError(ZkBettiError, ValueError):
    """Invalid simplicial complex input (vertex range, duplicates, bad file)."""
    pass


class FieldError(ZkBettiError, ValueError):
    """Invalid coefficient field (non-prime modulus, unknown name)."""
    pass


class GuardExceeded(ZkBettiError):
    """An exponential computation was refused by a size or budget guard."""

    def __init__(self, message: str, hint: Optional[str] = None):
        super().__init__(message)
        self.hint = hint

    def __str__(self) -> str:
        base = super().__str__()
        return f"{base} ({self.hint})" if self.hint else base


class InvariantViolation(ZkBettiError):
    """An internal consistency check failed."""
    pass
