"""Exception taxonomy shared by every module."""

from __future__ import annotations


class PartitionVCError(Exception):
    """Base class for all errors raised by this package."""


class InputError(PartitionVCError, ValueError):
    """Invalid input: bad indices, malformed files, violated preconditions."""


class SchemaError(InputError):
    pass


class RangeError(InputError):
    """An item index falls outside the universe."""


class OverlapError(InputError):
    """The two sides of a partition share an item."""


class UniverseMismatch(InputError):
    pass


class EmptyFamily(InputError):
    pass


class TooFewEntries(InputError):
    pass


class InvalidPairing(InputError):
    pass


class NotCoveringError(InputError):
    pass


class EmptyRange(InputError):
    pass


class NotInRange(InputError):
    pass


class InvalidEmbedding(InputError):
    pass


class NotShattered(InputError):
    pass


class InfeasibleDesign(InputError):
    pass


class InvalidDesign(InputError):
    pass


class NotRegular(InputError):
    pass


class NonMonotoneValuation(InputError):
    pass


class BudgetExceeded(PartitionVCError):
    """An exhaustive enumeration would exceed the configured budget."""


class TargetUnreached(PartitionVCError):
    """A code construction stopped before reaching its target size.

    The partial result is attached so callers can still use it.
    """

    def __init__(self, message: str, family=None, attempts: int = 0):
        super().__init__(message)
        self.family = family
        self.attempts = attempts

    @property
    def achieved(self) -> int:
        return 0 if self.family is None else len(self.family)


class VerificationFailure(PartitionVCError, AssertionError):
    """A property that must always hold was observed to fail."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}
