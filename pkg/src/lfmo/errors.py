"""Exception types shared across the package."""


class LfmoError(Exception):
    """Base class for all package-specific errors."""


class PrecisionLossError(LfmoError):
    """An alternating-sum evaluation lost more accuracy than its guarantee."""


class BudgetExceededError(LfmoError):
    """A path simulation exceeded its jump budget before crossing."""


class UnsupportedRegimeError(LfmoError):
    """The subordinator sits on a tail boundary not covered by any limit law."""


class InvalidDimensionError(LfmoError):
    """An operation received a dimension regime it cannot handle."""
