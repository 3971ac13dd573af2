"""Shared exception types."""


class BudgetError(Exception):
    """An enumeration would exceed the configured size budget."""


class ConsistencyError(RuntimeError):
    """An internal identity that must hold was violated numerically.

    Raised when a tree-probability denominator is not strictly positive or a
    probability falls outside [0, 1] beyond tolerance. Under valid rates these
    indicate a bug, not bad input.
    """
