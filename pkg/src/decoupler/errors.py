"""Shared exception types."""


class SizeCapExceeded(RuntimeError):
    """A requested construction would exceed the configured size cap."""


class SearchBudgetExceeded(RuntimeError):
    """A backtracking search ran out of node budget (result inconclusive)."""


class DesignNotFound(RuntimeError):
    """A backtracking search exhausted its space without a solution."""
