"""Shared exception types."""

from __future__ import annotations


class SearchBudgetExceeded(RuntimeError):
    """A bounded search ran out of its node or wall-clock budget.

    Distinct from a negative verdict: the search saw only part of the
    space, so nothing may be concluded.  When available, ``frontier``
    holds a resumable snapshot of the unexplored region.
    """

    def __init__(self, message: str, frontier=None):
        super().__init__(message)
        self.frontier = frontier
