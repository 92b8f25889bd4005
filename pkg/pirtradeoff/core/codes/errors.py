"""Failures of code constructions that are reported to the caller."""

from typing import Optional


class InfeasibleCodeError(ValueError):
    """The requested rates cannot hold the typical sequences at this length.

    Args:
        message: description of the failure.
        min_delta: smallest margin that makes the construction feasible.
    """

    def __init__(self, message: str, min_delta: Optional[float] = None) -> None:
        super().__init__(message)
        self.min_delta = min_delta


class ExpurgationError(ValueError):
    """No zero-error subcode of the required size was found."""

    def __init__(self, message: str, bad_count: int, good_count: int, needed: int) -> None:
        super().__init__(message)
        self.bad_count = bad_count
        self.good_count = good_count
        self.needed = needed
