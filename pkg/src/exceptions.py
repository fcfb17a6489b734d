"""
Exception hierarchy for the fair division toolkit.

Three families map onto CLI exit codes:
- InstanceError: bad input files or flags (exit 2)
- InternalError: a proven bound or invariant did not hold, i.e. a bug (exit 3)
- BudgetError: an oracle refused to run above its size budget (exit 4)
"""

from typing import Optional


class FairDivisionError(Exception):
    """Base class for all errors raised by this package."""


# Input errors

class InstanceError(FairDivisionError):
    """The instance (or a file describing it) is not acceptable."""


class InstanceFormatError(InstanceError):
    """Malformed instance or result document."""


class NonBivaluedError(InstanceError):
    """Valuation matrix uses more than two distinct values."""


class NonPositiveWeightError(InstanceError):
    """Some agent weight is zero or negative."""


class NonPositiveValueError(InstanceError):
    """Some value is zero or negative."""


class DegenerateKError(InstanceError):
    """High and low value coincide, so k = 1."""


class InvalidOwnerOverrideError(InstanceError):
    """An initial owner override is not welfare-maximizing."""


class ResultMismatchError(InstanceError):
    """A result file does not belong to the given instance."""


class EmptyMarketError(FairDivisionError):
    """MBB structure requested for a market without goods."""


# Internal errors

class InternalError(FairDivisionError):
    """A guarantee of the algorithms failed at runtime."""


class RoundBudgetExceededError(InternalError):
    """A transfer loop ran past its proven round bound."""

    def __init__(self, phase: str, bound: int, rounds: int):
        self.phase = phase
        self.bound = bound
        self.rounds = rounds
        super().__init__(f"{phase}: {rounds} rounds exceed the bound {bound}")


class InvariantViolationError(InternalError):
    """A runtime-checked invariant failed."""

    def __init__(self, round_index: int, which: str, detail: Optional[str] = None):
        self.round_index = round_index
        self.which = which
        self.detail = detail
        message = f"invariant '{which}' violated at round {round_index}"
        if detail:
            message += f": {detail}"
        super().__init__(message)


class DoubleRaiseError(InternalError):
    """A group had its prices raised twice."""


class EmptyTransferSetError(InternalError):
    """The big agent has no transferable good."""


# Budget errors

class BudgetError(FairDivisionError):
    """An oracle input is above its budget."""


class BudgetExceededError(BudgetError):
    """Allocation enumeration would exceed max_allocations."""


class LPSizeExceededError(BudgetError):
    """The fPO linear program has too many variables."""
