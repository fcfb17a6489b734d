"""
Verification verdicts and reports.
"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field

from .rational import Rational


class VerdictStatus(str, Enum):
    """Outcome of one criterion."""
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not-applicable"


class Witness(BaseModel):
    """
    Failure witness for a criterion.

    For pairwise fairness criteria ``agent`` envies ``other`` after removing
    ``good`` and ``lhs < rhs`` is the violated inequality. For the
    equilibrium predicate ``lhs`` is the MBB ratio and ``rhs`` the ratio of
    the offending good.
    """
    agent: int
    other: Optional[int] = None
    good: Optional[int] = None
    lhs: Rational
    rhs: Rational


class Verdict(BaseModel):
    """Verdict for a single criterion."""
    criterion: str
    status: VerdictStatus
    witness: Optional[Witness] = None
    counterexample: Optional[tuple[int, ...]] = Field(
        None, description="Owner vector of a dominating allocation (PO oracle)"
    )
    note: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status == VerdictStatus.PASS

    @property
    def failed(self) -> bool:
        return self.status == VerdictStatus.FAIL

    @classmethod
    def ok(cls, criterion: str, note: Optional[str] = None) -> "Verdict":
        return cls(criterion=criterion, status=VerdictStatus.PASS, note=note)

    @classmethod
    def fail(
        cls,
        criterion: str,
        witness: Optional[Witness] = None,
        note: Optional[str] = None,
        counterexample: Optional[tuple[int, ...]] = None,
    ) -> "Verdict":
        return cls(
            criterion=criterion,
            status=VerdictStatus.FAIL,
            witness=witness,
            note=note,
            counterexample=counterexample,
        )

    @classmethod
    def not_applicable(cls, criterion: str, note: str) -> "Verdict":
        return cls(criterion=criterion, status=VerdictStatus.NOT_APPLICABLE, note=note)


class VerifyReport(BaseModel):
    """Ordered collection of verdicts, one per criterion."""
    verdicts: list[Verdict] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        """True when no verdict failed (not-applicable does not fail)."""
        return not any(verdict.failed for verdict in self.verdicts)

    def get(self, criterion: str) -> Optional[Verdict]:
        for verdict in self.verdicts:
            if verdict.criterion == criterion:
                return verdict
        return None

    def failures(self) -> list[Verdict]:
        return [verdict for verdict in self.verdicts if verdict.failed]

    def merged(self, other: "VerifyReport") -> "VerifyReport":
        return VerifyReport(verdicts=[*self.verdicts, *other.verdicts])
