"""
Instance and allocation data models.
"""

from fractions import Fraction
from typing import Iterable, Sequence

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .rational import Rational


class Instance(BaseModel):
    """
    Canonical bivalued instance.

    Values are rescaled so every entry is 1 or k (k = high / low > 1) and
    weights are normalized to sum to exactly 1. Build instances through
    ``services.core.validate_instance`` or ``services.core.build_instance``.
    """

    model_config = ConfigDict(frozen=True)

    values: tuple[tuple[Rational, ...], ...] = Field(..., description="Canonical n x m values in {1, k}")
    weights: tuple[Rational, ...] = Field(..., description="Positive weights summing to 1")
    low: Rational = Field(..., description="Raw low value (divisor used for rescaling)")
    high: Rational = Field(..., description="Raw high value")
    agent_labels: tuple[str, ...] = Field(..., description="Agent ids for I/O")
    good_labels: tuple[str, ...] = Field(..., description="Good ids for I/O")

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def m(self) -> int:
        return len(self.good_labels)

    @property
    def k(self) -> Fraction:
        return self.high / self.low

    def value(self, i: int, e: int) -> Fraction:
        """Canonical value of good e for agent i."""
        return self.values[i][e]

    def is_high(self, i: int, e: int) -> bool:
        """Check whether agent i values good e at k."""
        return self.values[i][e] != 1

    def agents(self) -> range:
        return range(self.n)

    def goods(self) -> range:
        return range(self.m)


class Allocation(BaseModel):
    """Assignment of every good to exactly one agent; empty bundles are allowed."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Number of agents")
    owner: tuple[int, ...] = Field(..., description="Owning agent index per good")

    @model_validator(mode="after")
    def _owners_in_range(self) -> "Allocation":
        for e, i in enumerate(self.owner):
            if not 0 <= i < self.n:
                raise ValueError(f"good {e} assigned to unknown agent {i}")
        return self

    @property
    def m(self) -> int:
        return len(self.owner)

    def bundle(self, i: int) -> frozenset[int]:
        """Goods held by agent i."""
        return frozenset(e for e, holder in enumerate(self.owner) if holder == i)

    def bundles(self) -> tuple[frozenset[int], ...]:
        """All bundles, indexed by agent."""
        groups: list[set[int]] = [set() for _ in range(self.n)]
        for e, i in enumerate(self.owner):
            groups[i].add(e)
        return tuple(frozenset(group) for group in groups)

    def moved(self, e: int, i: int) -> "Allocation":
        """Copy of this allocation with good e given to agent i."""
        owner = list(self.owner)
        owner[e] = i
        return Allocation(n=self.n, owner=tuple(owner))

    @classmethod
    def from_bundles(cls, bundles: Sequence[Iterable[int]], m: int) -> "Allocation":
        """
        Build an allocation from explicit bundles.

        Raises:
            ValueError: If the bundles do not partition the m goods
        """
        owner: list[int | None] = [None] * m
        for i, bundle in enumerate(bundles):
            for e in bundle:
                if not 0 <= e < m:
                    raise ValueError(f"unknown good {e}")
                if owner[e] is not None:
                    raise ValueError(f"good {e} appears in two bundles")
                owner[e] = i
        missing = [e for e, i in enumerate(owner) if i is None]
        if missing:
            raise ValueError(f"goods {missing} are not allocated")
        return cls(n=len(bundles), owner=tuple(owner))  # type: ignore[arg-type]
