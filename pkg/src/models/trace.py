"""
Solver modes, agent groups and per-round trace records.
"""

from enum import Enum
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from .rational import Rational
from .report import Verdict


class Metric(str, Enum):
    """
    Comparison metric shared by initialization and reallocation.

    SPENDING compares weighted spending p(X_i)/w_i and yields WEFX;
    VALUE compares weighted own utility v_i(X_i)/w_i and yields WEQX.
    """
    SPENDING = "spending"
    VALUE = "value"

    @classmethod
    def from_criterion(cls, criterion: str) -> "Metric":
        """Map a CLI mode ("wefx" / "weqx") to a metric."""
        mapping = {"wefx": cls.SPENDING, "weqx": cls.VALUE}
        try:
            return mapping[criterion.lower()]
        except KeyError:
            raise ValueError(f"Unknown mode: {criterion}") from None

    @property
    def criterion(self) -> str:
        return "wefx" if self is Metric.SPENDING else "weqx"


InitMode = Metric
ReallocMode = Metric


class AgentGroups(BaseModel):
    """Ordered partition N_1..N_R of the agents with representatives."""

    model_config = ConfigDict(frozen=True)

    groups: tuple[tuple[int, ...], ...]
    representatives: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.groups)

    def group_index(self, i: int) -> int:
        """Index r (0-based) of the group containing agent i."""
        for r, members in enumerate(self.groups):
            if i in members:
                return r
        raise KeyError(f"agent {i} is not in any group")

    def index_map(self) -> dict[int, int]:
        return {i: r for r, members in enumerate(self.groups) for i in members}


class InitRoundRecord(BaseModel):
    """One transfer-path round of the initialization loop."""
    round: int
    path: tuple[int, ...]
    moves: tuple[tuple[int, int, int], ...] = Field(..., description="(good, from, to) in execution order")
    start_metric: Rational


class PriceRiseRecord(BaseModel):
    """Prices of all goods held by a group were multiplied by factor."""
    kind: Literal["price-rise"] = "price-rise"
    round: int
    group: int = Field(..., description="Group index; -1 for a GM reachability set")
    agents: tuple[int, ...]
    goods: tuple[int, ...]
    factor: Rational
    least: int
    big: Optional[int] = None


class TransferRecord(BaseModel):
    """One good moved from the big agent to the least agent."""
    kind: Literal["transfer"] = "transfer"
    round: int
    giver: int
    receiver: int
    good: int
    giver_unraised: Optional[bool] = Field(None, description="Whether the giver was unraised; unset for GM rounds")


RoundRecord = Annotated[Union[PriceRiseRecord, TransferRecord], Field(discriminator="kind")]


class RoundVerdicts(BaseModel):
    """Invariant monitor output for one round."""
    round: int
    verdicts: list[Verdict]


class SolveTrace(BaseModel):
    """
    Full record of a reallocation run.

    ``unraised_evolution`` and ``q_evolution`` hold the sets U and Q at the
    beginning of every round plus one final entry after the last round.
    """
    mode: Metric
    initial_owner: tuple[int, ...]
    initial_prices: tuple[Rational, ...]
    init_rounds: list[InitRoundRecord] = Field(default_factory=list)
    rounds: list[RoundRecord] = Field(default_factory=list)
    unraised_evolution: list[tuple[int, ...]] = Field(default_factory=list)
    q_evolution: list[tuple[int, ...]] = Field(default_factory=list)
    invariant_verdicts: list[RoundVerdicts] = Field(default_factory=list)

    @property
    def price_rises(self) -> list[PriceRiseRecord]:
        return [row for row in self.rounds if isinstance(row, PriceRiseRecord)]

    @property
    def transfers(self) -> list[TransferRecord]:
        return [row for row in self.rounds if isinstance(row, TransferRecord)]

    @property
    def r_star(self) -> int:
        """1-based index of the first unraised group after the last round."""
        return len(self.price_rises) + 1


class GMTrace(BaseModel):
    """Round records and price history of a GM reference run."""
    initial_owner: tuple[int, ...]
    initial_prices: tuple[Rational, ...]
    rounds: list[RoundRecord] = Field(default_factory=list)
    price_history: list[tuple[Rational, ...]] = Field(
        default_factory=list, description="Prices after every outer step"
    )
