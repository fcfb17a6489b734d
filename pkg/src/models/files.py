"""
JSON document schemas for instance and result files.
"""

from typing import Optional

from pydantic import BaseModel, Field

from .rational import Rational
from .report import VerifyReport
from .trace import Metric, SolveTrace


class AgentEntry(BaseModel):
    """One agent of an instance file."""
    id: str = Field(..., description="Agent id")
    weight: Rational = Field(..., description="Positive weight (any scale)")
    values: list[Rational] = Field(..., description="Raw value per good, in goods order")


class InstanceMeta(BaseModel):
    """Optional instance metadata."""
    k: Optional[Rational] = Field(None, description="Declared high/low ratio")
    seed: Optional[int] = Field(None, description="Generator seed, when generated")


class InstanceFile(BaseModel):
    """Instance document: {"agents": [...], "goods": [...], "meta": {...}}."""
    agents: list[AgentEntry]
    goods: list[str]
    meta: InstanceMeta = Field(default_factory=InstanceMeta)


class RoundCounts(BaseModel):
    """Transfer round counts of both phases."""
    init: int
    realloc: int


class TieBreakConfig(BaseModel):
    """Echo of the deterministic tie-breaking rules used by a solve."""
    high_goods: str = "lowest-index agent valuing the good k"
    low_goods: str = "first agent"
    agents: str = "lowest agent index"
    transfer_good: str = "minimum price, then lowest good index"
    initial_owners: Optional[list[str]] = Field(
        None, description="Owner override (agent id per good), when given"
    )


class ResultFile(BaseModel):
    """Solver output document, re-verifiable offline."""
    mode: Metric
    agents: list[str]
    goods: list[str]
    allocation: dict[str, list[str]] = Field(..., description="Agent id -> good ids")
    prices: dict[str, Rational] = Field(..., description="Good id -> price")
    groups: list[list[str]] = Field(default_factory=list)
    terminated_at: str
    rounds: RoundCounts
    certificates: VerifyReport
    tie_break: TieBreakConfig = Field(default_factory=TieBreakConfig)
    trace: Optional[SolveTrace] = None
