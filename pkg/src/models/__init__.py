"""Data models module."""

from .rational import Rational
from .instance import Instance, Allocation
from .report import VerdictStatus, Witness, Verdict, VerifyReport
from .trace import (
    Metric,
    InitMode,
    ReallocMode,
    AgentGroups,
    InitRoundRecord,
    PriceRiseRecord,
    TransferRecord,
    RoundRecord,
    RoundVerdicts,
    SolveTrace,
    GMTrace,
)
from .files import AgentEntry, InstanceMeta, InstanceFile, RoundCounts, TieBreakConfig, ResultFile

__all__ = [
    "Rational",
    "Instance",
    "Allocation",
    "VerdictStatus",
    "Witness",
    "Verdict",
    "VerifyReport",
    "Metric",
    "InitMode",
    "ReallocMode",
    "AgentGroups",
    "InitRoundRecord",
    "PriceRiseRecord",
    "TransferRecord",
    "RoundRecord",
    "RoundVerdicts",
    "SolveTrace",
    "GMTrace",
    "AgentEntry",
    "InstanceMeta",
    "InstanceFile",
    "RoundCounts",
    "TieBreakConfig",
    "ResultFile",
]
