"""
Group-by-group reallocation from the initial equilibrium.

For every group but the last, the least agent of the group is compared to
the big agent. If it is already satisfied the run returns early; otherwise
the group's prices are raised by k and goods move from the big agent to the
least agent until the least agent catches up.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from ..config.settings import get_settings
from ..exceptions import (
    DoubleRaiseError,
    EmptyTransferSetError,
    InvariantViolationError,
    RoundBudgetExceededError,
)
from ..models.instance import Instance
from ..models.report import Verdict
from ..models.trace import (
    AgentGroups,
    Metric,
    PriceRiseRecord,
    RoundVerdicts,
    SolveTrace,
    TransferRecord,
)
from ..utils.helpers import format_goods
from ..utils.logger import get_logger
from .initializer import InitResult, initial_equilibrium
from .invariants import InvariantMonitor, q_set
from .market import MarketState, big_agent, least_agent
from . import verifier

logger = get_logger(__name__)

EARLY_RETURN = "early-return"
LOOP_EXHAUSTED = "for-loop-exhausted"

__all__ = [
    "SolveResult",
    "Reallocator",
    "solve",
    "least_agent",
    "big_agent",
    "raise_group",
    "pick_transfer_good",
    "resolve_check_invariants",
    "realloc_round_bound",
]


@dataclass
class SolveResult:
    """Final equilibrium of a solve with its trace."""
    state: MarketState
    trace: SolveTrace
    groups: AgentGroups
    terminated_at: str
    init: InitResult

    @property
    def init_round_count(self) -> int:
        return self.init.transfer_round_count

    @property
    def realloc_round_count(self) -> int:
        """Transfer rounds of the reallocation phase; price rises are not counted."""
        return len(self.trace.transfers)


def resolve_check_invariants(inst: Instance, flag: Optional[bool] = None) -> bool:
    """
    Decide whether runtime invariant checks run.

    An explicit flag wins, then FAIRDIV_CHECK_INVARIANTS, then the size rule
    n*m <= invariant_size_limit.
    """
    if flag is not None:
        return flag
    settings = get_settings()
    if settings.check_invariants is not None:
        return settings.check_invariants
    return inst.n * inst.m <= settings.invariant_size_limit


def realloc_round_bound(inst: Instance) -> int:
    """At most m transfers per group iteration, n*m overall."""
    return inst.n * inst.m


def raise_group(
    state: MarketState,
    group: Sequence[int],
    k: Fraction,
    raised: Optional[set[int]] = None,
    group_index: Optional[int] = None,
) -> tuple[int, ...]:
    """
    Multiply the prices of every good held by the group by k (mutates state).

    Args:
        state: Current market state
        group: Agents of the group
        k: Price factor
        raised: Indices of groups raised so far; updated in place
        group_index: Index of this group, required with ``raised``

    Returns:
        The raised goods, ascending

    Raises:
        DoubleRaiseError: If the group was raised before
    """
    if raised is not None:
        if group_index in raised:
            raise DoubleRaiseError(f"group {group_index} raised twice")
        raised.add(group_index)  # type: ignore[arg-type]
    goods = tuple(sorted(e for i in group for e in state.bundles[i]))
    state.scale_goods(goods, k)
    return goods


def pick_transfer_good(
    state: MarketState,
    b: int,
    unraised: set[int],
    x0: Sequence[frozenset[int]],
    mode: Metric,
    receiver: int,
    round_index: int = -1,
) -> int:
    """
    Choose the good the big agent gives up.

    An unraised big agent gives its lowest-index good; a raised one gives the
    lowest-index good it did not hold initially.

    Raises:
        EmptyTransferSetError: If the candidate set is empty
        InvariantViolationError: If the good is not priced k, not MBB for the
            receiver, or (VALUE mode) not of minimum value to the big agent
    """
    pool = state.bundles[b] if b in unraised else state.bundles[b] - x0[b]
    if not pool:
        raise EmptyTransferSetError(f"agent {b} has no transferable good at round {round_index}")
    e = min(pool)
    inst = state.inst
    if state.prices[e] != inst.k:
        raise InvariantViolationError(round_index, "transfer-price", f"good {e} priced {state.prices[e]}, expected {inst.k}")
    if e not in state.mbb_sets[receiver]:
        raise InvariantViolationError(round_index, "transfer-mbb", f"good {e} is not MBB for agent {receiver}")
    if mode is Metric.VALUE and inst.values[b][e] != min(inst.values[b][g] for g in state.bundles[b]):
        raise InvariantViolationError(round_index, "transfer-min-value", f"good {e} is not a minimum-value good of agent {b}")
    return e


class Reallocator:
    """Runs the reallocation loop on top of an initial equilibrium."""

    def __init__(self, inst: Instance, mode: Metric, init: InitResult, check_invariants: bool = False):
        self.inst = inst
        self.mode = mode
        self.init = init
        self.state = init.state
        self.groups = init.groups
        self.x0 = [frozenset(bundle) for bundle in self.state.bundles]
        self.unraised: set[int] = set(inst.agents())
        self.raised_groups: set[int] = set()
        self.round = 0
        self.trace = SolveTrace(
            mode=mode,
            initial_owner=tuple(self.state.owner),
            initial_prices=self.state.price_vector(),
            init_rounds=list(init.rounds),
        )
        self.monitor: Optional[InvariantMonitor] = None
        if check_invariants:
            self.monitor = InvariantMonitor(
                inst, self.groups, self.state.owner, self.state.prices, mode
            )

    def _satisfied(self, least: int, big: int, relaxed: bool) -> bool:
        own = self.state.metric(least, self.mode)
        if relaxed and self.mode is Metric.SPENDING:
            own = own * self.inst.k
        return own >= self.state.hat_metric(big, self.mode)

    def _snapshot(self) -> None:
        self.trace.unraised_evolution.append(tuple(sorted(self.unraised)))
        self.trace.q_evolution.append(tuple(sorted(q_set(self.state, self.mode))))

    def _record(self, verdicts: list[Verdict], round_index: int) -> None:
        self.trace.invariant_verdicts.append(RoundVerdicts(round=round_index, verdicts=verdicts))
        for verdict in verdicts:
            if verdict.failed:
                raise InvariantViolationError(round_index, verdict.criterion, verdict.note)

    def _apply(self, row: Union[PriceRiseRecord, TransferRecord], before: Optional[MarketState]) -> None:
        self.trace.rounds.append(row)
        if self.monitor is not None and before is not None:
            self._record(self.monitor.check(before, self.state, row), self.round + 1)
        self.round += 1

    def _raise(self, r: int, least: int, big: int) -> None:
        self._snapshot()
        before = self.state.copy() if self.monitor else None
        members = self.groups.groups[r]
        goods = raise_group(self.state, members, self.inst.k, self.raised_groups, r)
        self.unraised -= set(members)

        k = self.inst.k
        stray = [e for e in self.inst.goods() if self.state.prices[e] not in (k, k * k)]
        if stray:
            raise InvariantViolationError(
                self.round, "price-tiers", f"good {stray[0]} priced {self.state.prices[stray[0]]} after a raise"
            )

        logger.debug(f"Round {self.round}: raise group {r} {list(members)} goods {format_goods(goods, self.inst.good_labels)}")
        self._apply(
            PriceRiseRecord(round=self.round, group=r, agents=members, goods=goods, factor=k, least=least, big=big),
            before,
        )

    def _transfer(self, least: int, big: int) -> None:
        self._snapshot()
        before = self.state.copy() if self.monitor else None
        e = pick_transfer_good(self.state, big, self.unraised, self.x0, self.mode, least, self.round)
        giver_unraised = big in self.unraised
        self.state.transfer(e, least)
        logger.debug(f"Round {self.round}: good {e} from agent {big} to agent {least}")
        self._apply(
            TransferRecord(round=self.round, giver=big, receiver=least, good=e, giver_unraised=giver_unraised),
            before,
        )

    def _verify_output(self) -> None:
        X = self.state.allocation()
        if self.mode is Metric.SPENDING:
            report = verifier.check_wefx(self.inst, X)
        else:
            report = verifier.check_weqx(self.inst, X)
        report = report.merged(verifier.check_equilibrium(self.inst, X, self.state.prices))
        for verdict in report.failures():
            raise InvariantViolationError(self.round, verdict.criterion, "final allocation failed verification")

    def run(self) -> SolveResult:
        """
        Execute the group loop.

        Returns:
            SolveResult

        Raises:
            RoundBudgetExceededError: If a transfer bound is passed
            InvariantViolationError: If a checked property fails
        """
        inst, mode = self.inst, self.mode
        if self.monitor is not None:
            self._record(self.monitor.check_initial(self.state), 0)

        total_bound = realloc_round_bound(inst)
        transfers = 0
        terminated_at = LOOP_EXHAUSTED

        for r in range(self.groups.count - 1):
            members = self.groups.groups[r]
            least = least_agent(self.state, members, mode)
            big = big_agent(self.state, mode)
            if self._satisfied(least, big, relaxed=True):
                terminated_at = EARLY_RETURN
                logger.debug(f"Early return at group {r}: agent {least} satisfied toward agent {big}")
                break

            self._raise(r, least, big)
            in_group = 0
            while True:
                least = least_agent(self.state, members, mode)
                big = big_agent(self.state, mode)
                if self._satisfied(least, big, relaxed=False):
                    break
                if in_group >= inst.m:
                    raise RoundBudgetExceededError(f"reallocation group {r}", inst.m, in_group + 1)
                if transfers >= total_bound:
                    raise RoundBudgetExceededError("reallocation", total_bound, transfers + 1)
                self._transfer(least, big)
                in_group += 1
                transfers += 1

        self._snapshot()
        self._verify_output()

        logger.info(
            f"Solved {mode.criterion} n={inst.n} m={inst.m}: {len(self.trace.price_rises)} price rises, "
            f"{len(self.trace.transfers)} transfers, {terminated_at}"
        )
        return SolveResult(
            state=self.state,
            trace=self.trace,
            groups=self.groups,
            terminated_at=terminated_at,
            init=self.init,
        )


def solve(
    inst: Instance,
    mode: Metric,
    check_invariants: Optional[bool] = None,
    owner_override: Optional[Sequence[int]] = None,
) -> SolveResult:
    """
    Compute a WEFX (SPENDING) or WEQX (VALUE) allocation with supporting prices.

    Args:
        inst: Canonical instance
        mode: SPENDING or VALUE
        check_invariants: Force runtime checks on or off; None uses settings
        owner_override: Welfare-maximizing initial owner per good

    Returns:
        SolveResult
    """
    checked = resolve_check_invariants(inst, check_invariants)
    init = initial_equilibrium(inst, mode, owner_override=owner_override, check_invariants=checked)
    return Reallocator(inst, mode, init, check_invariants=checked).run()
