"""
Runtime monitor for the reallocation invariants.

The monitor follows a run round by round. It knows the initial allocation
and prices, the agent groups, which groups have been raised, and which
agents have already lost a good as the big agent.
"""

from fractions import Fraction
from typing import Sequence, Union

from ..models.instance import Instance
from ..models.report import Verdict, Witness
from ..models.trace import AgentGroups, Metric, PriceRiseRecord, TransferRecord
from .market import MarketState, big_agent, is_equilibrium, price_tier_consistency
from . import verifier

INVARIANT_NAMES = (
    "equilibrium",
    "group-fairness",
    "raised-groups",
    "big-metric",
    "least-history",
    "q-monotone",
    "price-tiers",
)


def q_set(state: MarketState, mode: Metric) -> frozenset[int]:
    """Agents whose metric reaches the big agent's hat metric (pWEFX or WEQX toward it)."""
    threshold = state.hat_metric(big_agent(state, mode), mode)
    return frozenset(i for i in state.inst.agents() if state.metric(i, mode) >= threshold)


class InvariantMonitor:
    """Checks the reallocation invariants and the price-tier property on consecutive states."""

    def __init__(
        self,
        inst: Instance,
        groups: AgentGroups,
        initial_owner: Sequence[int],
        initial_prices: Sequence[Fraction],
        mode: Metric,
    ):
        """
        Initialize the monitor.

        Args:
            inst: Canonical instance
            groups: Agent groups from initialization
            initial_owner: Owner vector X^0 at the start of reallocation
            initial_prices: Prices p^0 at the start of reallocation
            mode: SPENDING or VALUE
        """
        self.inst = inst
        self.groups = groups
        self.mode = mode
        self.initial_prices = tuple(initial_prices)
        self.initial_bundles: list[frozenset[int]] = [
            frozenset(e for e, i in enumerate(initial_owner) if i == agent) for agent in inst.agents()
        ]
        self.raised: list[int] = []
        self.past_big: set[int] = set()

    def q_set(self, state: MarketState) -> frozenset[int]:
        return q_set(state, self.mode)

    def check_initial(self, state: MarketState) -> list[Verdict]:
        """Verdicts at the beginning of round 0."""
        return [
            is_equilibrium(state),
            self._group_fairness(state),
            self._raised_structure(state),
            Verdict.ok("big-metric"),
            Verdict.ok("least-history"),
            Verdict.ok("q-monotone"),
            price_tier_consistency(state),
        ]

    def check(
        self,
        state_t: MarketState,
        state_t1: MarketState,
        row: Union[PriceRiseRecord, TransferRecord],
    ) -> list[Verdict]:
        """
        Verdicts for one round, given the states before and after it.

        Records the round (raised group or big-agent loss) for later rounds.
        """
        history = self._least_history(state_t, row)
        if isinstance(row, PriceRiseRecord):
            self.raised.append(row.group)
        else:
            self.past_big.add(row.giver)
        return [
            is_equilibrium(state_t1),
            self._group_fairness(state_t1),
            self._raised_structure(state_t1),
            self._big_metric(state_t, state_t1),
            history,
            self._q_monotone(state_t, state_t1),
            price_tier_consistency(state_t1),
        ]

    def _group_fairness(self, state: MarketState) -> Verdict:
        X = state.allocation()
        for members in self.groups.groups:
            if self.mode is Metric.SPENDING:
                report = verifier.check_pwefx(self.inst, X, state.prices, agents=members)
            else:
                report = verifier.check_weqx(self.inst, X, agents=members)
            if not report.passed:
                failure = report.failures()[0]
                return Verdict.fail("group-fairness", failure.witness, note=f"inside group {list(members)}")
        return Verdict.ok("group-fairness")

    def _raised_structure(self, state: MarketState) -> Verdict:
        inst = self.inst
        k = inst.k
        lower = {i for r in self.raised for i in self.groups.groups[r]}
        upper = set(inst.agents()) - lower
        raised_goods = {e for i in lower for e in self.initial_bundles[i]}
        upper_goods = {e for i in upper for e in self.initial_bundles[i]}

        def fail(witness: Witness, note: str) -> Verdict:
            return Verdict.fail("raised-groups", witness, note=note)

        for e in inst.goods():
            expected = self.initial_prices[e] * (k if e in raised_goods else 1)
            if state.prices[e] != expected:
                return fail(Witness(agent=state.owner[e], good=e, lhs=state.prices[e], rhs=expected),
                            "price differs from one raise on initial goods of raised groups")
        for e in sorted(raised_goods):
            for i in inst.agents():
                if state.ratio(i, e) > 1 / k:
                    return fail(Witness(agent=i, good=e, lhs=state.ratio(i, e), rhs=1 / k),
                                "raised good has bang-per-buck above 1/k")
        for i in sorted(lower):
            for e in sorted(upper_goods):
                if state.ratio(i, e) != 1 / k:
                    return fail(Witness(agent=i, good=e, lhs=state.ratio(i, e), rhs=1 / k),
                                "raised agent's ratio on an unraised good is not 1/k")
            if inst.m and state.alpha[i] > 1 / k:
                return fail(Witness(agent=i, lhs=state.alpha[i], rhs=1 / k), "raised agent's MBB ratio above 1/k")
            if not self.initial_bundles[i] <= state.bundles[i]:
                return fail(Witness(agent=i, lhs=Fraction(0), rhs=Fraction(1)), "raised agent lost an initial good")
        for i in sorted(upper):
            if inst.m and state.alpha[i] > 1:
                return fail(Witness(agent=i, lhs=state.alpha[i], rhs=Fraction(1)), "unraised agent's MBB ratio above 1")
            if not state.bundles[i] <= self.initial_bundles[i]:
                return fail(Witness(agent=i, lhs=Fraction(1), rhs=Fraction(0)), "unraised agent gained a good")
        return Verdict.ok("raised-groups")

    def _big_metric(self, state_t: MarketState, state_t1: MarketState) -> Verdict:
        before = state_t.hat_metric(big_agent(state_t, self.mode), self.mode)
        after = state_t1.hat_metric(big_agent(state_t1, self.mode), self.mode)
        if after > before:
            return Verdict.fail("big-metric", Witness(agent=big_agent(state_t1, self.mode), lhs=before, rhs=after),
                                note="big agent's hat metric increased")
        return Verdict.ok("big-metric")

    def _least_history(self, state_t: MarketState, row: Union[PriceRiseRecord, TransferRecord]) -> Verdict:
        if not isinstance(row, PriceRiseRecord):
            return Verdict.not_applicable("least-history", "transfer round")
        for i in row.agents:
            if set(state_t.bundles[i]) != self.initial_bundles[i]:
                return Verdict.fail("least-history", Witness(agent=i, lhs=Fraction(0), rhs=Fraction(1)),
                                    note="raised agent's bundle changed before its raise")
            if i in self.past_big:
                return Verdict.fail("least-history", Witness(agent=i, lhs=Fraction(0), rhs=Fraction(1)),
                                    note="raised agent previously lost a good as big agent")
        return Verdict.ok("least-history")

    def _q_monotone(self, state_t: MarketState, state_t1: MarketState) -> Verdict:
        before, after = self.q_set(state_t), self.q_set(state_t1)
        dropped = sorted(before - after)
        if dropped:
            i = dropped[0]
            return Verdict.fail("q-monotone", Witness(agent=i, lhs=state_t1.metric(i, self.mode),
                                                       rhs=state_t.metric(i, self.mode)),
                                note="agent left Q")
        return Verdict.ok("q-monotone")


def invariant_monitor(
    monitor: InvariantMonitor,
    state_t: MarketState,
    state_t1: MarketState,
    trace_row: Union[PriceRiseRecord, TransferRecord],
) -> list[Verdict]:
    """Verdict set for one round; see ``InvariantMonitor.check``."""
    return monitor.check(state_t, state_t1, trace_row)
