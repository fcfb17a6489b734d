"""
Initial equilibrium and agent groups.

Starts from the welfare-maximizing allocation priced at the owners' values,
moves goods along MBB paths until no path end can beat its start even
after losing a good, then peels off agent groups by reachability from the
current minimum-metric agent.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ..exceptions import InvalidOwnerOverrideError, InvariantViolationError, RoundBudgetExceededError
from ..models.instance import Instance
from ..models.report import Verdict, Witness
from ..models.trace import AgentGroups, InitRoundRecord, Metric
from ..utils.logger import get_logger
from .market import (
    MarketState,
    bfs_tree,
    build_mbb_graph,
    classify_items,
    is_equilibrium,
    path_to,
    reachable_from,
)
from . import verifier

logger = get_logger(__name__)


@dataclass
class InitResult:
    """Outcome of the initialization phase."""
    state: MarketState
    groups: AgentGroups
    transfer_round_count: int
    rounds: list[InitRoundRecord] = field(default_factory=list)


def init_round_bound(inst: Instance) -> int:
    """Proven bound min(ceil(k)*n*m, n*m^2) on transfer-path rounds."""
    n, m = inst.n, inst.m
    return min(math.ceil(inst.k) * n * m, n * m * m)


def welfare_max_init(inst: Instance, owner_override: Optional[Sequence[int]] = None) -> MarketState:
    """
    Welfare-maximizing allocation priced at the owners' values.

    Goods someone values k go to the lowest-index such agent; goods everyone
    values 1 go to the first agent. Every price is the largest value any
    agent puts on the good, so no MBB ratio exceeds 1.

    Args:
        inst: Canonical instance
        owner_override: Explicit owner per good; must give each good to an agent
            valuing it at its maximum

    Returns:
        MarketState with p(e) = v_owner(e)

    Raises:
        InvalidOwnerOverrideError: If the override is not welfare-maximizing
    """
    if owner_override is not None:
        owner = list(owner_override)
        if len(owner) != inst.m:
            raise InvalidOwnerOverrideError(f"override names {len(owner)} owners for {inst.m} goods")
        for e, i in enumerate(owner):
            if not 0 <= i < inst.n:
                raise InvalidOwnerOverrideError(f"good {inst.good_labels[e]} assigned to unknown agent {i}")
            best = max(inst.values[h][e] for h in inst.agents())
            if inst.values[i][e] != best:
                raise InvalidOwnerOverrideError(
                    f"good {inst.good_labels[e]} must go to an agent valuing it {best}"
                )
    else:
        owner = []
        for e in inst.goods():
            high_agents = [i for i in inst.agents() if inst.is_high(i, e)]
            owner.append(high_agents[0] if high_agents else 0)

    prices = [inst.values[i][e] for e, i in enumerate(owner)]
    return MarketState(inst, owner, prices)


def find_violating_path(state: MarketState, mode: Metric) -> Optional[list[int]]:
    """
    Find the next MBB path whose end beats its start after losing one good.

    Starts are tried by (metric, index); within a start, ends are tried in
    BFS order and the first with hat metric above the start's metric wins.

    Returns:
        Agent path [i_0, ..., i_s], or None at the fixpoint
    """
    graph = build_mbb_graph(state)
    starts = sorted(state.inst.agents(), key=lambda i: (state.metric(i, mode), i))
    for start in starts:
        base = state.metric(start, mode)
        order, parents = bfs_tree(graph, start)
        for end in order:
            if state.hat_metric(end, mode) > base:
                return path_to(parents, end)
    return None


def _shift_along(state: MarketState, path: list[int]) -> list[tuple[int, int, int]]:
    """Move one good backwards over every edge of the path, last hop first."""
    moves = []
    for r in range(len(path) - 1, 0, -1):
        giver, taker = path[r], path[r - 1]
        candidates = state.mbb_sets[taker] & state.bundles[giver]
        e = min(candidates, key=lambda g: (state.prices[g], g))
        state.transfer(e, taker)
        moves.append((e, giver, taker))
    return moves


def transfer_phase(
    state: MarketState,
    mode: Metric,
    check_invariants: bool = False,
    log: Optional[list[InitRoundRecord]] = None,
) -> tuple[MarketState, int]:
    """
    Run the MBB-path transfer loop to its fixpoint (mutates state).

    Args:
        state: Welfare-maximizing equilibrium
        mode: Comparison metric
        check_invariants: Assert per-round monotonicity and equilibrium
        log: Optional list receiving one record per round

    Returns:
        (state, number of rounds)

    Raises:
        RoundBudgetExceededError: If the proven round bound is passed
        InvariantViolationError: If a checked property fails
    """
    bound = init_round_bound(state.inst)
    rounds = 0
    previous_start: Optional[Fraction] = None

    while True:
        path = find_violating_path(state, mode)
        if path is None:
            break
        if rounds >= bound:
            raise RoundBudgetExceededError("initialization", bound, rounds + 1)

        start_metric = state.metric(path[0], mode)
        before = [state.metric(i, mode) for i in path[:-1]]
        moves = _shift_along(state, path)

        if check_invariants:
            if previous_start is not None and start_metric < previous_start:
                raise InvariantViolationError(
                    rounds, "start-metric-monotone",
                    f"start metric fell from {previous_start} to {start_metric}"
                )
            for agent, old in zip(path[:-1], before):
                if state.metric(agent, mode) < old:
                    raise InvariantViolationError(rounds, "path-conservation", f"agent {agent} lost metric")
            verdict = is_equilibrium(state)
            if verdict.failed:
                raise InvariantViolationError(rounds, "equilibrium", verdict.note)
        previous_start = start_metric

        if log is not None:
            log.append(InitRoundRecord(round=rounds, path=tuple(path), moves=tuple(moves), start_metric=start_metric))
        logger.debug(f"Init round {rounds}: path {path}, moves {moves}")
        rounds += 1

    return state, rounds


def build_groups(state: MarketState, mode: Metric) -> AgentGroups:
    """
    Peel agent groups off the transfer-phase fixpoint.

    Each group is grown from the minimum-metric remaining agent (lowest index
    on ties) and holds the remaining agents reachable from it.
    """
    graph = build_mbb_graph(state)
    remaining = set(state.inst.agents())
    groups: list[tuple[int, ...]] = []
    representatives: list[int] = []
    while remaining:
        least = min(remaining, key=lambda i: (state.metric(i, mode), i))
        members = reachable_from(graph, least) & remaining
        groups.append(tuple(sorted(members)))
        representatives.append(least)
        remaining -= members
    return AgentGroups(groups=tuple(groups), representatives=tuple(representatives))


def check_initial_properties(state: MarketState, groups: AgentGroups, mode: Metric) -> list[Verdict]:
    """
    Check the four properties of the initial equilibrium.

    1. equilibrium with alpha_i <= 1 for every agent (an agent holding
       nothing may sit below 1)
    2. agents of an earlier group value every good of a later group at 1
    3. consistently small goods all sit in the first group
    4. every group is pWEFX (SPENDING) or WEQX (VALUE) internally
    """
    inst = state.inst
    verdicts: list[Verdict] = []

    equilibrium = is_equilibrium(state)
    if equilibrium.failed:
        verdicts.append(equilibrium.model_copy(update={"criterion": "unit-equilibrium"}))
    else:
        off = [i for i in inst.agents() if inst.m and state.alpha[i] > 1]
        if off:
            i = off[0]
            verdicts.append(Verdict.fail(
                "unit-equilibrium", Witness(agent=i, lhs=state.alpha[i], rhs=Fraction(1)),
                note="MBB ratio above 1",
            ))
        else:
            verdicts.append(Verdict.ok("unit-equilibrium"))

    index = groups.index_map()
    cross = Verdict.ok("cross-group-low-value")
    for e in inst.goods():
        j = state.owner[e]
        for i in inst.agents():
            if index[i] < index[j] and inst.is_high(i, e):
                cross = Verdict.fail(
                    "cross-group-low-value",
                    Witness(agent=i, other=j, good=e, lhs=inst.values[i][e], rhs=Fraction(1)),
                    note="earlier-group agent values a later-group good at k",
                )
                break
        if cross.failed:
            break
    verdicts.append(cross)

    minus, _ = classify_items(inst)
    first = set(groups.groups[0]) if groups.count else set()
    stray = sorted(e for e in minus if state.owner[e] not in first)
    if stray:
        verdicts.append(Verdict.fail(
            "small-goods-in-first-group",
            Witness(agent=state.owner[stray[0]], good=stray[0], lhs=Fraction(0), rhs=Fraction(1)),
        ))
    else:
        verdicts.append(Verdict.ok("small-goods-in-first-group"))

    X = state.allocation()
    fairness = Verdict.ok("group-fairness")
    for members in groups.groups:
        if mode is Metric.SPENDING:
            report = verifier.check_pwefx(inst, X, state.prices, agents=members)
        else:
            report = verifier.check_weqx(inst, X, agents=members)
        if not report.passed:
            failure = report.failures()[0]
            fairness = failure.model_copy(update={"criterion": "group-fairness"})
            break
    verdicts.append(fairness)
    return verdicts


def initial_equilibrium(
    inst: Instance,
    mode: Metric,
    owner_override: Optional[Sequence[int]] = None,
    check_invariants: bool = False,
) -> InitResult:
    """
    Compute the initial equilibrium and agent groups.

    Args:
        inst: Canonical instance
        mode: SPENDING (WEFX pipeline) or VALUE (WEQX pipeline)
        owner_override: Optional welfare-maximizing owner per good
        check_invariants: Assert per-round and final properties

    Returns:
        InitResult
    """
    state = welfare_max_init(inst, owner_override)
    log: list[InitRoundRecord] = []
    state, rounds = transfer_phase(state, mode, check_invariants=check_invariants, log=log)
    groups = build_groups(state, mode)

    if check_invariants:
        for verdict in check_initial_properties(state, groups, mode):
            if verdict.failed:
                raise InvariantViolationError(rounds, verdict.criterion, verdict.note)

    logger.debug(f"Initial equilibrium after {rounds} rounds, groups {list(groups.groups)}")
    return InitResult(state=state, groups=groups, transfer_round_count=rounds, rounds=log)
