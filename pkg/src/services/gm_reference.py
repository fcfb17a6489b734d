"""
Reference implementation of the unweighted GM price dynamic for bivalued goods.

The dynamic alternates an MBB-path transfer loop toward the least spender
with price raises on the least spender's reachability set. ``run_gm``
detects when a state repeats up to a uniform price scaling; since a step
commutes with scaling all prices, such a repeat proves the run never ends.
"""

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Literal, Optional, Sequence, Union

from pydantic import BaseModel

from ..config.presets import get_preset_by_id, preset_instance
from ..exceptions import RoundBudgetExceededError
from ..models.instance import Allocation, Instance
from ..models.rational import Rational
from ..models.report import Verdict, Witness
from ..models.trace import GMTrace, PriceRiseRecord, RoundRecord, TransferRecord
from ..utils.helpers import format_goods
from ..utils.logger import get_logger
from .initializer import welfare_max_init
from .market import MarketState, bfs_tree, build_mbb_graph, reachable_from, scale_prices

logger = get_logger(__name__)


@dataclass(frozen=True)
class GMState:
    """Snapshot between two outer steps."""
    owner: tuple[int, ...]
    prices: tuple[Fraction, ...]
    least_spender: int
    round_index: int
    terminated: bool = False

    def allocation(self, n: int) -> Allocation:
        return Allocation(n=n, owner=self.owner)


class CycleProof(BaseModel):
    """State at t2 equals the state at t1 with every price multiplied by scale."""
    t1: int
    t2: int
    scale: Rational
    owner: tuple[int, ...]
    prices: tuple[Rational, ...]


class GMTerminated(BaseModel):
    kind: Literal["terminated"] = "terminated"
    steps: int
    owner: tuple[int, ...]
    prices: tuple[Rational, ...]
    trace: GMTrace


class GMCycleDetected(BaseModel):
    kind: Literal["cycle-detected"] = "cycle-detected"
    steps: int
    proof: CycleProof
    trace: GMTrace


class GMBudgetExhausted(BaseModel):
    kind: Literal["budget-exhausted"] = "budget-exhausted"
    steps: int
    trace: GMTrace


GMOutcome = Union[GMTerminated, GMCycleDetected, GMBudgetExhausted]


def table1_instance() -> Instance:
    """Two agents, five goods, k = 5: the instance on which the GM dynamic cycles."""
    return preset_instance("table1")


def table1_owners() -> tuple[int, ...]:
    """Initial owners e1, e2, e3 -> a1 and e4, e5 -> a2."""
    preset = get_preset_by_id("table1")
    return preset.owner_override  # type: ignore[union-attr, return-value]


def _least_spender(market: MarketState) -> int:
    return min(market.inst.agents(), key=lambda i: (market.price_of(i), i))


def _hat_price(market: MarketState, h: int) -> Fraction:
    """p(X_h) minus its cheapest good, 0 for an empty bundle."""
    bundle = market.bundles[h]
    if not bundle:
        return Fraction(0)
    return market.price_of(h) - min(market.prices[e] for e in bundle)


def gm_initial_state(inst: Instance, owner_override: Optional[Sequence[int]] = None) -> GMState:
    """Welfare-maximizing allocation priced at the owners' values."""
    market = welfare_max_init(inst, owner_override)
    return GMState(
        owner=tuple(market.owner),
        prices=market.price_vector(),
        least_spender=_least_spender(market),
        round_index=0,
    )


def _transfer_once(market: MarketState, i: int) -> Optional[tuple[int, int, int]]:
    """First violating BFS hop from the least spender, applied; (good, from, to) or None."""
    order, parents = bfs_tree(build_mbb_graph(market), i)
    target = market.price_of(i)
    for y in order[1:]:
        u = parents[y]
        candidates = market.mbb_sets[u] & market.bundles[y]  # type: ignore[index]
        e = min(candidates, key=lambda g: (market.prices[g], g))
        if market.price_of(y) - market.prices[e] > target:
            market.transfer(e, u)  # type: ignore[arg-type]
            return e, y, u  # type: ignore[return-value]
    return None


def gm_step(inst: Instance, state: GMState, log: Optional[list[RoundRecord]] = None) -> GMState:
    """
    One outer step: transfer loop to its fixpoint, then return or raise.

    Args:
        inst: Canonical instance
        state: Live state
        log: Optional list receiving transfer and price-rise records

    Returns:
        Next state; ``terminated`` is set when every agent outside the least
        spender's reachability set is EFX-satisfied toward it

    Raises:
        RoundBudgetExceededError: If the transfer loop passes n*m^2 moves
    """
    if state.terminated:
        return state
    market = MarketState(inst, state.owner, state.prices)
    bound = inst.n * inst.m * inst.m
    i = _least_spender(market)
    moves = 0
    while True:
        move = _transfer_once(market, i)
        if move is None:
            break
        moves += 1
        if moves > bound:
            raise RoundBudgetExceededError("gm transfers", bound, moves)
        e, giver, receiver = move
        if log is not None:
            log.append(TransferRecord(round=len(log), giver=giver, receiver=receiver, good=e))
        i = _least_spender(market)

    reach = reachable_from(build_mbb_graph(market), i)
    spend = market.price_of(i)
    outside = [h for h in inst.agents() if h not in reach]
    if all(_hat_price(market, h) <= spend for h in outside):
        logger.debug(f"GM step {state.round_index}: returns with least spender {i}")
        return GMState(tuple(market.owner), market.price_vector(), i, state.round_index + 1, terminated=True)

    goods = tuple(sorted(e for h in reach for e in market.bundles[h]))
    market.scale_goods(goods, inst.k)
    if log is not None:
        log.append(PriceRiseRecord(
            round=len(log), group=-1, agents=tuple(sorted(reach)), goods=goods, factor=inst.k, least=i,
        ))
    logger.debug(f"GM step {state.round_index}: raise {format_goods(goods, inst.good_labels)} for agents {sorted(reach)}")
    return GMState(tuple(market.owner), market.price_vector(), _least_spender(market), state.round_index + 1)


def _normalized_key(state: GMState) -> tuple[tuple[int, ...], tuple[Fraction, ...]]:
    lowest = min(state.prices) if state.prices else Fraction(1)
    return state.owner, tuple(price / lowest for price in state.prices)


def run_gm(inst: Instance, max_steps: int, owner_override: Optional[Sequence[int]] = None) -> GMOutcome:
    """
    Run the GM dynamic for at most max_steps outer steps.

    Every new state is compared with all earlier states after dividing prices
    by their minimum.

    Returns:
        GMTerminated, GMCycleDetected or GMBudgetExhausted
    """
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    state = gm_initial_state(inst, owner_override)
    trace = GMTrace(initial_owner=state.owner, initial_prices=state.prices)
    seen: dict[tuple, GMState] = {_normalized_key(state): state}

    for step in range(1, max_steps + 1):
        state = gm_step(inst, state, trace.rounds)
        trace.price_history.append(state.prices)
        if state.terminated:
            logger.info(f"GM terminated after {step} steps")
            return GMTerminated(steps=step, owner=state.owner, prices=state.prices, trace=trace)
        key = _normalized_key(state)
        earlier = seen.get(key)
        if earlier is not None:
            scale = min(state.prices) / min(earlier.prices) if state.prices else Fraction(1)
            proof = CycleProof(
                t1=earlier.round_index,
                t2=state.round_index,
                scale=scale,
                owner=earlier.owner,
                prices=earlier.prices,
            )
            logger.info(f"GM cycle: state {proof.t2} is state {proof.t1} scaled by {scale}")
            return GMCycleDetected(steps=step, proof=proof, trace=trace)
        seen[key] = state

    logger.info(f"GM budget of {max_steps} steps exhausted")
    return GMBudgetExhausted(steps=max_steps, trace=trace)


def scale_state(state: GMState, c: Fraction) -> GMState:
    """Same state with every price multiplied by c."""
    return replace(state, prices=scale_prices(state.prices, c))


def replay_cycle(inst: Instance, proof: CycleProof) -> Verdict:
    """
    Re-run t2 - t1 steps from the proof's start state and compare.

    Returns:
        Verdict "cycle-replay"; passes iff the replayed state has the same
        owners and prices scaled by exactly ``proof.scale``
    """
    market = MarketState(inst, proof.owner, proof.prices)
    state = GMState(proof.owner, tuple(proof.prices), _least_spender(market), proof.t1)
    for _ in range(proof.t2 - proof.t1):
        state = gm_step(inst, state)
        if state.terminated:
            return Verdict.fail("cycle-replay", note=f"replay terminated at step {state.round_index}")
    if proof.scale <= 1:
        return Verdict.fail("cycle-replay", note=f"scale {proof.scale} does not exceed 1")
    if state.owner != tuple(proof.owner):
        e = next(g for g, (a, b) in enumerate(zip(state.owner, proof.owner)) if a != b)
        return Verdict.fail(
            "cycle-replay",
            Witness(agent=state.owner[e], good=e, lhs=Fraction(state.owner[e]), rhs=Fraction(proof.owner[e])),
            note="owner differs after replay",
        )
    expected = scale_prices(proof.prices, proof.scale)
    for e, (got, want) in enumerate(zip(state.prices, expected)):
        if got != want:
            return Verdict.fail(
                "cycle-replay", Witness(agent=state.owner[e], good=e, lhs=got, rhs=want),
                note="price is not the scaled start price",
            )
    return Verdict.ok("cycle-replay")
