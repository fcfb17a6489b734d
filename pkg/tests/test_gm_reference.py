import random
from fractions import Fraction

import pytest

from src.exceptions import RoundBudgetExceededError
from src.models import PriceRiseRecord, TransferRecord
from src.services.gm_reference import (
    CycleProof,
    GMBudgetExhausted,
    GMCycleDetected,
    GMState,
    GMTerminated,
    gm_initial_state,
    gm_step,
    replay_cycle,
    run_gm,
    scale_state,
    table1_instance,
    table1_owners,
)
from src.services.verifier import check_ef_reductions

from conftest import random_instances


def _prices(*values):
    return tuple(Fraction(v) for v in values)


def test_table1_helpers():
    inst = table1_instance()
    assert inst.k == 5
    assert table1_owners() == (0, 0, 0, 1, 1)


def test_initial_state():
    state = gm_initial_state(table1_instance(), table1_owners())
    assert state.owner == (0, 0, 0, 1, 1)
    assert state.prices == _prices(5, 5, 5, 1, 5)
    assert state.least_spender == 1


def test_price_trace():
    inst = table1_instance()
    log = []
    first = gm_step(inst, gm_initial_state(inst, table1_owners()), log)
    assert first.prices == _prices(5, 5, 5, 5, 25)
    assert first.owner == (0, 0, 0, 1, 1)
    assert first.least_spender == 0

    second = gm_step(inst, first, log)
    assert second.prices == _prices(25, 25, 25, 5, 25)
    assert second.owner == (0, 0, 0, 1, 1)

    assert all(isinstance(row, PriceRiseRecord) for row in log)
    assert [(row.agents, row.goods) for row in log] == [((1,), (3, 4)), ((0,), (0, 1, 2))]
    assert all(row.group == -1 for row in log)


def test_cycle_detected():
    outcome = run_gm(table1_instance(), 10, owner_override=table1_owners())
    assert isinstance(outcome, GMCycleDetected)
    assert outcome.steps == 2
    assert (outcome.proof.t1, outcome.proof.t2, outcome.proof.scale) == (0, 2, 5)
    assert outcome.proof.prices == _prices(5, 5, 5, 1, 5)
    assert outcome.trace.price_history == [_prices(5, 5, 5, 5, 25), _prices(25, 25, 25, 5, 25)]


def test_budget_exhausted():
    outcome = run_gm(table1_instance(), 1, owner_override=table1_owners())
    assert isinstance(outcome, GMBudgetExhausted)
    assert outcome.steps == 1
    with pytest.raises(ValueError):
        run_gm(table1_instance(), 0)


def test_replay_confirms_cycle():
    outcome = run_gm(table1_instance(), 10, owner_override=table1_owners())
    assert replay_cycle(table1_instance(), outcome.proof).passed


def test_replay_rejects_wrong_scale():
    proof = CycleProof(t1=0, t2=2, scale=Fraction(3), owner=(0, 0, 0, 1, 1), prices=_prices(5, 5, 5, 1, 5))
    verdict = replay_cycle(table1_instance(), proof)
    assert verdict.failed
    assert verdict.witness.good == 0


def test_toy_terminates(toy):
    outcome = run_gm(toy, 10)
    assert isinstance(outcome, GMTerminated)
    assert outcome.steps == 1
    assert outcome.owner == (1, 0)
    assert isinstance(outcome.trace.rounds[0], TransferRecord)
    X = gm_initial_state(toy).allocation(2).moved(0, 1)
    assert check_ef_reductions(toy, X).get("efx").passed


def test_step_commutes_with_price_scaling():
    c = Fraction(3)
    inst = table1_instance()
    state = gm_initial_state(inst, table1_owners())
    for _ in range(3):
        direct = scale_state(gm_step(inst, state), c)
        scaled = gm_step(inst, scale_state(state, c))
        assert (direct.owner, direct.prices, direct.terminated) == (scaled.owner, scaled.prices, scaled.terminated)
        state = gm_step(inst, state)


def test_transfer_step_commutes_with_price_scaling(toy):
    c = Fraction(7, 2)
    state = gm_initial_state(toy)
    direct = scale_state(gm_step(toy, state), c)
    scaled = gm_step(toy, scale_state(state, c))
    assert direct.owner == scaled.owner == (1, 0)
    assert direct.prices == scaled.prices


def _random_states(count, seed):
    """Seeded (instance, state) pairs: points on GM trajectories and arbitrary owners on price tiers."""
    rng = random.Random(seed)
    produced = 0
    for inst in random_instances(10 * count, seed=seed, n_range=(2, 4), m_range=(1, 6)):
        if rng.random() < 0.5:
            state = gm_initial_state(inst)
            for _ in range(rng.randint(0, 3)):
                try:
                    state = gm_step(inst, state)
                except RoundBudgetExceededError:
                    break
        else:
            owner = tuple(rng.randrange(inst.n) for _ in inst.goods())
            prices = tuple(rng.choice((Fraction(1), inst.k)) * inst.k ** rng.randint(0, 2) for _ in inst.goods())
            state = GMState(owner, prices, least_spender=0, round_index=rng.randint(0, 5))
        yield inst, state, Fraction(rng.randint(1, 12), rng.randint(1, 12))
        produced += 1
        if produced == count:
            return


def _step_with_log(inst, state):
    log = []
    try:
        return gm_step(inst, state, log), log
    except RoundBudgetExceededError as exc:
        return exc.rounds, None


def _check_scale_equivariance(count, seed):
    for inst, state, c in _random_states(count, seed):
        direct, direct_log = _step_with_log(inst, state)
        scaled, scaled_log = _step_with_log(inst, scale_state(state, c))
        assert direct_log == scaled_log
        if direct_log is None:
            assert direct == scaled
            continue
        expected = scale_state(direct, c)
        assert (scaled.owner, scaled.prices) == (expected.owner, expected.prices)
        assert (scaled.least_spender, scaled.terminated) == (direct.least_spender, direct.terminated)
        assert scaled.round_index == direct.round_index


def test_step_commutes_with_price_scaling_on_random_states():
    _check_scale_equivariance(150, seed=8080)


@pytest.mark.slow
def test_step_commutes_with_price_scaling_on_many_states():
    _check_scale_equivariance(1000, seed=1729)
