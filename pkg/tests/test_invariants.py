import pytest

from src.models import Metric, PriceRiseRecord, TransferRecord, VerdictStatus
from src.services.initializer import initial_equilibrium
from src.services.invariants import INVARIANT_NAMES, InvariantMonitor, invariant_monitor, q_set
from src.services.reallocation import raise_group


@pytest.fixture
def spending_start(table1, table1_owners):
    init = initial_equilibrium(table1, Metric.SPENDING, owner_override=table1_owners)
    monitor = InvariantMonitor(table1, init.groups, init.state.owner, init.state.prices, Metric.SPENDING)
    return init.state, monitor


def _statuses(verdicts):
    return {v.criterion: v.status for v in verdicts}


def test_initial_state_passes(spending_start):
    state, monitor = spending_start
    verdicts = monitor.check_initial(state)
    assert [v.criterion for v in verdicts] == list(INVARIANT_NAMES)
    assert all(v.passed for v in verdicts)


def test_q_set(spending_start):
    state, _ = spending_start
    assert q_set(state, Metric.SPENDING) == frozenset({0})


def test_transfer_without_raise_is_caught(spending_start):
    state, monitor = spending_start
    after = state.copy()
    after.transfer(0, 1)
    row = TransferRecord(round=0, giver=0, receiver=1, good=0, giver_unraised=True)

    verdicts = monitor.check(state, after, row)
    assert [v.criterion for v in verdicts] == list(INVARIANT_NAMES)
    failed = {v.criterion for v in verdicts if v.failed}
    assert failed == {"equilibrium", "raised-groups"}
    assert _statuses(verdicts)["least-history"] == VerdictStatus.NOT_APPLICABLE
    assert monitor.past_big == {0}


def test_legal_raise_passes(table1, table1_owners):
    init = initial_equilibrium(table1, Metric.VALUE, owner_override=table1_owners)
    state = init.state
    monitor = InvariantMonitor(table1, init.groups, state.owner, state.prices, Metric.VALUE)

    after = state.copy()
    goods = raise_group(after, (1,), table1.k)
    row = PriceRiseRecord(round=0, group=0, agents=(1,), goods=goods, factor=table1.k, least=1, big=0)
    verdicts = invariant_monitor(monitor, state, after, row)
    assert all(v.passed for v in verdicts)
    assert monitor.raised == [0]


def test_raise_of_past_big_agent_fails(table1, table1_owners):
    init = initial_equilibrium(table1, Metric.VALUE, owner_override=table1_owners)
    state = init.state
    monitor = InvariantMonitor(table1, init.groups, state.owner, state.prices, Metric.VALUE)
    monitor.past_big.add(1)

    after = state.copy()
    goods = raise_group(after, (1,), table1.k)
    row = PriceRiseRecord(round=3, group=0, agents=(1,), goods=goods, factor=table1.k, least=1, big=0)
    verdicts = monitor.check(state, after, row)
    assert {v.criterion for v in verdicts if v.failed} == {"least-history"}


def test_raise_on_wrong_goods_breaks_price_structure(table1, table1_owners):
    init = initial_equilibrium(table1, Metric.VALUE, owner_override=table1_owners)
    state = init.state
    monitor = InvariantMonitor(table1, init.groups, state.owner, state.prices, Metric.VALUE)

    after = state.copy()
    after.scale_goods([4], table1.k)
    row = PriceRiseRecord(round=0, group=0, agents=(1,), goods=(4,), factor=table1.k, least=1, big=0)
    verdicts = {v.criterion: v for v in monitor.check(state, after, row)}
    assert verdicts["raised-groups"].failed
    assert verdicts["raised-groups"].witness.good == 3
