import itertools
import random

import pytest

from src.exceptions import BudgetExceededError, LPSizeExceededError
from src.models import Allocation, Metric
from src.services.core import build_instance
from src.services.oracle import (
    OracleBudget,
    enumerate_allocations,
    is_fpo_lp,
    is_po_bruteforce,
    wefx_set,
    weqx_set,
)
from src.services.reallocation import solve

from conftest import random_instances


@pytest.fixture
def crossed():
    """Each agent values the other agent's good highly."""
    return build_instance([[2, 1], [1, 2]])


def test_enumeration_order_and_predicate(crossed):
    everything = enumerate_allocations(crossed, lambda X: True)
    assert [X.owner for X in everything] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert enumerate_allocations(crossed, lambda X: False) == []


def test_enumeration_budget(table1):
    with pytest.raises(BudgetExceededError):
        enumerate_allocations(table1, lambda X: True, OracleBudget(max_allocations=10))


def test_fairness_sets_contain_solver_output(table1):
    wefx = [X.owner for X in wefx_set(table1)]
    weqx = [X.owner for X in weqx_set(table1)]
    assert (0, 0, 0, 1, 1) in wefx
    assert (1, 0, 0, 1, 1) in weqx
    assert (0, 0, 0, 0, 0) not in wefx


def test_dominated_allocation(crossed):
    X = Allocation(n=2, owner=(1, 0))
    po = is_po_bruteforce(crossed, X)
    assert po.failed
    assert po.counterexample == (0, 1)
    assert (po.witness.agent, po.witness.lhs, po.witness.rhs) == (0, 1, 2)

    fpo = is_fpo_lp(crossed, X)
    assert fpo.failed
    assert (fpo.witness.agent, fpo.witness.lhs, fpo.witness.rhs) == (0, 1, 2)


def test_optimal_allocation(crossed):
    X = Allocation(n=2, owner=(0, 1))
    assert is_po_bruteforce(crossed, X).passed
    assert is_fpo_lp(crossed, X).passed


def test_single_agent_is_fpo():
    inst = build_instance([[1, 3, 3]])
    assert is_fpo_lp(inst, Allocation(n=1, owner=(0, 0, 0))).passed


def test_lp_budget(table1, table1_owners):
    with pytest.raises(LPSizeExceededError):
        is_fpo_lp(table1, Allocation(n=2, owner=table1_owners), OracleBudget(max_lp_variables=4))


def test_budget_defaults_follow_settings(monkeypatch):
    from src.config import reset_settings

    monkeypatch.setenv("FAIRDIV_LP_MAX_VARIABLES", "7")
    reset_settings()
    assert OracleBudget().max_lp_variables == 7


def test_equilibrium_outputs_are_fpo_and_po():
    for inst in random_instances(40, seed=17, n_range=(1, 3), m_range=(0, 5)):
        for mode in Metric:
            result = solve(inst, mode, check_invariants=False)
            X = result.state.allocation()
            fpo = is_fpo_lp(inst, X)
            assert fpo.passed
            assert is_po_bruteforce(inst, X).passed


def test_fpo_implies_po():
    for inst in random_instances(25, seed=23, n_range=(2, 3), m_range=(1, 4)):
        for X in enumerate_allocations(inst, lambda X: True):
            if is_fpo_lp(inst, X).passed:
                assert is_po_bruteforce(inst, X).passed


def test_wefx_exists_on_small_instances():
    for inst in random_instances(30, seed=3, n_range=(1, 3), m_range=(0, 5)):
        assert wefx_set(inst)
        assert weqx_set(inst)


def _check_membership(inst, wefx=None, weqx=None):
    wefx = {X.owner for X in (wefx_set(inst) if wefx is None else wefx)}
    weqx = {X.owner for X in (weqx_set(inst) if weqx is None else weqx)}
    assert wefx
    assert solve(inst, Metric.SPENDING).state.allocation().owner in wefx
    assert solve(inst, Metric.VALUE).state.allocation().owner in weqx


def test_solver_outputs_are_in_fairness_sets():
    for inst in random_instances(40, seed=41, n_range=(1, 3), m_range=(0, 5)):
        _check_membership(inst)


def test_solver_outputs_with_lopsided_weights():
    inst = build_instance([[2, 2, 1], [2, 1, 2]], weights=["1/10", "9/10"])
    wefx, weqx = wefx_set(inst), weqx_set(inst)
    assert wefx and weqx
    _check_membership(inst, wefx, weqx)


def _column_patterns(n, k, max_goods):
    """One instance per multiset of value columns: every pattern up to relabeling the goods."""
    columns = list(itertools.product((1, k), repeat=n))
    for m in range(1, max_goods + 1):
        for chosen in itertools.combinations_with_replacement(columns, m):
            yield build_instance([[column[i] for column in chosen] for i in range(n)], k=str(k))


@pytest.mark.slow
@pytest.mark.parametrize("n, k", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_every_small_pattern_has_a_certified_solution(n, k):
    for inst in _column_patterns(n, k, 5):
        wefx, weqx = wefx_set(inst), weqx_set(inst)
        _check_membership(inst, wefx, weqx)
        for mode in Metric:
            X = solve(inst, mode).state.allocation()
            assert is_fpo_lp(inst, X).passed
            assert is_po_bruteforce(inst, X).passed


@pytest.mark.slow
def test_random_weights_on_small_patterns():
    rng = random.Random(500)
    patterns = list(_column_patterns(3, 2, 4))
    for _ in range(500):
        inst = rng.choice(patterns)
        raw = [rng.randint(1, 20) for _ in inst.agents()]
        weighted = build_instance([list(row) for row in inst.values], weights=raw, k="2")
        _check_membership(weighted)
