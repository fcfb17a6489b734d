"""
Brute-force ground truth for small instances.

Enumerates every integral allocation for fairness sets and Pareto
dominance, and decides fractional Pareto optimality with an exact LP.
"""

import itertools
from fractions import Fraction
from typing import Callable, Iterator, Optional

from pydantic import BaseModel, Field

from ..config.settings import get_settings
from ..exceptions import BudgetExceededError, LPSizeExceededError
from ..models.instance import Allocation, Instance
from ..models.report import Verdict, Witness
from ..utils.logger import get_logger
from . import core, verifier
from .simplex import maximize

logger = get_logger(__name__)


class OracleBudget(BaseModel):
    """Size limits for the exhaustive and LP oracles."""
    max_allocations: int = Field(
        default_factory=lambda: get_settings().oracle_max_allocations,
        description="Largest n^m the enumeration accepts",
    )
    max_lp_variables: int = Field(
        default_factory=lambda: get_settings().lp_max_variables,
        description="Largest n*m the fPO linear program accepts",
    )


def _check_enumeration_budget(inst: Instance, budget: Optional[OracleBudget]) -> None:
    budget = budget or OracleBudget()
    total = inst.n ** inst.m
    if total > budget.max_allocations:
        raise BudgetExceededError(
            f"{inst.n}^{inst.m} = {total} allocations exceed the budget {budget.max_allocations}"
        )


def _all_owner_vectors(inst: Instance) -> Iterator[tuple[int, ...]]:
    """Owner vectors in lexicographic order."""
    return itertools.product(range(inst.n), repeat=inst.m)


def enumerate_allocations(
    inst: Instance,
    predicate: Callable[[Allocation], bool],
    budget: Optional[OracleBudget] = None,
) -> list[Allocation]:
    """
    All allocations satisfying predicate, in lexicographic owner-vector order.

    Raises:
        BudgetExceededError: If n^m is above the budget
    """
    _check_enumeration_budget(inst, budget)
    found = []
    for owner in _all_owner_vectors(inst):
        X = Allocation.model_construct(n=inst.n, owner=owner)
        if predicate(X):
            found.append(X)
    return found


def _utilities(inst: Instance, owner: tuple[int, ...]) -> list[Fraction]:
    totals = [Fraction(0)] * inst.n
    for e, i in enumerate(owner):
        totals[i] += inst.values[i][e]
    return totals


def is_po_bruteforce(inst: Instance, X: Allocation, budget: Optional[OracleBudget] = None) -> Verdict:
    """
    Integral Pareto optimality by exhaustive search.

    Returns:
        Verdict "po"; on failure ``counterexample`` is the first dominating
        owner vector and the witness names an agent that strictly gains

    Raises:
        BudgetExceededError: If n^m is above the budget
    """
    _check_enumeration_budget(inst, budget)
    base = _utilities(inst, X.owner)
    for owner in _all_owner_vectors(inst):
        other = _utilities(inst, owner)
        if all(o >= b for o, b in zip(other, base)) and any(o > b for o, b in zip(other, base)):
            j = next(i for i in inst.agents() if other[i] > base[i])
            return Verdict.fail(
                "po",
                Witness(agent=j, lhs=base[j], rhs=other[j]),
                note="an integral allocation dominates X",
                counterexample=owner,
            )
    return Verdict.ok("po")


def is_fpo_lp(inst: Instance, X: Allocation, budget: Optional[OracleBudget] = None) -> Verdict:
    """
    Fractional Pareto optimality by linear programming.

    Maximizes total utility over fractional allocations that leave every agent
    at least as well off as in X. X is fPO iff the optimum equals its own
    total utility.

    Raises:
        LPSizeExceededError: If n*m is above the budget
    """
    budget = budget or OracleBudget()
    n, m = inst.n, inst.m
    if n * m > budget.max_lp_variables:
        raise LPSizeExceededError(f"n*m = {n * m} exceeds the LP budget {budget.max_lp_variables}")

    base = [core.utility(inst, i, X.bundle(i)) for i in inst.agents()]

    # x_{i,e} at column i*m + e, then one surplus column per agent
    width = n * m + n
    c = [Fraction(0)] * width
    for i in inst.agents():
        for e in inst.goods():
            c[i * m + e] = inst.values[i][e]

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for e in inst.goods():
        row = [Fraction(0)] * width
        for i in inst.agents():
            row[i * m + e] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(1))
    for i in inst.agents():
        row = [Fraction(0)] * width
        for e in inst.goods():
            row[i * m + e] = inst.values[i][e]
        row[n * m + i] = Fraction(-1)
        rows.append(row)
        rhs.append(base[i])

    result = maximize(c, rows, rhs)
    if result.status != "optimal":
        # X itself is feasible and utilities are bounded
        raise RuntimeError(f"fPO linear program ended {result.status}")

    total = sum(base, Fraction(0))
    if result.value == total:
        return Verdict.ok("fpo")

    x = result.solution
    gains = [sum((inst.values[i][e] * x[i * m + e] for e in inst.goods()), Fraction(0)) for i in inst.agents()]
    j = next(i for i in inst.agents() if gains[i] > base[i])
    logger.debug(f"fPO fails: LP optimum {result.value} above {total}")
    return Verdict.fail(
        "fpo",
        Witness(agent=j, lhs=base[j], rhs=gains[j]),
        note=f"a fractional allocation reaches total utility {result.value} > {total}",
    )


def wefx_set(inst: Instance, budget: Optional[OracleBudget] = None) -> list[Allocation]:
    """Every WEFX allocation."""
    return enumerate_allocations(inst, lambda X: verifier.check_wefx(inst, X).passed, budget)


def weqx_set(inst: Instance, budget: Optional[OracleBudget] = None) -> list[Allocation]:
    """Every WEQX allocation."""
    return enumerate_allocations(inst, lambda X: verifier.check_weqx(inst, X).passed, budget)
