"""
Definition-level fairness and efficiency checkers.

Every ``for all e in X_j`` is evaluated by removing the single good that
maximizes the right-hand side: a minimum-value (or minimum-price) good for
the "up to any good" notions and a maximum-value good for the "up to one
good" notions. The witness names that good.
"""

from fractions import Fraction
from typing import Callable, Collection, Iterable, Optional, Sequence

from ..models.instance import Allocation, Instance
from ..models.report import Verdict, VerifyReport, Witness
from .market import MarketState, is_equilibrium

# (i, j) -> (rhs, removed good) or None when X_j is empty
RightHandSide = Callable[[int, int], Optional[tuple[Fraction, int]]]

CRITERIA = ("wefx", "weqx", "pwefx", "equilibrium", "fpo-cert", "efx", "ef1", "eqx", "eq1")


def _members(inst: Instance, agents: Optional[Collection[int]]) -> list[int]:
    return sorted(agents) if agents is not None else list(inst.agents())


def _remove_extreme(
    total: Fraction,
    goods: Iterable[int],
    weight: Callable[[int], Fraction],
    largest: bool = False,
) -> Optional[tuple[Fraction, int]]:
    """total minus the min (or max) weighted good, ties by lowest index."""
    goods = sorted(goods)
    if not goods:
        return None
    if largest:
        e = max(goods, key=lambda g: (weight(g), -g))
    else:
        e = min(goods, key=lambda g: (weight(g), g))
    return total - weight(e), e


def _pairwise(
    criterion: str,
    agents: list[int],
    lhs: Callable[[int], Fraction],
    rhs: RightHandSide,
) -> Verdict:
    for i in agents:
        left = lhs(i)
        for j in agents:
            if j == i:
                continue
            result = rhs(i, j)
            if result is None:
                continue
            right, e = result
            if left < right:
                return Verdict.fail(criterion, Witness(agent=i, other=j, good=e, lhs=left, rhs=right))
    return Verdict.ok(criterion)


def _value_rows(inst: Instance, bundles: Sequence[frozenset[int]]) -> list[list[Fraction]]:
    """valuation[i][j] = v_i(X_j)."""
    return [
        [sum((inst.values[i][e] for e in bundle), Fraction(0)) for bundle in bundles]
        for i in inst.agents()
    ]


def _wefx_rhs(inst: Instance, bundles, valuation) -> RightHandSide:
    def rhs(i: int, j: int):
        result = _remove_extreme(valuation[i][j], bundles[j], lambda e: inst.values[i][e])
        if result is None:
            return None
        right, e = result
        return right / inst.weights[j], e
    return rhs


def _weqx_rhs(inst: Instance, bundles, valuation) -> RightHandSide:
    def rhs(i: int, j: int):
        result = _remove_extreme(valuation[j][j], bundles[j], lambda e: inst.values[j][e])
        if result is None:
            return None
        right, e = result
        return right / inst.weights[j], e
    return rhs


def check_wefx(inst: Instance, X: Allocation, agents: Optional[Collection[int]] = None) -> VerifyReport:
    """
    v_i(X_i)/w_i >= v_i(X_j - e)/w_j for all i, j and every e in X_j.

    Args:
        inst: Canonical instance
        X: Allocation to check
        agents: Restrict both sides to this agent set

    Returns:
        Report with a single "wefx" verdict
    """
    bundles = X.bundles()
    valuation = _value_rows(inst, bundles)
    verdict = _pairwise(
        "wefx",
        _members(inst, agents),
        lambda i: valuation[i][i] / inst.weights[i],
        _wefx_rhs(inst, bundles, valuation),
    )
    return VerifyReport(verdicts=[verdict])


def check_weqx(inst: Instance, X: Allocation, agents: Optional[Collection[int]] = None) -> VerifyReport:
    """v_i(X_i)/w_i >= v_j(X_j - e)/w_j for all i, j and every e in X_j."""
    bundles = X.bundles()
    valuation = _value_rows(inst, bundles)
    verdict = _pairwise(
        "weqx",
        _members(inst, agents),
        lambda i: valuation[i][i] / inst.weights[i],
        _weqx_rhs(inst, bundles, valuation),
    )
    return VerifyReport(verdicts=[verdict])


def check_pwefx(
    inst: Instance,
    X: Allocation,
    p: Sequence[Fraction],
    agents: Optional[Collection[int]] = None,
) -> VerifyReport:
    """p(X_i)/w_i >= p(X_j - e)/w_j for all i, j (optionally within an agent set)."""
    bundles = X.bundles()
    spend = [sum((p[e] for e in bundle), Fraction(0)) for bundle in bundles]

    def rhs(i: int, j: int):
        result = _remove_extreme(spend[j], bundles[j], lambda e: p[e])
        if result is None:
            return None
        right, e = result
        return right / inst.weights[j], e

    verdict = _pairwise("pwefx", _members(inst, agents), lambda i: spend[i] / inst.weights[i], rhs)
    return VerifyReport(verdicts=[verdict])


def wefx_toward(inst: Instance, X: Allocation, i: int, j: int) -> bool:
    """Whether agent i is WEFX toward agent j."""
    bundles = X.bundles()
    valuation = _value_rows(inst, bundles)
    result = _wefx_rhs(inst, bundles, valuation)(i, j)
    return result is None or valuation[i][i] / inst.weights[i] >= result[0]


def weqx_toward(inst: Instance, X: Allocation, i: int, j: int) -> bool:
    """Whether agent i is WEQX toward agent j."""
    bundles = X.bundles()
    valuation = _value_rows(inst, bundles)
    result = _weqx_rhs(inst, bundles, valuation)(i, j)
    return result is None or valuation[i][i] / inst.weights[i] >= result[0]


def pwefx_toward(inst: Instance, X: Allocation, p: Sequence[Fraction], i: int, j: int) -> bool:
    """Whether agent i is pWEFX toward agent j."""
    bundle_i, bundle_j = X.bundle(i), X.bundle(j)
    if not bundle_j:
        return True
    left = sum((p[e] for e in bundle_i), Fraction(0)) / inst.weights[i]
    right = (sum((p[e] for e in bundle_j), Fraction(0)) - min(p[e] for e in bundle_j)) / inst.weights[j]
    return left >= right


def _equal_weights(inst: Instance) -> bool:
    return len(set(inst.weights)) <= 1


def check_ef_reductions(inst: Instance, X: Allocation) -> VerifyReport:
    """
    Unweighted EFX, EF1, EQX and EQ1.

    Only meaningful when all weights are equal; otherwise every verdict is
    not-applicable.
    """
    names = ("efx", "ef1", "eqx", "eq1")
    if not _equal_weights(inst):
        return VerifyReport(verdicts=[
            Verdict.not_applicable(name, "weights are not equal") for name in names
        ])

    bundles = X.bundles()
    valuation = _value_rows(inst, bundles)
    agents = list(inst.agents())

    def own(i: int) -> Fraction:
        return valuation[i][i]

    def envy(largest: bool) -> RightHandSide:
        return lambda i, j: _remove_extreme(valuation[i][j], bundles[j], lambda e: inst.values[i][e], largest)

    def equity(largest: bool) -> RightHandSide:
        return lambda i, j: _remove_extreme(valuation[j][j], bundles[j], lambda e: inst.values[j][e], largest)

    return VerifyReport(verdicts=[
        _pairwise("efx", agents, own, envy(largest=False)),
        _pairwise("ef1", agents, own, envy(largest=True)),
        _pairwise("eqx", agents, own, equity(largest=False)),
        _pairwise("eq1", agents, own, equity(largest=True)),
    ])


def certify_fpo(state: MarketState) -> VerifyReport:
    """
    One-sided fPO certificate: an equilibrium allocation is fPO.

    A failure only means no certificate was found; fPO status is then unknown.
    """
    verdict = is_equilibrium(state)
    if verdict.passed:
        return VerifyReport(verdicts=[Verdict.ok("fpo-cert", note="certificate: equilibrium prices support X")])
    return VerifyReport(verdicts=[Verdict.fail(
        "fpo-cert",
        verdict.witness,
        note="certificate: no equilibrium at these prices; fPO status unknown",
    )])


def check_equilibrium(inst: Instance, X: Allocation, p: Sequence[Fraction]) -> VerifyReport:
    """Equilibrium predicate for an (allocation, prices) pair."""
    return VerifyReport(verdicts=[is_equilibrium(MarketState.from_allocation(inst, X, p))])


def verify_criteria(
    inst: Instance,
    X: Allocation,
    p: Optional[Sequence[Fraction]],
    criteria: Sequence[str],
) -> VerifyReport:
    """
    Evaluate a list of named criteria.

    Args:
        inst: Canonical instance
        X: Allocation
        p: Prices (needed by pwefx, equilibrium and fpo-cert)
        criteria: Names from CRITERIA

    Returns:
        Report with one verdict per requested criterion, in request order

    Raises:
        ValueError: Unknown criterion, or prices missing where required
    """
    unknown = [name for name in criteria if name not in CRITERIA]
    if unknown:
        raise ValueError(f"Unknown criteria: {', '.join(unknown)}")
    needs_prices = {"pwefx", "equilibrium", "fpo-cert"}
    if p is None and needs_prices.intersection(criteria):
        raise ValueError("prices are required for pwefx, equilibrium and fpo-cert")

    reductions: Optional[VerifyReport] = None
    verdicts: list[Verdict] = []
    for name in criteria:
        if name == "wefx":
            verdicts.extend(check_wefx(inst, X).verdicts)
        elif name == "weqx":
            verdicts.extend(check_weqx(inst, X).verdicts)
        elif name == "pwefx":
            verdicts.extend(check_pwefx(inst, X, p).verdicts)  # type: ignore[arg-type]
        elif name == "equilibrium":
            verdicts.extend(check_equilibrium(inst, X, p).verdicts)  # type: ignore[arg-type]
        elif name == "fpo-cert":
            verdicts.extend(certify_fpo(MarketState.from_allocation(inst, X, p)).verdicts)  # type: ignore[arg-type]
        else:
            if reductions is None:
                reductions = check_ef_reductions(inst, X)
            verdicts.append(reductions.get(name))  # type: ignore[arg-type]
    return VerifyReport(verdicts=verdicts)
