"""
Instance construction and bundle measures.

All quantities are exact ``Fraction`` values. Bundle-level helpers take a
collection of goods; the allocation-level functions take an ``Allocation``.
"""

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from ..exceptions import (
    DegenerateKError,
    InstanceFormatError,
    NonBivaluedError,
    NonPositiveValueError,
    NonPositiveWeightError,
)
from ..models.files import AgentEntry, InstanceFile, InstanceMeta
from ..models.instance import Allocation, Instance
from ..utils.helpers import format_rational, parse_rational
from ..utils.logger import get_logger

logger = get_logger(__name__)

# k used when an instance has no values at all and declares none
EMPTY_INSTANCE_K = Fraction(2)


def validate_instance(raw: InstanceFile) -> Instance:
    """
    Turn a parsed instance document into a canonical Instance.

    Values are divided by the low value so every entry is 1 or k, and
    weights are normalized to sum to 1.

    Args:
        raw: Parsed instance document

    Returns:
        Canonical Instance

    Raises:
        InstanceFormatError: Structural problems (no agents, ragged rows, duplicate ids)
        NonPositiveWeightError: A weight is not positive
        NonPositiveValueError: A value is not positive
        NonBivaluedError: More than two distinct values, or values inconsistent with meta.k
        DegenerateKError: k would be 1
    """
    if not raw.agents:
        raise InstanceFormatError("instance needs at least one agent")

    m = len(raw.goods)
    if len(set(raw.goods)) != m:
        raise InstanceFormatError("good ids must be unique")
    agent_ids = [agent.id for agent in raw.agents]
    if len(set(agent_ids)) != len(agent_ids):
        raise InstanceFormatError("agent ids must be unique")

    for agent in raw.agents:
        if len(agent.values) != m:
            raise InstanceFormatError(
                f"agent {agent.id} has {len(agent.values)} values for {m} goods"
            )
        if agent.weight <= 0:
            raise NonPositiveWeightError(f"agent {agent.id} has weight {format_rational(agent.weight)}")

    distinct = sorted({value for agent in raw.agents for value in agent.values})
    if distinct and distinct[0] <= 0:
        raise NonPositiveValueError(f"value {format_rational(distinct[0])} is not positive")
    if len(distinct) > 2:
        shown = ", ".join(format_rational(value) for value in distinct[:4])
        raise NonBivaluedError(f"instance uses {len(distinct)} distinct values ({shown}, ...)")

    declared_k = raw.meta.k
    if declared_k is not None and declared_k <= 1:
        raise DegenerateKError(
            f"k = {format_rational(declared_k)}; identical valuations need no price dynamics"
        )

    if len(distinct) == 2:
        low, high = distinct
        if declared_k is not None and high / low != declared_k:
            raise NonBivaluedError(
                f"values {format_rational(low)}/{format_rational(high)} do not match declared "
                f"k = {format_rational(declared_k)}"
            )
    elif len(distinct) == 1:
        if declared_k is None:
            raise DegenerateKError(
                "all values are equal; declare meta.k to solve this instance with k > 1"
            )
        low = distinct[0]
        high = low * declared_k
    else:
        low = Fraction(1)
        high = declared_k if declared_k is not None else EMPTY_INSTANCE_K

    total_weight = sum((agent.weight for agent in raw.agents), Fraction(0))
    instance = Instance(
        values=tuple(tuple(value / low for value in agent.values) for agent in raw.agents),
        weights=tuple(agent.weight / total_weight for agent in raw.agents),
        low=low,
        high=high,
        agent_labels=tuple(agent_ids),
        good_labels=tuple(raw.goods),
    )
    logger.debug(f"Validated instance n={instance.n} m={instance.m} k={format_rational(instance.k)}")
    return instance


def build_instance(
    values: Sequence[Sequence[object]],
    weights: Optional[Sequence[object]] = None,
    k: Optional[object] = None,
    agent_labels: Optional[Sequence[str]] = None,
    good_labels: Optional[Sequence[str]] = None,
) -> Instance:
    """
    Build and validate an instance from raw rows.

    Args:
        values: One row of raw values per agent (ints, Fractions or rational strings)
        weights: Raw weights; equal weights when omitted
        k: Declared k, needed when only one distinct value occurs
        agent_labels: Agent ids (default a1..an)
        good_labels: Good ids (default e1..em)

    Returns:
        Canonical Instance
    """
    n = len(values)
    m = len(values[0]) if n else 0
    weights = weights if weights is not None else [1] * n
    agent_labels = agent_labels or [f"a{i + 1}" for i in range(n)]
    good_labels = good_labels or [f"e{e + 1}" for e in range(m)]
    try:
        raw = InstanceFile(
            agents=[
                AgentEntry(id=label, weight=weight, values=list(row))
                for label, weight, row in zip(agent_labels, weights, values)
            ],
            goods=list(good_labels),
            meta=InstanceMeta(k=parse_rational(k) if k is not None else None),
        )
    except ValueError as e:
        raise InstanceFormatError(str(e)) from e
    return validate_instance(raw)


def utility(inst: Instance, i: int, goods: Iterable[int]) -> Fraction:
    """Additive utility v_i(S)."""
    row = inst.values[i]
    return sum((row[e] for e in goods), Fraction(0))


def bivalued_split(inst: Instance, i: int, goods: Iterable[int]) -> tuple[int, int]:
    """Counts (m1, m2) of goods agent i values 1 and k, so v_i(S) = m1 + k*m2."""
    low_count = high_count = 0
    for e in goods:
        if inst.is_high(i, e):
            high_count += 1
        else:
            low_count += 1
    return low_count, high_count


def price_sum(goods: Iterable[int], prices: Sequence[Fraction]) -> Fraction:
    """Unweighted spending p(S)."""
    return sum((prices[e] for e in goods), Fraction(0))


def bundle_spending(inst: Instance, i: int, goods: Iterable[int], prices: Sequence[Fraction]) -> Fraction:
    """Weighted spending p(S)/w_i."""
    return price_sum(goods, prices) / inst.weights[i]


def bundle_hat_spending(inst: Instance, i: int, goods: Iterable[int], prices: Sequence[Fraction]) -> Fraction:
    """Weighted spending after removing one minimum-price good; 0 for an empty bundle."""
    goods = list(goods)
    if not goods:
        return Fraction(0)
    total = price_sum(goods, prices)
    return (total - min(prices[e] for e in goods)) / inst.weights[i]


def bundle_value(inst: Instance, i: int, goods: Iterable[int]) -> Fraction:
    """Weighted own utility v_i(S)/w_i."""
    return utility(inst, i, goods) / inst.weights[i]


def bundle_hat_value(inst: Instance, i: int, goods: Iterable[int]) -> Fraction:
    """Weighted own utility after removing one minimum-value good; 0 for an empty bundle."""
    goods = list(goods)
    if not goods:
        return Fraction(0)
    row = inst.values[i]
    total = sum((row[e] for e in goods), Fraction(0))
    return (total - min(row[e] for e in goods)) / inst.weights[i]


def weighted_spending(inst: Instance, i: int, X: Allocation, p: Sequence[Fraction]) -> Fraction:
    """p(X_i)/w_i."""
    return bundle_spending(inst, i, X.bundle(i), p)


def hat_p(inst: Instance, i: int, X: Allocation, p: Sequence[Fraction]) -> Fraction:
    """max over e in X_i of p(X_i - e)/w_i, with 0 for an empty bundle."""
    return bundle_hat_spending(inst, i, X.bundle(i), p)


def hat_v(inst: Instance, i: int, X: Allocation) -> Fraction:
    """max over e in X_i of v_i(X_i - e)/w_i, with 0 for an empty bundle."""
    return bundle_hat_value(inst, i, X.bundle(i))
