from fractions import Fraction

import pytest

from src.exceptions import (
    DegenerateKError,
    InstanceFormatError,
    NonBivaluedError,
    NonPositiveValueError,
    NonPositiveWeightError,
)
from src.models import Allocation
from src.services.core import (
    bivalued_split,
    build_instance,
    hat_p,
    hat_v,
    utility,
    weighted_spending,
)

TABLE1_PRICES = (Fraction(5), Fraction(5), Fraction(5), Fraction(1), Fraction(5))


def test_table1_is_canonical(table1):
    assert table1.k == 5
    assert table1.weights == (Fraction(1, 2), Fraction(1, 2))
    assert table1.values[0] == (5, 5, 5, 1, 1)
    assert (table1.n, table1.m) == (2, 5)


def test_rescales_and_normalizes():
    inst = build_instance([[2, 6], [6, 2]], weights=[1, 3])
    assert inst.k == 3
    assert inst.weights == (Fraction(1, 4), Fraction(3, 4))
    assert inst.values == ((1, 3), (3, 1))


def test_single_agent_without_goods():
    inst = build_instance([[]])
    assert (inst.n, inst.m) == (1, 0)
    assert inst.weights == (Fraction(1),)


def test_declared_k_for_equal_values():
    inst = build_instance([[2, 2], [2, 2]], k="2")
    assert inst.k == 2
    assert all(value == 1 for row in inst.values for value in row)


@pytest.mark.parametrize("values, kwargs, error", [
    ([[1, 2, 3]], {}, NonBivaluedError),
    ([[1, 5]], {"k": "3"}, NonBivaluedError),
    ([[0, 2]], {}, NonPositiveValueError),
    ([[1, 2], [2, 1]], {"weights": [0, 1]}, NonPositiveWeightError),
    ([[1, 2], [2, 1]], {"weights": [-1, 2]}, NonPositiveWeightError),
    ([[2, 2], [2, 2]], {}, DegenerateKError),
    ([[2, 2]], {"k": "1"}, DegenerateKError),
    ([[1, 2], [1]], {}, InstanceFormatError),
])
def test_rejects_bad_instances(values, kwargs, error):
    with pytest.raises(error):
        build_instance(values, **kwargs)


def test_rejects_float_values():
    with pytest.raises(InstanceFormatError):
        build_instance([[1.5, 3]])


def test_rejects_duplicate_ids():
    with pytest.raises(InstanceFormatError):
        build_instance([[1, 2], [2, 1]], agent_labels=["a", "a"])


def test_utility(table1):
    assert utility(table1, 0, {0, 1, 2}) == 15
    assert utility(table1, 1, set()) == 0
    assert utility(table1, 1, range(5)) == 9


def test_bivalued_split_matches_utility(table1):
    low, high = bivalued_split(table1, 1, range(5))
    assert (low, high) == (4, 1)
    assert low + table1.k * high == utility(table1, 1, range(5))


def test_weighted_spending(table1, table1_owners):
    X = Allocation(n=2, owner=table1_owners)
    assert weighted_spending(table1, 1, X, TABLE1_PRICES) == 12
    assert weighted_spending(table1, 0, X, TABLE1_PRICES) == 30

    only_e5 = Allocation(n=2, owner=(0, 0, 0, 0, 1))
    raised = (5, 5, 5, 5, 25)
    assert weighted_spending(table1, 1, only_e5, [Fraction(p) for p in raised]) == 50


def test_empty_bundle_measures(table1):
    X = Allocation(n=2, owner=(0, 0, 0, 0, 0))
    assert weighted_spending(table1, 1, X, TABLE1_PRICES) == 0
    assert hat_p(table1, 1, X, TABLE1_PRICES) == 0
    assert hat_v(table1, 1, X) == 0


def test_hat_measures(table1, table1_owners):
    X = Allocation(n=2, owner=table1_owners)
    assert hat_p(table1, 0, X, TABLE1_PRICES) == 20
    assert hat_p(table1, 1, X, TABLE1_PRICES) == 10
    assert hat_v(table1, 0, X) == 20
    assert hat_v(table1, 1, X) == 10

    prices = (Fraction(5), Fraction(5), Fraction(5), Fraction(1), Fraction(25))
    assert hat_p(table1, 1, X, prices) == 50


def test_singleton_hat_is_zero(table1):
    X = Allocation(n=2, owner=(0, 0, 0, 0, 1))
    assert hat_p(table1, 1, X, TABLE1_PRICES) == 0
    assert hat_v(table1, 1, X) == 0


def test_spending_scales_linearly(table1, table1_owners):
    X = Allocation(n=2, owner=table1_owners)
    c = Fraction(7, 3)
    scaled = [price * c for price in TABLE1_PRICES]
    for i in table1.agents():
        assert weighted_spending(table1, i, X, scaled) == c * weighted_spending(table1, i, X, TABLE1_PRICES)
        assert hat_p(table1, i, X, scaled) == c * hat_p(table1, i, X, TABLE1_PRICES)
        assert hat_p(table1, i, X, TABLE1_PRICES) <= weighted_spending(table1, i, X, TABLE1_PRICES)
