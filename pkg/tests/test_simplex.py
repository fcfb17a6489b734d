from fractions import Fraction as F

import pytest

from src.services.simplex import maximize


def test_optimal_vertex_is_exact():
    # max x1 + x2  s.t.  x1 + 2 x2 <= 4,  3 x1 + x2 <= 6  (slack columns explicit)
    result = maximize(
        [F(1), F(1), F(0), F(0)],
        [[F(1), F(2), F(1), F(0)], [F(3), F(1), F(0), F(1)]],
        [F(4), F(6)],
    )
    assert result.status == "optimal"
    assert result.value == F(14, 5)
    assert result.solution[:2] == (F(8, 5), F(6, 5))


def test_redundant_row_is_dropped():
    result = maximize([F(1), F(0)], [[F(1), F(1)], [F(2), F(2)]], [F(1), F(2)])
    assert result.status == "optimal"
    assert result.value == 1
    assert result.solution == (F(1), F(0))


def test_infeasible():
    result = maximize([F(1), F(1)], [[F(1), F(1)]], [F(-1)])
    assert result.status == "infeasible"
    assert result.value is None


def test_unbounded():
    result = maximize([F(1), F(0)], [[F(1), F(-1)]], [F(1)])
    assert result.status == "unbounded"


def test_shape_mismatch():
    with pytest.raises(ValueError):
        maximize([F(1)], [[F(1), F(1)]], [F(1)])
