import numpy as np
import pytest

from utils.algebra_core import COMMUTATIVE, MATRIX, AlgebraHandle, is_positive, make_element, random_positive
from utils.errors import NotPositiveError, OplatError
from utils.jordan_ops import (
    Interval,
    basic_sqrt,
    basic_square,
    eval_square_interval,
    r_grid,
    sqr_general_at,
    sqr_single,
    sqr_target,
    sqrt_general_at,
    square_general_at,
    square_value_at,
)
from utils.lattice_completion import BASIC, BasicElement, LatticeElement, as_lattice, basic, pi
from utils.states import mixture_state, point_state, random_pure_state, vector_state

C2 = AlgebraHandle(COMMUTATIVE, 2)
M2 = AlgebraHandle(MATRIX, 2)


def test_interval_arithmetic():
    a, b = Interval(1.0, 2.0), Interval(0.5, 0.75)
    assert (a - b) == Interval(0.25, 1.5)
    assert (a + b).width == pytest.approx(1.25)
    assert (a * -2.0) == Interval(-4.0, -2.0)
    assert a.contains(1.5) and not a.contains(2.1)


def test_commutative_square_is_the_square_of_the_floor():
    c = basic(C2, [[1, 2], [3, 0]])
    assert eval_square_interval(c, point_state(2, 0)).lower == 1.0
    assert eval_square_interval(c, point_state(2, 1)).upper == 0.0
    assert np.allclose(pi(basic_square(c)).values, [1.0, 0.0])


def test_square_needs_a_positive_element():
    with pytest.raises(NotPositiveError):
        eval_square_interval(basic(C2, [[1, -1]]), point_state(2, 0))
    with pytest.raises(OplatError):
        eval_square_interval(basic(C2, [[1, 1]]), point_state(2, 0), epsilon=0.0)


def test_square_of_the_unit():
    eps = 1e-6
    interval = eval_square_interval(basic(M2, [np.eye(2)]), vector_state([1.0, 1j]), eps)
    assert interval.lower == pytest.approx(1.0)
    assert interval.upper == pytest.approx((1 + eps) ** 2)


def test_witness_lies_above_the_generator():
    c = basic(M2, [np.diag([1.0, 4.0])])
    interval = eval_square_interval(c, vector_state([1.0, 0.0]), 1e-6)
    assert interval.lower == pytest.approx(1.0)
    assert interval.upper == pytest.approx((1 + 1e-6) ** 2)
    assert is_positive(interval.witness - c.generators[0])


def test_interval_width_on_random_instances():
    rng = np.random.default_rng(17)
    m3 = AlgebraHandle(MATRIX, 3)
    eps = 1e-6
    for _ in range(10):
        c = BasicElement(m3, (random_positive(m3, rng), random_positive(m3, rng)), BASIC)
        interval = eval_square_interval(c, random_pure_state(3, rng), eps)
        size = max(g.norm() for g in c.generators)
        assert interval.lower <= interval.upper
        assert interval.width <= 4 * eps * (size + eps)


def test_mixed_states_give_a_bracket():
    rng = np.random.default_rng(4)
    c = BasicElement(M2, (random_positive(M2, rng),), BASIC)
    rho = mixture_state([0.25, 0.75], [[1, 0], [0, 1]])
    interval = eval_square_interval(c, rho, 1e-6)
    assert interval.lower <= interval.upper
    assert square_value_at(c, rho) == interval.lower


def test_basic_sqrt_then_square():
    c = basic(C2, [[4, 9]])
    assert np.allclose(pi(basic_sqrt(c)).values, [2.0, 3.0])


def test_sqrt_of_an_element():
    p = as_lattice(make_element(C2, [4.0, 9.0]))
    assert sqrt_general_at(p, point_state(2, 1)) == pytest.approx(3.0)


def test_sqrt_of_a_difference():
    p = LatticeElement(basic(C2, [[5, 5]]), basic(C2, [[1, 1]]))
    assert sqrt_general_at(p, point_state(2, 0)) == pytest.approx(2.0)


def test_sqrt_vanishes_where_the_element_does():
    p = LatticeElement(basic(C2, [[1, 1]]), basic(C2, [[1, 0]]))
    assert sqrt_general_at(p, point_state(2, 0)) == 0.0
    assert sqrt_general_at(p, point_state(2, 1)) == pytest.approx(1.0)
    for index, value in enumerate(pi(p).values):
        assert sqrt_general_at(p, point_state(2, index)) <= np.sqrt(max(value, 0.0)) + 1e-8


def test_general_square_splits_into_both_sides():
    a = as_lattice(make_element(C2, [-3.0, 2.0]))
    assert sqr_general_at(a, point_state(2, 0)) == 0.0
    assert sqr_general_at(a, point_state(2, 1)) == pytest.approx(4.0)
    assert square_general_at(a, point_state(2, 0)) == pytest.approx(9.0)
    assert square_general_at(a, point_state(2, 1)) == pytest.approx(4.0)


def test_r_grid_spans_one_to_r_max():
    grid = r_grid(1e4, 5)
    assert grid[0] == pytest.approx(1.0)
    assert grid[-1] == pytest.approx(1e4)


def test_single_element_square_converges_to_positive_part():
    a = make_element(C2, [2.0, -1.0])
    iterate, gap = sqr_single(a, r_max=1e6)
    assert gap == pytest.approx(1e-6)
    assert iterate.entries[0] == pytest.approx(4.0)
    assert iterate.entries[1] == pytest.approx(-1e-6, abs=1e-9)
    assert np.max(np.abs(iterate.entries - sqr_target(a).entries)) <= gap * (1 + 1e-6)


def test_single_element_square_in_matrices():
    a = make_element(M2, [[1.0, 2.0], [2.0, -3.0]])
    iterate, gap = sqr_single(a, r_max=1e5)
    assert (iterate - sqr_target(a)).norm() <= gap * (1 + 1e-6) + 1e-8


def test_r_max_below_one_is_refused():
    with pytest.raises(OplatError):
        sqr_single(make_element(C2, [1.0, 1.0]), r_max=0.5)
