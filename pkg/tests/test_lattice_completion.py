import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from utils.algebra_core import COMMUTATIVE, MATRIX, AlgebraHandle, make_element, random_positive
from utils.errors import AlgebraMismatchError, OplatError
from utils.lattice_completion import (
    ANTIBASIC,
    BASIC,
    EXACT,
    PROBE_CERTIFIED,
    BasicElement,
    LatticeElement,
    add,
    antibasic,
    as_lattice,
    basic,
    basic_geq,
    equivalent,
    geq,
    is_nonnegative,
    min_positive_decomposition,
    norm,
    pi,
    s_rep,
    scale,
    vee,
    wedge,
)
from utils.states import point_state, vector_state

C2 = AlgebraHandle(COMMUTATIVE, 2)
C3 = AlgebraHandle(COMMUTATIVE, 3)

small_ints = st.integers(-3, 3).map(float)
tuples3 = st.lists(small_ints, min_size=3, max_size=3)


@st.composite
def lattice_elements(draw):
    pos = draw(st.lists(tuples3, min_size=1, max_size=3))
    neg = draw(st.lists(tuples3, min_size=1, max_size=3))
    return LatticeElement(basic(C3, pos), basic(C3, neg))


def test_basic_element_needs_generators():
    with pytest.raises(OplatError):
        BasicElement(C2, (), BASIC)


def test_lattice_parts_must_be_basic():
    with pytest.raises(OplatError):
        LatticeElement(antibasic(C2, [[0, 0]]), basic(C2, [[0, 0]]))


def test_algebras_must_match():
    with pytest.raises(AlgebraMismatchError):
        add(as_lattice(C2.identity()), as_lattice(C3.identity()))


def test_pi_of_an_embedded_element_is_the_element():
    x = make_element(C3, [1.0, -2.0, 0.5])
    assert list(pi(as_lattice(x)).values) == [1.0, -2.0, 0.5]


def test_antibasic_pi_is_the_pointwise_max():
    a = as_lattice(antibasic(C2, [[0, 3], [2, 1]]))
    assert list(pi(a).values) == [2.0, 3.0]


def test_order_is_finer_than_pointwise():
    # both have pi = (0, 0) but only one dominates the other
    corners = basic(C2, [[0, 1], [1, 0]])
    origin = basic(C2, [[0, 0]])
    midpoint = basic(C2, [[0.5, 0.5]])
    assert basic_geq(corners, origin)
    assert not basic_geq(origin, corners)
    assert basic_geq(midpoint, corners)
    assert not basic_geq(corners, midpoint)
    assert not equivalent(corners, origin)


def test_dominated_generators_do_not_change_the_class():
    assert equivalent(basic(C2, [[0, 1], [1, 1]]), basic(C2, [[0, 1]]))


def test_equivalence_needs_matching_polarity():
    with pytest.raises(OplatError):
        equivalent(basic(C2, [[0, 1]]), antibasic(C2, [[0, 1]]))


@settings(max_examples=40, deadline=None)
@given(lattice_elements(), lattice_elements())
def test_pi_is_additive(a, b):
    assert np.allclose(pi(add(a, b)).values, pi(a).values + pi(b).values)


@settings(max_examples=40, deadline=None)
@given(lattice_elements(), lattice_elements())
def test_pi_preserves_lattice_operations(a, b):
    assert np.allclose(pi(wedge(a, b)).values, np.minimum(pi(a).values, pi(b).values))
    assert np.allclose(pi(vee(a, b)).values, np.maximum(pi(a).values, pi(b).values))


@settings(max_examples=25, deadline=None)
@given(lattice_elements(), lattice_elements())
def test_wedge_is_below_and_vee_above(a, b):
    w, v = wedge(a, b), vee(a, b)
    assert geq(a, w) and geq(b, w)
    assert geq(v, a) and geq(v, b)


@settings(max_examples=25, deadline=None)
@given(lattice_elements())
def test_minimal_positive_decomposition(a):
    plus, minus = min_positive_decomposition(a)
    assert is_nonnegative(plus) and is_nonnegative(minus)
    assert np.allclose(pi(plus).values - pi(minus).values, pi(a).values)


def test_cancellation():
    a = LatticeElement(basic(C2, [[0, 1], [1, 0]]), basic(C2, [[0, 0]]))
    b = LatticeElement(basic(C2, [[2, 2]]), basic(C2, [[1, -1], [0, 0]]))
    assert geq(add(a, b) - b, a) and geq(a, add(a, b) - b)


def test_negative_scaling_is_refused():
    with pytest.raises(OplatError):
        scale(as_lattice(C2.identity()), -1.0)


def test_commutative_norm_is_exact():
    bound = norm(as_lattice(make_element(C3, [-3.0, 2.0, 0.0])))
    assert bound.certainty == EXACT
    assert bound.value == 3.0


def test_matrix_norm_brackets_the_operator_norm():
    m3 = AlgebraHandle(MATRIX, 3)
    x = make_element(m3, np.diag([2.0, -5.0, 1.0]))
    bound = norm(as_lattice(x))
    assert bound.certainty == PROBE_CERTIFIED
    assert bound.lower <= 5.0 + 1e-9 <= bound.upper + 2e-9
    assert bound.lower == pytest.approx(5.0)


def test_matrix_order_through_probes():
    m3 = AlgebraHandle(MATRIX, 3)
    rng = np.random.default_rng(2)
    c = BasicElement(m3, (random_positive(m3, rng), random_positive(m3, rng)), BASIC)
    raised = add(as_lattice(c), as_lattice(random_positive(m3, rng)))
    assert geq(raised, as_lattice(c))


def test_state_representation():
    a = LatticeElement(basic(C2, [[3, 1], [2, 4]]), basic(C2, [[1, 1]]))
    assert s_rep(a, point_state(2, 0)) == 1.0
    assert s_rep(a, point_state(2, 1)) == 0.0
    # a mixed value is the least generator value, not the mean of pointwise minima
    assert s_rep(a, vector_state([1.0, 1.0])) == pytest.approx(1.0)


def test_polarity_flip():
    c = basic(C2, [[1, 2]])
    assert c.negated().polarity == ANTIBASIC
    assert np.allclose(c.negated().generators[0].entries, [-1, -2])
