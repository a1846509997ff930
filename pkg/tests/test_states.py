import numpy as np
import pytest

from utils.algebra_core import COMMUTATIVE, MATRIX, AlgebraHandle, HermitianElement, hermitian_basis, make_element
from utils.errors import AlgebraMismatchError, OplatError
from utils.states import (
    NotSeparated,
    maximally_mixed,
    mixture_state,
    point_state,
    probe_states,
    random_pure_state,
    separate_states,
    state_eval,
    vector_state,
)

M2 = AlgebraHandle(MATRIX, 2)
C3 = AlgebraHandle(COMMUTATIVE, 3)


def test_point_state_reads_one_coordinate():
    assert state_eval(point_state(3, 1), make_element(C3, [4.0, -2.0, 7.0])) == -2.0


def test_vector_state_is_normalized():
    rho = vector_state([1.0, 1.0])
    x = make_element(M2, [[1, 0], [0, 3]])
    assert state_eval(rho, x) == pytest.approx(2.0)


def test_maximally_mixed_is_the_normalized_trace():
    x = make_element(AlgebraHandle(MATRIX, 3), np.diag([1.0, 2.0, 6.0]))
    assert state_eval(maximally_mixed(3), x) == pytest.approx(3.0)


def test_mixture_needs_orthonormal_vectors():
    with pytest.raises(OplatError):
        mixture_state([0.5, 0.5], [[1, 0], [1, 1]])
    with pytest.raises(OplatError):
        mixture_state([0.7, 0.7], [[1, 0], [0, 1]])


def test_state_dimension_must_match():
    with pytest.raises(AlgebraMismatchError):
        state_eval(point_state(2, 0), C3.identity())


def test_probe_states_are_point_masses_in_the_commutative_kind():
    probes = probe_states(C3, [C3.identity()])
    assert [p.index for p in probes] == [0, 1, 2]


def test_probe_states_include_eigenvectors():
    x = make_element(M2, [[0, 1], [1, 0]])
    probes = probe_states(M2, [x], np.random.default_rng(0), extra=3)
    assert len(probes) == 2 + 2 + 3
    values = sorted(state_eval(p, x) for p in probes[2:4])
    assert values == pytest.approx([-1.0, 1.0])


def test_commutative_separation():
    span = hermitian_basis(C3)
    c = separate_states(span, point_state(3, 0), point_state(3, 2), 1e-6)
    assert isinstance(c, HermitianElement)
    assert c.entries[0] == pytest.approx(1.0)
    assert c.entries[2] <= 1e-6
    assert np.all(c.entries >= 0)


def test_commutative_separation_fails_in_the_scalars():
    c = separate_states([C3.identity()], point_state(3, 0), point_state(3, 1), 1e-3)
    assert isinstance(c, NotSeparated)


def test_matrix_separation_of_pure_states():
    rng = np.random.default_rng(8)
    rho, sigma = random_pure_state(3, rng), random_pure_state(3, rng)
    c = separate_states(hermitian_basis(AlgebraHandle(MATRIX, 3)), rho, sigma, 1e-6)
    assert isinstance(c, HermitianElement)
    assert state_eval(rho, c) == pytest.approx(1.0)
    assert state_eval(sigma, c) <= 1e-6


def test_separation_needs_positive_epsilon():
    with pytest.raises(OplatError):
        separate_states(hermitian_basis(C3), point_state(3, 0), point_state(3, 1), 0.0)
