import numpy as np
import pytest

from utils.algebra_core import (
    MATRIX,
    AlgebraHandle,
    identity_projection,
    projection_from_basis,
    projection_pair_with_angle,
    random_projection,
)
from utils.errors import OplatError
from utils.projection_lattice import (
    LatticePair,
    commutes,
    commuting_bounds,
    commuting_bounds_multi,
    distributivity_probe,
    is_below,
    modularity_probe,
    predicates,
    principal_angles,
    same_projection,
    vee,
    wedge_exact,
    wedge_iterative,
)

M2 = AlgebraHandle(MATRIX, 2)
M3 = AlgebraHandle(MATRIX, 3)
E = np.eye(3)


def span(algebra, *vectors):
    return projection_from_basis(algebra, np.column_stack(vectors))


def test_wedge_of_coordinate_planes():
    p, q = span(M3, E[0], E[1]), span(M3, E[1], E[2])
    meet = wedge_exact(p, q)
    assert meet.rank == 1
    assert same_projection(meet, span(M3, E[1]))
    assert vee(p, q).is_identity()


def test_pair_of_coordinate_planes():
    pair = LatticePair(span(M3, E[0], E[1]), span(M3, E[1], E[2]))
    assert pair.dim == 3
    assert same_projection(pair.meet(), span(M3, E[1]))
    approx, iterations = pair.iterated_meet()
    assert same_projection(approx, pair.meet()) and iterations >= 1
    assert np.allclose(pair.angles(), [0.0, np.pi / 2], atol=1e-6)


def test_pair_needs_one_algebra():
    with pytest.raises(OplatError):
        LatticePair(identity_projection(M2), identity_projection(M3))


def test_iterative_wedge_agrees_with_the_kernel():
    p = span(M3, E[0], E[1])
    q = span(M3, E[0], (E[1] + E[2]) / np.sqrt(2))
    limit, steps = wedge_iterative(p, q)
    assert same_projection(limit, wedge_exact(p, q))
    assert same_projection(limit, span(M3, E[0]))
    assert steps > 1


def test_commuting_pair_settles_at_once():
    p, q = span(M3, E[0], E[1]), span(M3, E[1], E[2])
    limit, steps = wedge_iterative(p, q)
    assert steps == 1
    assert same_projection(limit, span(M3, E[1]))


def test_iteration_count_follows_the_angle():
    # the gap after n steps is cos^2n * sin^2 of the angle
    p, q = projection_pair_with_angle(M2, np.pi / 3, np.random.default_rng(0))
    limit, steps = wedge_iterative(p, q)
    assert limit.is_zero()
    assert 19 <= steps <= 21


def test_principal_angles():
    p = span(M3, E[0], E[1])
    q = span(M3, E[0], (E[1] + E[2]) / np.sqrt(2))
    assert np.allclose(principal_angles(p, q), [1.0, 1 / np.sqrt(2)])


def test_de_morgan_on_random_projections():
    rng = np.random.default_rng(5)
    m4 = AlgebraHandle(MATRIX, 4)
    for _ in range(5):
        p, q = random_projection(m4, rng, 2), random_projection(m4, rng, 3)
        assert same_projection(vee(p, q).complement(), wedge_exact(p.complement(), q.complement()))
        assert wedge_exact(p, q).rank == 1


def test_commuting_bounds_of_a_tilted_line():
    e = span(M2, np.array([1.0, 1.0]))
    f = span(M2, np.array([1.0, 0.0]))
    bounds = commuting_bounds(e, f)
    assert bounds.lower.is_zero()
    assert bounds.upper.is_identity()


def test_commuting_bounds_leave_commuting_elements_alone():
    e, f = span(M3, E[0]), span(M3, E[0], E[1])
    bounds = commuting_bounds(e, f)
    assert same_projection(bounds.lower, e)
    assert same_projection(bounds.upper, e)


def test_multiplet_bounds_commute_with_the_family():
    e = span(M3, np.array([1.0, 1.0, 1.0]))
    family = [span(M3, E[0]), span(M3, E[1])]
    bounds = commuting_bounds_multi(e, family)
    assert is_below(bounds.lower, e) and is_below(e, bounds.upper)
    for f in family:
        assert commutes(bounds.lower, f) and commutes(bounds.upper, f)
    assert bounds.lower.is_zero()


def test_multiplet_bounds_of_empty_family():
    e = span(M3, E[2])
    bounds = commuting_bounds_multi(e, [])
    assert bounds.lower is e and bounds.upper is e


def test_pair_predicates():
    flags = predicates(span(M2, np.array([1.0, 0.0])), span(M2, np.array([0.0, 1.0])))
    assert flags.orthogonal and flags.commuting and flags.coorthogonal
    tilted = predicates(span(M2, np.array([1.0, 0.0])), span(M2, np.array([1.0, 1.0])))
    assert not tilted.orthogonal and not tilted.commuting


def test_three_lines_break_distributivity():
    e = span(M2, np.array([1.0, 0.0]))
    f = span(M2, np.array([0.0, 1.0]))
    g = span(M2, np.array([1.0, 1.0]))
    report = distributivity_probe(e, f, g)
    assert not report.holds
    assert "left" in report.witness


def test_modularity_holds_in_finite_dimensions():
    rng = np.random.default_rng(11)
    m4 = AlgebraHandle(MATRIX, 4)
    g = random_projection(m4, rng, 3)
    e = projection_from_basis(m4, g.range_basis[:, :1])
    f = random_projection(m4, rng, 2)
    assert modularity_probe(e, f, g).holds


def test_modularity_needs_ordered_arguments():
    with pytest.raises(OplatError):
        modularity_probe(span(M2, np.array([1.0, 0.0])), identity_projection(M2), span(M2, np.array([0.0, 1.0])))
