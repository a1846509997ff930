import numpy as np
import pytest

from utils.algebra_core import COMMUTATIVE, MATRIX, AlgebraHandle, make_element, projection_from_basis
from utils.errors import DomainError, OplatError
from utils.pmap import (
    CONCAVE,
    CONVEX,
    DECORATIONS,
    EXHAUSTIVE,
    O_TYPE,
    SAMPLED,
    PMapTable,
    SurjectionSpec,
    boolean_domain,
    check_decoration,
    coherent_fill,
    coherent_lift,
    dominant_diagonal_map,
    extend_complemented,
    extend_pmap,
    homogenized,
    identity_table,
    normalize_decoration,
    pmap_from_function,
    projection_mask,
    schwarz_suite,
)

C3 = AlgebraHandle(COMMUTATIVE, 3)


def _saturating_table():
    """0 goes to 0, every other projection goes to 1"""
    domain = boolean_domain(2)
    return PMapTable(tuple(domain), (domain[0], domain[3], domain[3], domain[3]))


def test_decoration_names():
    assert normalize_decoration("a∧") == "a-wedge"
    assert normalize_decoration(" a∨ ") == "a-vee"
    with pytest.raises(OplatError):
        normalize_decoration("b")


def test_boolean_domain_is_ordered_by_mask():
    domain = boolean_domain(3)
    assert [projection_mask(p) for p in domain] == list(range(8))
    assert domain[5].rank == 2


@pytest.mark.parametrize("decoration", DECORATIONS)
def test_identity_has_every_decoration(decoration):
    report = check_decoration(identity_table(boolean_domain(3)), decoration)
    assert report.passed
    assert report.checked == 64
    assert report.certainty == EXHAUSTIVE


def test_table_must_be_monotone():
    domain = boolean_domain(2)
    with pytest.raises(OplatError):
        PMapTable(tuple(domain), (domain[0], domain[3], domain[0], domain[1]))


def test_table_must_fix_zero():
    domain = boolean_domain(1)
    with pytest.raises(OplatError):
        PMapTable(tuple(domain), (domain[1], domain[1]))


def test_table_domain_must_hold_complements():
    domain = boolean_domain(2)
    with pytest.raises(DomainError):
        PMapTable((domain[0], domain[1]), (domain[0], domain[1]))


def test_saturating_map_fails_orthogonality_and_complements():
    s = _saturating_table()
    assert not check_decoration(s, "o").passed
    report = check_decoration(s, "c")
    assert not report.passed
    assert report.failures and "spc" in report.failures[0]
    assert check_decoration(s, "a").passed


def test_sampled_checks_are_marked():
    s = _saturating_table()
    d = s.domain
    report = check_decoration(s, "o", test_set=[(d[1], d[2])])
    assert report.certainty == SAMPLED
    assert report.checked == 1 and not report.passed


def test_function_tables_normalize_decorations():
    s = pmap_from_function(boolean_domain(2), lambda p: p, decorations=["a∧"])
    assert s.decorations == frozenset({"a-wedge"})
    assert s.rule is None


def test_extension_reproduces_positive_elements():
    s = identity_table(boolean_domain(3))
    x = make_element(C3, [3.0, 1.0, 2.0])
    assert np.allclose(extend_pmap(s, x).entries, x.entries)
    y = make_element(C3, [-1.0, 2.0, 0.5])
    assert np.allclose(homogenized(s, y).entries, y.entries)


def test_saturating_extension_takes_the_maximum():
    s = _saturating_table()
    x = make_element(AlgebraHandle(COMMUTATIVE, 2), [3.0, 1.0])
    assert np.allclose(extend_pmap(s, x).entries, [3.0, 3.0])


def test_dominant_diagonal_rule():
    s = dominant_diagonal_map(2)
    m2 = AlgebraHandle(MATRIX, 2)
    assert projection_mask(s(projection_from_basis(m2, np.array([0.6, 0.8])))) == 0b10
    assert projection_mask(s(projection_from_basis(m2, np.array([1.0, 0.2])))) == 0b01
    assert s.decorations == frozenset({"o"})


def test_dominant_diagonal_rule_needs_rank_one():
    s = dominant_diagonal_map(3)
    plane = projection_from_basis(AlgebraHandle(MATRIX, 3), np.eye(3)[:, :2])
    with pytest.raises(DomainError):
        s(plane)


@pytest.mark.parametrize("kind", [O_TYPE, CONCAVE, CONVEX])
def test_identity_is_tight_for_every_schwarz_kind(kind):
    s = identity_table(boolean_domain(3))
    a = make_element(C3, [1.0, -2.0, 0.5])
    b = make_element(C3, [0.0, 1.0, 3.0])
    instances = [a, b] if kind == O_TYPE else [(a, b)]
    report = schwarz_suite(s, instances, kind)
    assert report.passed
    assert report.worst == pytest.approx(0.0, abs=1e-9)


def test_schwarz_needs_its_decoration():
    report = schwarz_suite(_saturating_table(), [make_element(AlgebraHandle(COMMUTATIVE, 2), [1.0, 0.0])])
    assert not report.passed
    assert report.margins == []
    assert not report.prerequisite.passed


def test_unknown_schwarz_kind():
    with pytest.raises(OplatError):
        schwarz_suite(identity_table(boolean_domain(1)), [], "linear")


def test_surjection_classes_must_be_disjoint():
    with pytest.raises(OplatError):
        SurjectionSpec(3, ((0, 1), (1, 2)))
    with pytest.raises(OplatError):
        SurjectionSpec(3, ((0,), ()))


def test_coherent_lift_is_a_cross_section():
    spec = SurjectionSpec(4, ((0, 1), (2,)))
    assert spec.free_points == [3]
    s = coherent_lift(spec)
    masks = [projection_mask(v) for v in s.values]
    assert masks == [0b0000, 0b1011, 0b0100, 0b1111]
    assert all(spec.apply(m) == e for e, m in enumerate(masks))
    for decoration in ("c", "a-wedge", "a-vee"):
        assert check_decoration(s, decoration).passed


def test_complemented_extension_of_the_ends():
    domain = boolean_domain(2)
    ends = PMapTable((domain[0], domain[3]), (domain[0], domain[3]))
    s = extend_complemented(ends, 2)
    assert len(s.domain) == 4
    assert check_decoration(s, "c").passed
    assert projection_mask(s(domain[1])) == 0
    assert projection_mask(s(domain[2])) == 0b11


def test_fill_rejects_non_monotone_values():
    with pytest.raises(OplatError):
        coherent_fill({1: 1, 11: 0}, 4, 1, lambda e: 0)
