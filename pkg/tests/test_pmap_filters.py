import numpy as np
import pytest

from utils.algebra_core import MATRIX, AlgebraHandle, projection_from_basis, zero_projection
from utils.errors import FilterError, OplatError, SignatureTieError
from utils.pmap import boolean_domain
from utils.pmap_filters import (
    FiniteLattice,
    ProjectionFilter,
    boolean_lattice,
    filter_ops,
    principal_filter,
    random_signature,
    reference_signature,
    signature_from_filter,
    signature_probe,
    ultrafilters,
)

M2 = AlgebraHandle(MATRIX, 2)


def line(*v):
    return projection_from_basis(M2, np.array(v, dtype=float))


def test_reference_signature_splits_a_line_from_its_complement():
    sig = reference_signature([1, 0], [0, 1])
    e = line(1, 0)
    assert sig.is_positive(e)
    assert sig.is_negative(e.complement())
    assert sig.is_negative(zero_projection(M2))


def test_signature_ties_are_reported():
    sig = reference_signature([1, 0], [0, 1])
    with pytest.raises(SignatureTieError):
        sig.is_negative(line(1, 1))


def test_probe_on_a_family():
    sig = reference_signature([1, 0], [0, 1])
    probe = signature_probe(sig, family=[line(1, 0), line(0, 1)])
    assert probe.polar and probe.checked == 1


def test_probe_needs_a_source_of_pairs():
    with pytest.raises(OplatError):
        signature_probe(reference_signature([1, 0], [0, 1]))


def test_two_by_two_signatures_are_polar():
    rng = np.random.default_rng(3)
    probe = signature_probe(random_signature(2, rng), rng=rng, samples=300)
    assert probe.polar
    assert probe.checked == 300


def test_three_by_three_signatures_are_not():
    rng = np.random.default_rng(3)
    probe = signature_probe(random_signature(3, rng), rng=rng, samples=2000)
    assert not probe.polar
    e, f = probe.witness
    assert np.max(np.abs(e.matrix @ f.matrix)) <= 1e-9


def test_lattice_must_be_complemented():
    with pytest.raises(OplatError):
        FiniteLattice(2, (0, 1, 3))


def test_atoms():
    assert boolean_lattice(2).atoms() == [1, 2]
    assert FiniteLattice(3, (0, 0b011, 0b100, 0b111)).atoms() == [0b011, 0b100]


def test_filter_axioms():
    lattice = boolean_lattice(2)
    with pytest.raises(FilterError):
        ProjectionFilter(lattice, frozenset({1}))
    with pytest.raises(FilterError):
        ProjectionFilter(lattice, frozenset({1, 2, 3}))
    with pytest.raises(FilterError):
        ProjectionFilter(lattice, frozenset({1, 0b11, 0b100}))


def test_principal_filters():
    lattice = boolean_lattice(2)
    atom = principal_filter(lattice, 1)
    assert atom.members == frozenset({1, 3})
    assert atom.is_ultra and atom.is_ideal
    assert not principal_filter(lattice, 3).is_ultra


def test_ultrafilters_sit_above_atoms():
    found = ultrafilters(boolean_lattice(3))
    assert sorted(min(f.members) for f in found) == [1, 2, 4]


def test_quotients():
    lattice = boolean_lattice(3)
    trivial = filter_ops(lattice, principal_filter(lattice, lattice.top))
    assert trivial.size == 8
    ultra = filter_ops(lattice, principal_filter(lattice, 1))
    assert ultra.size == 2
    assert ultra.meet_compatible and ultra.complement_compatible and ultra.is_ultra
    # classes are decided by the first coordinate
    assert ultra.class_of[0b001] == ultra.class_of[0b111]
    assert ultra.meet(ultra.class_of[0b011], ultra.class_of[0b100]) == ultra.class_of[0]


def test_quotient_needs_the_filter_lattice():
    with pytest.raises(FilterError):
        filter_ops(boolean_lattice(2), principal_filter(boolean_lattice(3), 7))


def test_ultrafilter_signature():
    filt = principal_filter(boolean_lattice(2), 1)
    sig = signature_from_filter(filt)
    domain = boolean_domain(2)
    assert sig.is_positive(domain[1]) and sig.is_negative(domain[2])
    with pytest.raises(FilterError):
        signature_from_filter(principal_filter(boolean_lattice(2), 3))


def test_ultrafilter_signatures_are_polar():
    domain = boolean_domain(3)
    for filt in ultrafilters(boolean_lattice(3)):
        sig = signature_from_filter(filt)
        assert sig.dim == 3
        result = signature_probe(sig, family=domain)
        # six pairs of disjoint nonempty coordinate sets
        assert result.polar and result.checked == 6
