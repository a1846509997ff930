"""Signatures on projection lattices and projection filters on finite Boolean lattices."""
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from utils.algebra_core import MATRIX, AlgebraHandle, ProjectionElement, projection_from_basis, random_unitary
from utils.errors import FilterError, OplatError, SignatureTieError

logger = logging.getLogger(__name__)

SIGNATURE_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class Signature:
    """Reference-state classifier splitting projections into a lower and an upper class.

    A projection e is upper when the first nonzero entry of
    (<e psi, psi> - 1/2, <e phi, phi> - 1/2, rank(e) - n/2) is positive.
    Complements swap classes because the key changes sign.
    """
    psi: np.ndarray
    phi: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.psi)

    def key(self, e: ProjectionElement) -> Tuple[float, float, float]:
        m = e.matrix
        return (
            float(np.real(np.vdot(self.psi, m @ self.psi))) - 0.5,
            float(np.real(np.vdot(self.phi, m @ self.phi))) - 0.5,
            e.rank - self.dim / 2,
        )

    def is_negative(self, e: ProjectionElement) -> bool:
        for component in self.key(e):
            if component > SIGNATURE_TOLERANCE:
                return False
            if component < -SIGNATURE_TOLERANCE:
                return True
        raise SignatureTieError("Signature cannot decide this projection")

    def is_positive(self, e: ProjectionElement) -> bool:
        return not self.is_negative(e)


def _unit(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    return v / np.linalg.norm(v)


def reference_signature(psi, phi) -> Signature:
    return Signature(_unit(psi), _unit(phi))


def random_signature(dim: int, rng: np.random.Generator) -> Signature:
    u = random_unitary(dim, rng)
    return Signature(u[:, 0], _unit(rng.standard_normal(dim) + 1j * rng.standard_normal(dim)))


@dataclass(frozen=True, eq=False)
class PolarProbe:
    polar: bool
    checked: int
    witness: Optional[Tuple[ProjectionElement, ProjectionElement]]
    ties: int = 0


def _violates(sig, e: ProjectionElement, f: ProjectionElement) -> bool:
    total = projection_from_basis(e.algebra, np.column_stack([e.range_basis, f.range_basis]))
    return sig.is_negative(e) and sig.is_negative(f) and sig.is_positive(total)


def signature_probe(
    sig,
    family: Optional[Sequence[ProjectionElement]] = None,
    rng: Optional[np.random.Generator] = None,
    samples: int = 10_000,
) -> PolarProbe:
    """Look for orthogonal e, f in the lower class with e + f in the upper class.

    With a family every orthogonal pair in it is checked; otherwise random
    orthogonal pairs of nonzero projections are drawn.
    """
    checked, ties = 0, 0
    if family is not None:
        pairs = (
            (e, f)
            for i, e in enumerate(family)
            for f in family[i + 1:]
            if not e.is_zero() and not f.is_zero() and np.max(np.abs(e.matrix @ f.matrix)) <= 1e-9
        )
    else:
        if rng is None:
            raise OplatError("signature_probe needs a family or a random generator")
        pairs = (_random_orthogonal_pair(sig.dim, rng) for _ in range(samples))

    for e, f in pairs:
        checked += 1
        try:
            if _violates(sig, e, f):
                logger.info("polarity violation after %d pairs", checked)
                return PolarProbe(False, checked, (e, f), ties)
        except SignatureTieError:
            ties += 1
    return PolarProbe(True, checked, None, ties)


def _random_orthogonal_pair(dim: int, rng: np.random.Generator) -> Tuple[ProjectionElement, ProjectionElement]:
    algebra = AlgebraHandle(MATRIX, dim)
    u = random_unitary(dim, rng)
    first = int(rng.integers(1, dim))
    second = int(rng.integers(1, dim - first + 1))
    return (
        projection_from_basis(algebra, u[:, :first]),
        projection_from_basis(algebra, u[:, first:first + second]),
    )


@dataclass(frozen=True)
class FiniteLattice:
    """A complemented sublattice of the Boolean lattice 2^m, elements as bitmasks"""
    m: int
    elements: Tuple[int, ...]

    def __post_init__(self):
        members = set(self.elements)
        if 0 not in members or self.top not in members:
            raise OplatError("Lattice must contain 0 and 1")
        for a in self.elements:
            if self.complement(a) not in members:
                raise OplatError("Lattice must be closed under complements")
            for b in self.elements:
                if a & b not in members or a | b not in members:
                    raise OplatError("Lattice must be closed under meets and joins")

    @property
    def top(self) -> int:
        return (1 << self.m) - 1

    def complement(self, a: int) -> int:
        return self.top & ~a

    def atoms(self) -> List[int]:
        nonzero = [a for a in self.elements if a]
        return [a for a in nonzero if not any(b != a and b & a == b for b in nonzero)]


def boolean_lattice(m: int) -> FiniteLattice:
    return FiniteLattice(m, tuple(range(2 ** m)))


@dataclass(frozen=True)
class ProjectionFilter:
    lattice: FiniteLattice
    members: FrozenSet[int]

    def __post_init__(self):
        lat, members = self.lattice, self.members
        if lat.top not in members:
            raise FilterError("A filter contains 1")
        for e in members:
            if e not in lat.elements:
                raise FilterError("Filter member outside the lattice")
            if lat.complement(e) in members:
                raise FilterError("A filter cannot contain a projection and its complement")
            for f in lat.elements:
                if e & f == e and f not in members:
                    raise FilterError("A filter is closed upwards")
            for f in members:
                if e & f not in members:
                    raise FilterError("A filter is closed under meets")

    @property
    def is_ultra(self) -> bool:
        return all(p in self.members or self.lattice.complement(p) in self.members for p in self.lattice.elements)

    @property
    def is_ideal(self) -> bool:
        """f in F implies (f∧p) ∨ (f∧p^c) in F"""
        lat = self.lattice
        return all((f & p) | (f & lat.complement(p)) in self.members for f in self.members for p in lat.elements)


def principal_filter(lattice: FiniteLattice, a: int) -> ProjectionFilter:
    return ProjectionFilter(lattice, frozenset(p for p in lattice.elements if p & a == a))


def ultrafilters(lattice: FiniteLattice) -> List[ProjectionFilter]:
    """On a finite lattice these are the principal filters above atoms"""
    found = [principal_filter(lattice, a) for a in lattice.atoms()]
    for f in found:
        if not f.is_ultra:
            raise FilterError("Principal filter above an atom is not ultra")
    return found


@dataclass(frozen=True)
class FilterQuotient:
    classes: List[FrozenSet[int]]
    class_of: Dict[int, int]
    meet_compatible: bool
    complement_compatible: bool
    is_ideal: bool
    is_ultra: bool

    @property
    def size(self) -> int:
        return len(self.classes)

    def meet(self, i: int, j: int) -> int:
        a, b = min(self.classes[i]), min(self.classes[j])
        return self.class_of[a & b]


def _find(parent: Dict[int, int], a: int) -> int:
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


def filter_ops(lattice: FiniteLattice, filt: ProjectionFilter) -> FilterQuotient:
    """Quotient by the equivalence generated by p ~ p∨f^c and p ~ p∧f for f in the filter"""
    if filt.lattice != lattice:
        raise FilterError("Filter belongs to another lattice")
    parent = {p: p for p in lattice.elements}
    for p in lattice.elements:
        for f in filt.members:
            for q in (p | lattice.complement(f), p & f):
                ra, rb = _find(parent, p), _find(parent, q)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)

    roots = sorted({_find(parent, p) for p in lattice.elements})
    index = {r: i for i, r in enumerate(roots)}
    class_of = {p: index[_find(parent, p)] for p in lattice.elements}
    classes = [frozenset(p for p in lattice.elements if class_of[p] == i) for i in range(len(roots))]

    meet_ok, complement_ok = True, True
    for cls in classes:
        for p in cls:
            for p2 in cls:
                if class_of[lattice.complement(p)] != class_of[lattice.complement(p2)]:
                    complement_ok = False
                for q in lattice.elements:
                    if class_of[p & q] != class_of[p2 & q]:
                        meet_ok = False
    logger.debug("filter quotient has %d classes", len(classes))
    return FilterQuotient(classes, class_of, meet_ok, complement_ok, filt.is_ideal, filt.is_ultra)


@dataclass(frozen=True)
class FilterSignature:
    """Signature whose upper class is an ultrafilter, on diagonal projections"""
    filt: ProjectionFilter

    @property
    def dim(self) -> int:
        return self.filt.lattice.m

    def _mask(self, e: ProjectionElement) -> int:
        bits = np.real(np.diag(e.matrix)) >= 0.5
        return sum(1 << i for i, bit in enumerate(bits) if bit)

    def is_negative(self, e: ProjectionElement) -> bool:
        return self._mask(e) not in self.filt.members

    def is_positive(self, e: ProjectionElement) -> bool:
        return not self.is_negative(e)


def signature_from_filter(filt: ProjectionFilter) -> FilterSignature:
    if not filt.is_ultra:
        raise FilterError("Only ultrafilters define signatures")
    return FilterSignature(filt)
