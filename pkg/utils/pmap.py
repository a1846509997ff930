"""Projection maps: tables, their extension to positive elements, decorations and cross sections."""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from utils.algebra_core import (
    COMMUTATIVE,
    MATRIX,
    AlgebraHandle,
    HermitianElement,
    ProjectionElement,
    chain_decomposition,
    min_eigenvalue,
    projection_from_matrix,
)
from utils.errors import DomainError, OplatError
from utils.projection_lattice import commutes, is_below, predicates, same_projection, vee, wedge_exact

logger = logging.getLogger(__name__)

DECORATIONS = ("o", "co", "c", "a", "a-wedge", "a-vee", "ax", "x", "xx")
ALIASES = {"a∧": "a-wedge", "a∨": "a-vee"}

EXHAUSTIVE = "exhaustive"
SAMPLED = "sampled"


def normalize_decoration(name: str) -> str:
    name = ALIASES.get(name.strip(), name.strip())
    if name not in DECORATIONS:
        raise OplatError(f"Unknown decoration: {name}")
    return name


def _mask_key(p: ProjectionElement) -> Tuple[bool, ...]:
    return tuple(bool(v) for v in np.real(np.diag(p.matrix)) >= 0.5)


@dataclass(frozen=True, eq=False)
class PMapTable:
    """A monotone projection map s given on a complement-closed family.

    rule, when present, supplies values for projections outside the stored
    family; decorations lists the properties the table claims.
    """
    domain: Tuple[ProjectionElement, ...]
    values: Tuple[ProjectionElement, ...]
    rule: Optional[Callable[[ProjectionElement], ProjectionElement]] = None
    decorations: FrozenSet[str] = frozenset()
    _index: Dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        if len(self.domain) != len(self.values) or not self.domain:
            raise OplatError("PMapTable needs one value per domain projection")
        if self.domain[0].algebra.is_commutative:
            self._index.update({_mask_key(p): i for i, p in enumerate(self.domain)})
        for p, v in zip(self.domain, self.values):
            if p.is_zero() and not v.is_zero():
                raise OplatError("PMapTable must send 0 to 0")
        if self.rule is None:
            for p in self.domain:
                self.index_of(p.complement())
        for i, j in self.comparable_pairs():
            if not is_below(self.values[i], self.values[j]):
                raise OplatError(f"PMapTable is not monotone on domain entries {i} <= {j}")

    @property
    def algebra(self) -> AlgebraHandle:
        return self.domain[0].algebra

    @property
    def codomain(self) -> AlgebraHandle:
        return self.values[0].algebra

    @property
    def unit_image(self) -> ProjectionElement:
        return self(projection_from_matrix(self.algebra, np.eye(self.algebra.size)))

    def comparable_pairs(self) -> List[Tuple[int, int]]:
        return [
            (i, j)
            for i, p in enumerate(self.domain)
            for j, q in enumerate(self.domain)
            if i != j and is_below(p, q)
        ]

    def index_of(self, p: ProjectionElement) -> int:
        if self.algebra.is_commutative:
            idx = self._index.get(_mask_key(p))
            if idx is not None:
                return idx
        else:
            for i, q in enumerate(self.domain):
                if same_projection(p, q):
                    return i
        raise DomainError(f"Projection of rank {p.rank} is not in the table domain")

    def __call__(self, p: ProjectionElement) -> ProjectionElement:
        try:
            return self.values[self.index_of(p)]
        except DomainError:
            if self.rule is None:
                raise
            return self.rule(p)


def boolean_domain(m: int, kind: str = COMMUTATIVE) -> List[ProjectionElement]:
    """The 2^m diagonal projections, ordered by bitmask"""
    algebra = AlgebraHandle(kind, m)
    return [
        projection_from_matrix(algebra, np.diag([(mask >> i) & 1 for i in range(m)]).astype(float))
        for mask in range(2 ** m)
    ]


def projection_mask(p: ProjectionElement) -> int:
    return sum(1 << i for i, bit in enumerate(_mask_key(p)) if bit)


def identity_table(domain: Sequence[ProjectionElement]) -> PMapTable:
    return PMapTable(tuple(domain), tuple(domain), decorations=frozenset(DECORATIONS))


def pmap_from_function(
    domain: Sequence[ProjectionElement],
    fn: Callable[[ProjectionElement], ProjectionElement],
    keep_rule: bool = False,
    decorations: Sequence[str] = (),
) -> PMapTable:
    return PMapTable(
        tuple(domain),
        tuple(fn(p) for p in domain),
        rule=fn if keep_rule else None,
        decorations=frozenset(normalize_decoration(d) for d in decorations),
    )


def dominant_diagonal_map(n: int = 2) -> PMapTable:
    """s(p) on M_n: the diagonal projection onto the coordinates where diag(p) is largest.

    Defined for rank-1 p (ties go to the lowest index); 0 and 1 are fixed.
    The codomain is the commutative algebra of size n.
    """
    source = AlgebraHandle(MATRIX, n)
    target = AlgebraHandle(COMMUTATIVE, n)

    def rule(p: ProjectionElement) -> ProjectionElement:
        if p.is_zero():
            return projection_from_matrix(target, np.zeros((n, n)))
        if p.is_identity():
            return projection_from_matrix(target, np.eye(n))
        if p.rank != 1:
            raise DomainError("dominant_diagonal_map is defined on rank-1 projections")
        weights = np.real(np.diag(p.matrix))
        mask = np.zeros(n)
        mask[int(np.argmax(weights))] = 1.0
        return projection_from_matrix(target, np.diag(mask))

    ends = (projection_from_matrix(source, np.zeros((n, n))), projection_from_matrix(source, np.eye(n)))
    return PMapTable(ends, tuple(rule(p) for p in ends), rule=rule, decorations=frozenset({"o"}))


def extend_pmap(s: PMapTable, x: HermitianElement) -> HermitianElement:
    """sigma(x) = sum alpha_k s(p_k) over the chain decomposition of x >= 0"""
    out = s.codomain.zero()
    for alpha, p in chain_decomposition(x):
        out = out + s(p).base * alpha
    return out


def homogenized(s: PMapTable, x: HermitianElement) -> HermitianElement:
    """sigma(x + t) - t s(1), with t making x + t positive"""
    shift = max(0.0, -min_eigenvalue(x))
    if shift == 0.0:
        return extend_pmap(s, x)
    shifted = extend_pmap(s, x + x.algebra.identity() * shift)
    return shifted - s.unit_image.base * shift


@dataclass(frozen=True)
class DecorationReport:
    decoration: str
    passed: bool
    checked: int
    failures: List[Dict[str, np.ndarray]]
    certainty: str
    derived_a: Optional["DecorationReport"] = None


def _failure(**projections) -> Dict[str, np.ndarray]:
    return {k: v.matrix for k, v in projections.items()}


def _in_domain(s: PMapTable, p: ProjectionElement) -> bool:
    try:
        s(p)
        return True
    except DomainError:
        return False


def _check_pair(
    s: PMapTable,
    decoration: str,
    e: ProjectionElement,
    f: ProjectionElement,
    negative: Callable[[ProjectionElement], bool],
    precedes: Callable[[ProjectionElement, ProjectionElement], bool],
) -> Optional[Dict[str, np.ndarray]]:
    """None when the pair passes or is outside the scope of the decoration"""
    flags = predicates(e, f)
    se, sf = s(e), s(f)
    if decoration == "o":
        if flags.orthogonal and not predicates(se, sf).orthogonal:
            return _failure(e=e, f=f, se=se, sf=sf)
    elif decoration == "co":
        if flags.coorthogonal and not predicates(se, sf).coorthogonal:
            return _failure(e=e, f=f, se=se, sf=sf)
    elif decoration == "c":
        for p in (e, f):
            sp, spc = s(p), s(p.complement())
            if not same_projection(spc, sp.complement()):
                return _failure(p=p, sp=sp, spc=spc)
    elif decoration == "a":
        if flags.commuting and not commutes(se, sf):
            return _failure(e=e, f=f, se=se, sf=sf)
    elif decoration in ("a-wedge", "a-vee"):
        if not flags.commuting:
            return None
        op = wedge_exact if decoration == "a-wedge" else vee
        joint = op(e, f)
        if _in_domain(s, joint) and not same_projection(s(joint), op(se, sf)):
            return _failure(e=e, f=f, joint=joint, image=s(joint))
    elif decoration in ("x", "ax"):
        if not (negative(e) and negative(f) and precedes(e, f)):
            return None
        if decoration == "ax" and not flags.commuting:
            return None
        fc = f.complement()
        joint = vee(e, fc)
        if _in_domain(s, joint) and not same_projection(s(joint), vee(se, s(fc))):
            return _failure(e=e, f=f, joint=joint, image=s(joint))
    elif decoration == "xx":
        joint = vee(e, f)
        if negative(e) and negative(f) and _in_domain(s, joint) and negative(joint):
            if not same_projection(vee(se, sf), s(joint)):
                return _failure(e=e, f=f, joint=joint, image=s(joint))
    return None


def check_decoration(
    s: PMapTable,
    decoration: str,
    test_set: Optional[Sequence[Tuple[ProjectionElement, ProjectionElement]]] = None,
    signature=None,
    order: Optional[Sequence[Tuple[int, int]]] = None,
) -> DecorationReport:
    """Check one decoration on the given pairs, or on every pair of the stored domain.

    signature splits projections into the lower and upper classes used by
    x, ax and xx (without one every projection counts as lower). order is the
    construction order for x and ax as (i, j) domain index pairs meaning
    domain[i] precedes domain[j]; without it every pair is ordered.
    """
    decoration = normalize_decoration(decoration)
    exhaustive = test_set is None
    if exhaustive:
        test_set = [(e, f) for e in s.domain for f in s.domain]

    negative = (lambda p: True) if signature is None else signature.is_negative
    if order is None:
        precedes = lambda e, f: True
    else:
        ordered = {(int(i), int(j)) for i, j in order}
        precedes = lambda e, f: (s.index_of(e), s.index_of(f)) in ordered

    failures = []
    for e, f in test_set:
        failure = _check_pair(s, decoration, e, f, negative, precedes)
        if failure is not None:
            failures.append(failure)

    derived = None
    if decoration in ("ax", "xx") and not failures:
        derived = check_decoration(s, "a", None if exhaustive else test_set)
    if failures:
        logger.info("decoration %s failed on %d of %d pairs", decoration, len(failures), len(test_set))
    return DecorationReport(
        decoration,
        not failures and (derived is None or derived.passed),
        len(test_set),
        failures,
        EXHAUSTIVE if exhaustive else SAMPLED,
        derived,
    )


O_TYPE = "o"
CONCAVE = "concave"
CONVEX = "convex"

_PREREQUISITE = {O_TYPE: "o", CONCAVE: "a-wedge", CONVEX: "a-vee"}


@dataclass(frozen=True)
class SchwarzReport:
    kind: str
    passed: bool
    margins: List[float]
    prerequisite: DecorationReport

    @property
    def worst(self) -> float:
        return min(self.margins, default=0.0)


def _normal_margin(s: PMapTable, a: HermitianElement, b: HermitianElement) -> float:
    """least eigenvalue of sigma(a^2 + b^2) - (sigma(a) + i sigma(b))(sigma(a) - i sigma(b))"""
    lhs = extend_pmap(s, a.square() + b.square()).matrix
    sa, sb = homogenized(s, a).matrix, homogenized(s, b).matrix
    z = sa + 1j * sb
    diff = lhs - z @ z.conj().T
    return float(scipy.linalg.eigvalsh((diff + diff.conj().T) / 2)[0])


def schwarz_suite(
    s: PMapTable,
    instances: Sequence[Union[HermitianElement, Tuple[HermitianElement, HermitianElement]]],
    kind: str = O_TYPE,
    tol: float = 1e-9,
) -> SchwarzReport:
    """Schwarz inequalities for the extension of s.

    o type: sigma(x^2) >= sigma(x)^2 for self-adjoint x. concave type:
    sigma(x x*) >= sigma(x) sigma(x)* for normal x = a + ib; convex type: the
    reverse. Normal instances are (a, b) pairs of commuting elements.
    """
    if kind not in _PREREQUISITE:
        raise OplatError(f"Unknown Schwarz kind: {kind}")
    prerequisite = check_decoration(s, _PREREQUISITE[kind])
    if not prerequisite.passed:
        logger.warning("Schwarz suite skipped: decoration %s does not hold", prerequisite.decoration)
        return SchwarzReport(kind, False, [], prerequisite)

    margins = []
    for item in instances:
        if kind == O_TYPE:
            diff = homogenized(s, item.square()) - homogenized(s, item).square()
            margins.append(min_eigenvalue(diff))
        else:
            a, b = item
            margin = _normal_margin(s, a, b)
            margins.append(margin if kind == CONCAVE else -margin)
    return SchwarzReport(kind, all(m >= -tol for m in margins), margins, prerequisite)


@dataclass(frozen=True)
class SurjectionSpec:
    """q: C(X) -> C(Y), q(f)(y) = f(first point of class y).

    Classes are disjoint subsets of X, one per point of Y; points of X in no
    class are left for the lift to place.
    """
    x_size: int
    classes: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        seen = set()
        for cls in self.classes:
            if not cls:
                raise OplatError("Empty class: q is not surjective")
            for x in cls:
                if not 0 <= x < self.x_size or x in seen:
                    raise OplatError("Classes must be disjoint subsets of X: q is not surjective")
                seen.add(x)

    @property
    def y_size(self) -> int:
        return len(self.classes)

    @property
    def free_points(self) -> List[int]:
        used = {x for cls in self.classes for x in cls}
        return [x for x in range(self.x_size) if x not in used]

    def apply(self, mask: int) -> int:
        """q on projections, as bitmasks"""
        return sum(1 << y for y, cls in enumerate(self.classes) if (mask >> cls[0]) & 1)


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def coherent_fill(
    known: Dict[int, int], y_size: int, x_size: int, lift: Callable[[int], int]
) -> Dict[int, int]:
    """Extend a complemented monotone map between Boolean lattices, given as bitmasks.

    Projections are taken in order of rank together with their complements.
    Each value is (join of values below, joined with the lift) met with the
    meet of values above; the complement gets the complementary value.
    """
    full_y, full_x = (1 << y_size) - 1, (1 << x_size) - 1
    values = dict(known)
    values.setdefault(0, 0)
    values.setdefault(full_y, full_x)
    for e in sorted(range(full_y + 1), key=lambda m: (_popcount(m), m)):
        if e in values:
            continue
        if (full_y & ~e) in values:
            values[e] = full_x & ~values[full_y & ~e]
            continue
        lower, upper = 0, full_x
        for g, v in values.items():
            if g & e == g:
                lower |= v
            if g & e == e:
                upper &= v
        if lower & ~upper:
            raise OplatError(f"Known values are not monotone around {e:b}")
        values[e] = (lower | lift(e)) & upper
        values[full_y & ~e] = full_x & ~values[e]
    return values


def _table_from_masks(values: Dict[int, int], y_size: int, x_size: int, decorations) -> PMapTable:
    domain = boolean_domain(y_size)
    target = boolean_domain(x_size)
    return PMapTable(
        tuple(domain),
        tuple(target[values[projection_mask(p)]] for p in domain),
        decorations=frozenset(decorations),
    )


def coherent_lift(spec: SurjectionSpec) -> PMapTable:
    """A cross section s of q on projections: q(s(e)) = e, monotone and complemented.

    Points of Y lift to their classes; free points of X follow the first point
    of Y. The resulting map preserves meets and joins.
    """
    free = sum(1 << x for x in spec.free_points)

    def lift(e: int) -> int:
        out = free if e & 1 else 0
        for y, cls in enumerate(spec.classes):
            if (e >> y) & 1:
                out |= sum(1 << x for x in cls)
        return out

    values = coherent_fill({}, spec.y_size, spec.x_size, lift)
    for e, v in values.items():
        if spec.apply(v) != e:
            raise OplatError(f"Lift of {e:b} does not map back under q")
    logger.debug("coherent lift built on %d projections", len(values))
    return _table_from_masks(values, spec.y_size, spec.x_size, {"c", "a", "a-wedge", "a-vee"})


def extend_complemented(s: PMapTable, m: int) -> PMapTable:
    """Extend a complemented table on a sublattice of the Boolean lattice 2^m to all of it"""
    if not s.algebra.is_commutative or s.algebra.size != m:
        raise OplatError("extend_complemented needs a table on diagonal projections of size m")
    known = {projection_mask(p): projection_mask(v) for p, v in zip(s.domain, s.values)}
    values = coherent_fill(known, m, s.codomain.size, lambda e: 0)
    return _table_from_masks(values, m, s.codomain.size, {"c"})
