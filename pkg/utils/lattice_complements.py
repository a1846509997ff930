"""Upper and lower complements, canonical lifts and restriction maps.

Everything here is computed for the commutative kind, where the upper
complement of a lattice element is a polyhedron; its generators are the
polyhedron's vertices.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError

from utils.algebra_core import AlgebraHandle, COMMUTATIVE, HermitianElement
from utils.errors import OplatError
from utils.lattice_completion import (
    ANTIBASIC,
    BASIC,
    BasicElement,
    L1Image,
    LatticeElement,
    _prune,
    as_lattice,
    pi,
)

logger = logging.getLogger(__name__)


COORDINATES = "coordinates"
BLOCKS = "blocks"


@dataclass(frozen=True)
class Complements:
    upper: BasicElement        # P^c
    lower: BasicElement        # P_c (antibasic)
    lower_upper: BasicElement  # P_cc, upper complement of P_c
    upper_lower: BasicElement  # P^cc (antibasic), lower complement of P^c


def _upper_hull_halfspaces(hull_rows: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(W, h) with conv(hull_rows) + positive cone = {y : W y >= h}, every row of W nonnegative"""
    m = hull_rows.shape[1]
    if m == 1:
        return np.ones((1, 1)), np.array([hull_rows.min()])
    reach = float(np.ptp(hull_rows)) + 1.0
    raised = [row + reach * np.eye(m)[k] for row in hull_rows for k in range(m)]
    try:
        hull = ConvexHull(np.vstack([hull_rows, np.array(raised)]))
    except QhullError as e:
        raise OplatError("Upper hull of the generators failed") from e
    # qhull reports outward normals: normal . y + offset <= 0 inside
    inward = -hull.equations[:, :m]
    keep = np.all(inward >= -1e-12, axis=1)
    w = np.clip(inward[keep], 0.0, None)
    h = hull.equations[keep, m]
    rows = np.unique(np.round(np.column_stack([w, h]), 12), axis=0)
    return rows[:, :m], rows[:, m]


def _polyhedron_vertices(hull_rows: np.ndarray, offsets: np.ndarray, lift: np.ndarray) -> List[np.ndarray]:
    """Vertices of {x : lift x + d >= conv(hull_rows) for all d in offsets}"""
    m, q = lift.shape
    w, h = _upper_hull_halfspaces(hull_rows)
    normals = np.vstack([w @ lift for _ in offsets])
    rhs = np.concatenate([h - w @ d for d in offsets])

    # a vertex coordinate above this bound would be slack for every offset
    row_bound = hull_rows.max(axis=0) - offsets.min(axis=0)
    top = np.array([row_bound[lift[:, b] > 0].max() for b in range(q)])
    if q == 1:
        active = normals[:, 0] > 1e-12
        return [np.array([float(np.max(rhs[active] / normals[active, 0]))])]

    box = np.column_stack([np.eye(q), -(top + 1.0)])
    halfspaces = np.vstack([np.column_stack([-normals, rhs]), box])
    try:
        meet = HalfspaceIntersection(halfspaces, top + 0.5)
    except QhullError as e:
        raise OplatError("Complement polyhedron could not be enumerated") from e
    scale = max(1.0, float(np.max(np.abs(top))))
    points = [pt for pt in meet.intersections if np.all(pt < top + 1.0 - 1e-7 * scale)]
    logger.debug("polyhedron: %d halfspaces, %d vertices", len(halfspaces), len(points))
    return points


def _require_commutative(algebra: AlgebraHandle, what: str) -> None:
    if not algebra.is_commutative:
        raise OplatError(f"{what} is only computed for commutative algebras")


def _upper_generators(p: LatticeElement) -> List[HermitianElement]:
    algebra = p.algebra
    c_rows = p.positive.stack()
    d_rows = p.negative.stack()
    points = _polyhedron_vertices(c_rows, d_rows, np.eye(algebra.size))
    return list(_prune(algebra, [HermitianElement(algebra, pt) for pt in points]))


def _singleton_complements(p: LatticeElement) -> Optional[Complements]:
    if len(p.positive.generators) != 1 or len(p.negative.generators) != 1:
        return None
    x = p.positive.generators[0] - p.negative.generators[0]
    algebra = p.algebra
    return Complements(
        BasicElement(algebra, (x,), BASIC),
        BasicElement(algebra, (x,), ANTIBASIC),
        BasicElement(algebra, (x,), BASIC),
        BasicElement(algebra, (x,), ANTIBASIC),
    )


def complements(p) -> Complements:
    """(P^c, P_c, P_cc, P^cc) with P_c <= P^cc <= P_cc <= P^c"""
    p = as_lattice(p)
    single = _singleton_complements(p)
    if single is not None:
        return single
    _require_commutative(p.algebra, "The complement of a non-singleton element")
    algebra = p.algebra

    upper = BasicElement(algebra, tuple(_upper_generators(p)), BASIC)
    lower = BasicElement(algebra, tuple(-g for g in _upper_generators(-p)), ANTIBASIC)

    # above every generator of an antibasic element: one minimal element
    lower_upper = BasicElement(algebra, (HermitianElement(algebra, lower.stack().max(axis=0)),), BASIC)
    upper_lower = BasicElement(algebra, (HermitianElement(algebra, upper.stack().min(axis=0)),), ANTIBASIC)
    return Complements(upper, lower, lower_upper, upper_lower)


def cv_lift(v: L1Image) -> LatticeElement:
    """Convex lift: the basic singleton over v"""
    _require_commutative(v.algebra, "cv_lift")
    return as_lattice(BasicElement(v.algebra, (HermitianElement(v.algebra, np.asarray(v.values, float)),), BASIC))


def cc_lift(v: L1Image) -> LatticeElement:
    """Concave lift: the antibasic singleton over v"""
    _require_commutative(v.algebra, "cc_lift")
    return as_lattice(BasicElement(v.algebra, (HermitianElement(v.algebra, np.asarray(v.values, float)),), ANTIBASIC))


@dataclass(frozen=True)
class Subsystem:
    """A unital commutative subsystem.

    kind "coordinates": parts is the kept index list; restriction drops the
    other coordinates. kind "blocks": parts partitions the spectrum and the
    subsystem is the algebra of block-constant functions.
    """
    kind: str
    parts: Tuple

    def __post_init__(self):
        if self.kind not in (COORDINATES, BLOCKS):
            raise OplatError(f"Unknown subsystem kind: {self.kind}")
        if not self.parts:
            raise OplatError("Empty subsystem")

    def validate(self, algebra: AlgebraHandle) -> None:
        _require_commutative(algebra, "Restriction")
        if self.kind == COORDINATES:
            idx = list(self.parts)
            if len(set(idx)) != len(idx) or any(not 0 <= i < algebra.size for i in idx):
                raise OplatError("Malformed coordinate subset")
        else:
            flat = sorted(i for block in self.parts for i in block)
            if flat != list(range(algebra.size)) or any(len(b) == 0 for b in self.parts):
                raise OplatError("Blocks must partition the spectrum")

    def small_algebra(self, algebra: AlgebraHandle) -> AlgebraHandle:
        return AlgebraHandle(COMMUTATIVE, len(self.parts), algebra.tolerance)

    def lift_matrix(self, algebra: AlgebraHandle) -> np.ndarray:
        """The unital inclusion as a matrix from the subsystem into the algebra"""
        q = len(self.parts)
        lift = np.zeros((algebra.size, q))
        if self.kind == BLOCKS:
            for b, block in enumerate(self.parts):
                lift[list(block), b] = 1.0
        else:
            kept = list(self.parts)
            for b, i in enumerate(kept):
                lift[i, b] = 1.0
            # dropped coordinates copy the first kept one
            for i in range(algebra.size):
                if i not in kept:
                    lift[i, 0] = 1.0
        return lift


def include(sub: Subsystem, algebra: AlgebraHandle, a: LatticeElement) -> LatticeElement:
    """Image of a subsystem element under the inclusion"""
    lift = sub.lift_matrix(algebra)

    def lifted(c: BasicElement) -> BasicElement:
        return BasicElement(algebra, tuple(HermitianElement(algebra, lift @ g.entries) for g in c.generators), c.polarity)

    return LatticeElement(lifted(a.positive), lifted(a.negative))


def _drop(sub: Subsystem, small: AlgebraHandle, c: BasicElement) -> BasicElement:
    idx = list(sub.parts)
    return BasicElement(small, tuple(HermitianElement(small, g.entries[idx]) for g in c.generators), c.polarity)


def _restrict_basic_part(sub: Subsystem, algebra: AlgebraHandle, c: BasicElement) -> BasicElement:
    small = sub.small_algebra(algebra)
    if sub.kind == COORDINATES:
        return _drop(sub, small, c)
    points = _polyhedron_vertices(c.stack(), np.zeros((1, algebra.size)), sub.lift_matrix(algebra))
    return BasicElement(small, _prune(small, [HermitianElement(small, pt) for pt in points]), BASIC)


def _restrict_antibasic_part(sub: Subsystem, algebra: AlgebraHandle, c: BasicElement) -> BasicElement:
    small = sub.small_algebra(algebra)
    if sub.kind == COORDINATES:
        return _drop(sub, small, c)
    floor = c.stack().min(axis=0)
    values = np.array([floor[list(block)].min() for block in sub.parts])
    return BasicElement(small, (HermitianElement(small, values),), BASIC)


def restrict_basic(a, sub: Subsystem) -> LatticeElement:
    """Magnifying retraction: r(P - N) = r_basic(P) - r_antibasic(N)"""
    a = as_lattice(a)
    sub.validate(a.algebra)
    return LatticeElement(
        _restrict_basic_part(sub, a.algebra, a.positive),
        _restrict_antibasic_part(sub, a.algebra, a.negative),
    )


def restrict_antibasic(a, sub: Subsystem) -> LatticeElement:
    """Reducing retraction: r(P - N) = r_antibasic(P) - r_basic(N)"""
    a = as_lattice(a)
    sub.validate(a.algebra)
    return LatticeElement(
        _restrict_antibasic_part(sub, a.algebra, a.positive),
        _restrict_basic_part(sub, a.algebra, a.negative),
    )


def restricted_values(a, sub: Subsystem, basic_side: bool = True) -> np.ndarray:
    """pi of the restriction, convenient for pointwise comparisons"""
    restricted = restrict_basic(a, sub) if basic_side else restrict_antibasic(a, sub)
    return pi(restricted).values
