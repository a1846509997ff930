"""Meets, joins and commuting bounds in the projection lattice of a matrix algebra."""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Sequence, Tuple

import numpy as np
import scipy.linalg

from utils.algebra_core import (
    AlgebraHandle,
    ProjectionElement,
    check_same_algebra,
    projection_from_basis,
    projection_from_matrix,
)
from utils.errors import ConvergenceError, OplatError

logger = logging.getLogger(__name__)

MAX_ITER = 100_000
ITERATIVE_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class LatticePair:
    """The pair whose alternating products converge to p ∧ q"""
    p: ProjectionElement
    q: ProjectionElement

    def __post_init__(self):
        check_same_algebra(self.p.algebra, self.q.algebra)

    @property
    def dim(self) -> int:
        return self.p.algebra.size

    def meet(self) -> ProjectionElement:
        return wedge_exact(self.p, self.q)

    def iterated_meet(self, tol: float = ITERATIVE_TOLERANCE, max_iter: int = MAX_ITER) -> Tuple[ProjectionElement, int]:
        return wedge_iterative(self.p, self.q, tol, max_iter)

    def angles(self) -> np.ndarray:
        """Principal angles in radians, ascending"""
        return np.arccos(principal_angles(self.p, self.q))


def _intersection_threshold(n: int) -> float:
    return 1e3 * np.finfo(float).eps * n


def wedge_exact(p: ProjectionElement, q: ProjectionElement) -> ProjectionElement:
    """Projection onto range(p) ∩ range(q), the kernel of 2 - p - q"""
    check_same_algebra(p.algebra, q.algebra)
    n = p.algebra.size
    m = 2 * np.eye(n) - p.matrix - q.matrix
    _, sv, vh = scipy.linalg.svd(m)
    kernel = vh[sv <= _intersection_threshold(n)].conj().T
    return projection_from_basis(p.algebra, kernel)


def vee(p: ProjectionElement, q: ProjectionElement) -> ProjectionElement:
    return wedge_exact(p.complement(), q.complement()).complement()


def wedge_iterative(
    p: ProjectionElement, q: ProjectionElement, tol: float = ITERATIVE_TOLERANCE, max_iter: int = MAX_ITER
) -> Tuple[ProjectionElement, int]:
    """Limit of x_n = (pq)^n p, stopped once |x_n - x_(n+1)| <= tol and rounded to a projection"""
    check_same_algebra(p.algebra, q.algebra)
    pq = p.matrix @ q.matrix
    x = pq @ p.matrix
    gap = np.inf
    for n in range(1, max_iter + 1):
        nxt = pq @ x
        gap = float(np.linalg.norm(x - nxt, 2))
        if gap <= tol:
            return _round_limit(p.algebra, x, tol, gap), n
        x = nxt
    raise ConvergenceError(f"Alternating products did not settle in {max_iter} steps", x, gap)


def _round_limit(algebra: AlgebraHandle, x: np.ndarray, tol: float, gap: float) -> ProjectionElement:
    h = (x + x.conj().T) / 2
    vals = scipy.linalg.eigvalsh(h)
    guard = math.sqrt(tol)
    if np.any((vals > guard) & (vals < 1 - guard)):
        raise ConvergenceError("Limit spectrum has not separated into {0, 1}", x, gap)
    return projection_from_matrix(algebra, h)


def principal_angles(p: ProjectionElement, q: ProjectionElement) -> np.ndarray:
    """Cosines of the principal angles between the ranges, descending"""
    check_same_algebra(p.algebra, q.algebra)
    if p.is_zero() or q.is_zero():
        return np.zeros(0)
    s = scipy.linalg.svdvals(p.range_basis.conj().T @ q.range_basis)
    return np.clip(s, 0.0, 1.0)


def alternating_sequence(
    p: ProjectionElement, q: ProjectionElement, n: int
) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """The decreasing sequences (pq)^k p and (qp)^k q for k = 0..n"""
    pq, qp = p.matrix @ q.matrix, q.matrix @ p.matrix
    first, second = [p.matrix], [q.matrix]
    for _ in range(n):
        first.append(pq @ first[-1])
        second.append(qp @ second[-1])
    return first, second


class CommutingBounds(NamedTuple):
    lower: ProjectionElement
    upper: ProjectionElement


class MultiBounds(NamedTuple):
    lower: ProjectionElement
    upper: ProjectionElement
    lower_steps: int
    upper_steps: int


def _sum_orthogonal(a: ProjectionElement, b: ProjectionElement) -> ProjectionElement:
    return projection_from_matrix(a.algebra, a.matrix + b.matrix)


def lower_bound(e: ProjectionElement, f: ProjectionElement) -> ProjectionElement:
    """e_f = e∧f + e∧f^c, the largest projection below e commuting with f"""
    return _sum_orthogonal(wedge_exact(e, f), wedge_exact(e, f.complement()))


def upper_bound(e: ProjectionElement, f: ProjectionElement) -> ProjectionElement:
    """e^f = (e^c∧f + e^c∧f^c)^c"""
    return lower_bound(e.complement(), f).complement()


def commuting_bounds(e: ProjectionElement, f: ProjectionElement) -> CommutingBounds:
    return CommutingBounds(lower_bound(e, f), upper_bound(e, f))


def _stabilize(e: ProjectionElement, family: Sequence[ProjectionElement], step) -> Tuple[ProjectionElement, int]:
    # each strict change moves the rank, so at most n changes happen
    x, changes, unchanged, i = e, 0, 0, 0
    limit = e.algebra.size + 1
    while unchanged < len(family):
        nxt = step(x, family[i % len(family)])
        i += 1
        if nxt.rank == x.rank:
            unchanged += 1
        else:
            x, changes, unchanged = nxt, changes + 1, 1
            if changes > limit:
                raise ConvergenceError("Commuting bound iteration did not become stationary", x.matrix, None)
    return x, changes


def commuting_bounds_multi(e: ProjectionElement, family: Sequence[ProjectionElement]) -> MultiBounds:
    """(e_F, e^F): apply the single bounds cyclically over F until nothing changes"""
    if not family:
        return MultiBounds(e, e, 0, 0)
    for f in family:
        check_same_algebra(e.algebra, f.algebra)
    lower, down = _stabilize(e, family, lower_bound)
    upper, up = _stabilize(e, family, upper_bound)
    logger.debug("multiplet bounds: %d drops, %d raises", down, up)
    return MultiBounds(lower, upper, down, up)


def commutes(p: ProjectionElement, q: ProjectionElement, tol: float = 1e-9) -> bool:
    a, b = p.matrix, q.matrix
    return bool(np.max(np.abs(a @ b - b @ a)) <= tol)


def is_below(p: ProjectionElement, q: ProjectionElement, tol: float = 1e-9) -> bool:
    """p <= q iff qp = p"""
    return bool(np.max(np.abs(q.matrix @ p.matrix - p.matrix)) <= tol)


def same_projection(p: ProjectionElement, q: ProjectionElement, tol: float = 1e-8) -> bool:
    return p.rank == q.rank and p.close_to(q, tol)


@dataclass(frozen=True)
class PairFlags:
    orthogonal: bool
    coorthogonal: bool
    commuting: bool


def predicates(p: ProjectionElement, q: ProjectionElement) -> PairFlags:
    check_same_algebra(p.algebra, q.algebra)
    orthogonal = bool(np.max(np.abs(p.matrix @ q.matrix)) <= 1e-9)
    commuting = commutes(p, q)
    coorthogonal = commuting and vee(p, q).is_identity()
    return PairFlags(orthogonal, coorthogonal, commuting)


@dataclass(frozen=True, eq=False)
class LawReport:
    holds: bool
    gap: float
    witness: Dict[str, np.ndarray]


def _law_report(left: ProjectionElement, right: ProjectionElement, inputs: Dict[str, ProjectionElement]) -> LawReport:
    gap = float(np.max(np.abs(left.matrix - right.matrix)))
    holds = left.rank == right.rank and gap <= 1e-8
    witness = {} if holds else {**{k: v.matrix for k, v in inputs.items()}, "left": left.matrix, "right": right.matrix}
    return LawReport(holds, gap, witness)


def modularity_probe(e: ProjectionElement, f: ProjectionElement, g: ProjectionElement) -> LawReport:
    """(e∨f)∧g = e∨(f∧g) for e <= g"""
    if not is_below(e, g):
        raise OplatError("modularity_probe needs e <= g")
    left = wedge_exact(vee(e, f), g)
    right = vee(e, wedge_exact(f, g))
    return _law_report(left, right, {"e": e, "f": f, "g": g})


def distributivity_probe(e: ProjectionElement, f: ProjectionElement, g: ProjectionElement) -> LawReport:
    """e∧(f∨g) = (e∧f)∨(e∧g)"""
    left = wedge_exact(e, vee(f, g))
    right = vee(wedge_exact(e, f), wedge_exact(e, g))
    return _law_report(left, right, {"e": e, "f": f, "g": g})
