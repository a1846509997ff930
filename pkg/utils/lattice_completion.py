"""Basic elements, their differences, and the lattice operations on them.

A basic element is the formal infimum of a finite generating list; an
antibasic element is the formal supremum. A LatticeElement is a difference of
two basic elements. Order questions are decided exactly by linear programming
in the commutative kind and over a family of probe states in the matrix kind.
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import linprog

from utils.algebra_core import (
    AlgebraHandle,
    HermitianElement,
    check_same_algebra,
    max_eigenvalue,
    min_eigenvalue,
)
from utils.errors import OplatError
from utils.states import StateFunctional, probe_states, state_eval

logger = logging.getLogger(__name__)

BASIC = "basic"
ANTIBASIC = "antibasic"

EXACT = "exact"
PROBE_CERTIFIED = "probe-certified"

# slack allowed in LP domination tests
LP_TOLERANCE = 1e-9
# fixed seed for the random part of the matrix probe family
PROBE_SEED = 20240521


@dataclass(frozen=True, eq=False)
class BasicElement:
    """Formal infimum (basic) or supremum (antibasic) of the generators"""
    algebra: AlgebraHandle
    generators: Tuple[HermitianElement, ...]
    polarity: str = BASIC

    def __post_init__(self):
        if not self.generators:
            raise OplatError("A basic element needs at least one generator")
        if self.polarity not in (BASIC, ANTIBASIC):
            raise OplatError(f"Unknown polarity: {self.polarity}")
        check_same_algebra(self.algebra, *(g.algebra for g in self.generators))

    def stack(self) -> np.ndarray:
        """Generators as rows (commutative kind)"""
        return np.vstack([g.entries for g in self.generators])

    def negated(self) -> "BasicElement":
        """-inf{c} = sup{-c} and vice versa"""
        flipped = ANTIBASIC if self.polarity == BASIC else BASIC
        return BasicElement(self.algebra, tuple(-g for g in self.generators), flipped)


def basic(algebra: AlgebraHandle, generators: Sequence) -> BasicElement:
    gens = tuple(g if isinstance(g, HermitianElement) else algebra.element(g) for g in generators)
    return BasicElement(algebra, gens, BASIC)


def antibasic(algebra: AlgebraHandle, generators: Sequence) -> BasicElement:
    gens = tuple(g if isinstance(g, HermitianElement) else algebra.element(g) for g in generators)
    return BasicElement(algebra, gens, ANTIBASIC)


@dataclass(frozen=True, eq=False)
class LatticeElement:
    """The difference positive - negative of two basic elements"""
    positive: BasicElement
    negative: BasicElement

    def __post_init__(self):
        if self.positive.polarity != BASIC or self.negative.polarity != BASIC:
            raise OplatError("Both parts of a LatticeElement must be basic")
        check_same_algebra(self.positive.algebra, self.negative.algebra)

    @property
    def algebra(self) -> AlgebraHandle:
        return self.positive.algebra

    def __neg__(self) -> "LatticeElement":
        return LatticeElement(self.negative, self.positive)

    def __add__(self, other: "LatticeElement") -> "LatticeElement":
        return add(self, other)

    def __sub__(self, other: "LatticeElement") -> "LatticeElement":
        return add(self, -other)


@dataclass(frozen=True, eq=False)
class L1Image:
    """Image of a lattice element under pi: a real function on the spectrum"""
    algebra: AlgebraHandle
    values: np.ndarray


@dataclass(frozen=True)
class NormBound:
    lower: float
    upper: float
    certainty: str

    @property
    def is_exact(self) -> bool:
        return abs(self.upper - self.lower) <= 1e-9 * max(1.0, abs(self.upper))

    @property
    def value(self) -> float:
        return self.lower if self.is_exact else (self.lower + self.upper) / 2


def _zero_basic(algebra: AlgebraHandle) -> BasicElement:
    return BasicElement(algebra, (algebra.zero(),), BASIC)


def as_lattice(x: Union[HermitianElement, BasicElement, LatticeElement]) -> LatticeElement:
    """Embed an element, a basic or antibasic element, or pass a LatticeElement through"""
    if isinstance(x, LatticeElement):
        return x
    if isinstance(x, HermitianElement):
        return LatticeElement(BasicElement(x.algebra, (x,), BASIC), _zero_basic(x.algebra))
    if x.polarity == BASIC:
        return LatticeElement(x, _zero_basic(x.algebra))
    return LatticeElement(_zero_basic(x.algebra), x.negated())


def zero_element(algebra: AlgebraHandle) -> LatticeElement:
    return LatticeElement(_zero_basic(algebra), _zero_basic(algebra))


def certainty_for(algebra: AlgebraHandle) -> str:
    return EXACT if algebra.is_commutative else PROBE_CERTIFIED


def _prune(algebra: AlgebraHandle, gens: List[HermitianElement]) -> Tuple[HermitianElement, ...]:
    """Drop duplicates and, in the commutative kind, generators dominating another one"""
    kept: List[HermitianElement] = []
    for g in gens:
        if any(np.allclose(g.entries, k.entries, atol=algebra.tolerance) for k in kept):
            continue
        kept.append(g)
    if not algebra.is_commutative or len(kept) < 2:
        return tuple(kept)
    tol = algebra.tolerance
    minimal = []
    for i, g in enumerate(kept):
        dominated = any(
            j != i and np.all(g.entries >= k.entries - tol) and np.any(g.entries > k.entries + tol)
            for j, k in enumerate(kept)
        )
        if not dominated:
            minimal.append(g)
    return tuple(minimal)


def minkowski_sum(c: BasicElement, d: BasicElement) -> BasicElement:
    check_same_algebra(c.algebra, d.algebra)
    if c.polarity != d.polarity:
        raise OplatError("Cannot add basic and antibasic generator sets")
    gens = [x + y for x in c.generators for y in d.generators]
    return BasicElement(c.algebra, _prune(c.algebra, gens), c.polarity)


def union(c: BasicElement, d: BasicElement) -> BasicElement:
    """inf(X) ^ inf(Y) = inf(X u Y)"""
    check_same_algebra(c.algebra, d.algebra)
    return BasicElement(c.algebra, _prune(c.algebra, list(c.generators) + list(d.generators)), c.polarity)


def shift_basic(c: BasicElement, amount: float) -> BasicElement:
    unit = c.algebra.identity() * amount
    return BasicElement(c.algebra, tuple(g + unit for g in c.generators), c.polarity)


def scale_basic(c: BasicElement, alpha: float) -> BasicElement:
    return BasicElement(c.algebra, tuple(g * alpha for g in c.generators), c.polarity)


def add(a: LatticeElement, b: LatticeElement) -> LatticeElement:
    """Generator-wise Minkowski sum of both parts"""
    check_same_algebra(a.algebra, b.algebra)
    return LatticeElement(minkowski_sum(a.positive, b.positive), minkowski_sum(a.negative, b.negative))


def scale(a: LatticeElement, alpha: float) -> LatticeElement:
    if alpha < 0:
        raise OplatError("Negative scaling: negate the element instead")
    return LatticeElement(scale_basic(a.positive, alpha), scale_basic(a.negative, alpha))


def _generator_norm(c: BasicElement) -> float:
    return max(g.norm() for g in c.generators)


def wedge(a: LatticeElement, b: LatticeElement, shift: bool = True) -> LatticeElement:
    """Maximal element below a and b.

    (C1 - D1) ^ (C2 - D2) = ((C1 + D2) u (C2 + D1)) - (D1 + D2), optionally
    shifted by the generator-norm sum so both parts are positive.
    """
    check_same_algebra(a.algebra, b.algebra)
    left = minkowski_sum(a.positive, b.negative)
    right = minkowski_sum(b.positive, a.negative)
    negative = minkowski_sum(a.negative, b.negative)
    positive = union(left, right)
    if shift:
        amount = sum(_generator_norm(p) for p in (a.positive, a.negative, b.positive, b.negative))
        positive, negative = shift_basic(positive, amount), shift_basic(negative, amount)
    return LatticeElement(positive, negative)


def vee(a: LatticeElement, b: LatticeElement, shift: bool = True) -> LatticeElement:
    return -wedge(-a, -b, shift)


def min_positive_decomposition(a: LatticeElement) -> Tuple[LatticeElement, LatticeElement]:
    """a = a_plus - a_minus with a_plus = a v 0 and a_minus = -(a ^ 0)"""
    zero = zero_element(a.algebra)
    return vee(a, zero), vee(-a, zero)


def pi(a: LatticeElement) -> L1Image:
    """Pointwise value: min of positive generators minus min of negative ones"""
    if not a.algebra.is_commutative:
        raise OplatError("pi is only defined for commutative algebras; use s_rep with state probes")
    values = a.positive.stack().min(axis=0) - a.negative.stack().min(axis=0)
    return L1Image(a.algebra, values)


def s_basic(c: BasicElement, rho: StateFunctional) -> float:
    """Least (basic) or largest (antibasic) generator value under rho"""
    values = [state_eval(rho, g) for g in c.generators]
    return min(values) if c.polarity == BASIC else max(values)


def s_rep(a: Union[LatticeElement, BasicElement], rho: StateFunctional) -> float:
    a = as_lattice(a)
    return s_basic(a.positive, rho) - s_basic(a.negative, rho)


def _dominates_hull(target: np.ndarray, rows: np.ndarray, tol: float = LP_TOLERANCE) -> bool:
    """Is target >= some convex combination of the rows (componentwise)?"""
    k = rows.shape[0]
    res = linprog(
        c=np.zeros(k),
        A_ub=rows.T,
        b_ub=target + tol,
        A_eq=np.ones((1, k)),
        b_eq=[1.0],
        bounds=[(0, None)] * k,
        method="highs",
    )
    return res.status == 0


def _probes_for(elements: Sequence[BasicElement]) -> List[StateFunctional]:
    algebra = elements[0].algebra
    gens = [g for e in elements for g in e.generators]
    return probe_states(algebra, gens, np.random.default_rng(PROBE_SEED))


def basic_geq(c: BasicElement, d: BasicElement) -> bool:
    """inf C >= inf D: each generator of C dominates a convex combination of D"""
    check_same_algebra(c.algebra, d.algebra)
    if c.polarity != BASIC or d.polarity != BASIC:
        raise OplatError("basic_geq compares basic elements")
    if c.algebra.is_commutative:
        rows = d.stack()
        return all(_dominates_hull(g.entries, rows) for g in c.generators)
    tol = max(c.algebra.tolerance, LP_TOLERANCE)
    return all(s_basic(c, rho) >= s_basic(d, rho) - tol for rho in _probes_for([c, d]))


def geq(a, b) -> bool:
    """a >= b for lattice elements: C_a + D_b >= C_b + D_a"""
    a, b = as_lattice(a), as_lattice(b)
    check_same_algebra(a.algebra, b.algebra)
    return basic_geq(minkowski_sum(a.positive, b.negative), minkowski_sum(b.positive, a.negative))


def equivalent(c, d) -> bool:
    """Same class: c >= d and d >= c"""
    if isinstance(c, BasicElement) and isinstance(d, BasicElement):
        if c.polarity != d.polarity:
            raise OplatError("Equivalence compares elements of the same polarity")
        check_same_algebra(c.algebra, d.algebra)
        if c.polarity == ANTIBASIC:
            c, d = c.negated(), d.negated()
        return basic_geq(c, d) and basic_geq(d, c)
    return geq(c, d) and geq(d, c)


def is_nonnegative(a) -> bool:
    a = as_lattice(a)
    return geq(a, zero_element(a.algebra))


def _part_bound(part: LatticeElement, probes: Sequence[StateFunctional]) -> Tuple[float, float]:
    lower = max(0.0, max(s_rep(part, rho) for rho in probes))
    upper = min(max_eigenvalue(g) for g in part.positive.generators) - min(
        min_eigenvalue(g) for g in part.negative.generators
    )
    return lower, max(upper, lower)


def norm(a: Union[BasicElement, LatticeElement]) -> NormBound:
    """max(|a_plus|, |a_minus|); exact via pi in the commutative kind"""
    a = as_lattice(a)
    if a.algebra.is_commutative:
        value = float(np.max(np.abs(pi(a).values)))
        return NormBound(value, value, EXACT)
    plus, minus = min_positive_decomposition(a)
    probes = _probes_for([a.positive, a.negative])
    lo_plus, up_plus = _part_bound(plus, probes)
    lo_minus, up_minus = _part_bound(minus, probes)
    return NormBound(max(lo_plus, lo_minus), max(up_plus, up_minus), PROBE_CERTIFIED)
