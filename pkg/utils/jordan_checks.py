"""Derived Jordan operations at states and the verification harnesses built on them."""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from utils.algebra_core import HermitianElement, from_matrix, is_positive, lie_product, min_eigenvalue
from utils.errors import NotPositiveError, OplatError, WitnessError
from utils.jordan_ops import (
    DEFAULT_EPSILON,
    Interval,
    _sqrt_basic,
    eval_square_interval,
    require_nonnegative,
    square_value_at,
)
from utils.lattice_completion import BasicElement, minkowski_sum, s_basic, shift_basic
from utils.states import StateFunctional, state_eval

logger = logging.getLogger(__name__)

PERTURBATION = 1e-9
LEMMA2_TOLERANCE = 1e-8


@dataclass(frozen=True, eq=False)
class Op13Interval:
    """Bracket for (C + iD)(C - iD) at a pure state"""
    lower: float
    upper: float
    witnesses: Tuple[Optional[HermitianElement], Optional[HermitianElement]]
    epsilon: float
    generator_value: float

    def as_interval(self) -> Interval:
        return Interval(self.lower, self.upper)


@dataclass(frozen=True)
class LieValue:
    """The Lie operation is i times a real quantity; coefficient brackets that quantity"""
    coefficient: Interval
    generator_value: float


@dataclass(frozen=True)
class ComplexInterval:
    real: Interval
    imag: Interval


def _square_interval(c: BasicElement, rho: StateFunctional, epsilon: float) -> Interval:
    return eval_square_interval(c, rho, epsilon).as_interval()


def _is_zero(c: BasicElement) -> bool:
    return all(np.max(np.abs(g.entries)) <= c.algebra.tolerance for g in c.generators)


def _generator_op13(c: BasicElement, d: BasicElement, rho: StateFunctional) -> float:
    values = []
    for x in c.generators:
        for y in d.generators:
            m = x.entries + 1j * y.entries if not x.algebra.is_commutative else np.diag(x.entries + 1j * y.entries)
            values.append(state_eval(rho, from_matrix(x.algebra, m @ m.conj().T)))
    return float(min(values))


def op13_at(
    c: BasicElement, d: BasicElement, rho: StateFunctional, epsilon: float = DEFAULT_EPSILON
) -> Op13Interval:
    """inf of rho((c + id)(c - id)) over the maximal representatives, certified by witnesses"""
    require_nonnegative(c, "first argument")
    require_nonnegative(d, "second argument")
    generator_value = _generator_op13(c, d, rho)
    if c.algebra.is_commutative:
        ci = eval_square_interval(c, rho, epsilon)
        di = eval_square_interval(d, rho, epsilon)
        value = ci.lower + di.lower
        return Op13Interval(value, value, (ci.witness, di.witness), 0.0, generator_value)
    if not rho.is_pure:
        raise OplatError("op13_at needs a pure state in the matrix kind")

    ci = eval_square_interval(c, rho, epsilon)
    if _is_zero(d):
        return Op13Interval(ci.lower, ci.upper, (ci.witness, d.generators[0]), epsilon, generator_value)
    di = eval_square_interval(d, rho, epsilon)

    # both witnesses commute with the state's projection, so the commutator term vanishes
    wc, wd = ci.witness.entries, di.witness.entries
    x = wc + 1j * wd
    check = state_eval(rho, from_matrix(c.algebra, x @ x.conj().T))
    if abs(check - (ci.upper + di.upper)) > 1e-8 * max(1.0, check):
        raise WitnessError("Witness pair does not realize the upper bound")
    return Op13Interval(ci.lower + di.lower, ci.upper + di.upper, (ci.witness, di.witness), epsilon, generator_value)


def lie14_at(
    c: BasicElement, d: BasicElement, rho: StateFunctional, epsilon: float = DEFAULT_EPSILON
) -> LieValue:
    """(i/2)[(C + iD)(C - iD) - C^2 - D^2]; returns the bracket of the real factor"""
    o = op13_at(c, d, rho, epsilon).as_interval()
    coefficient = (o - _square_interval(c, rho, epsilon) - _square_interval(d, rho, epsilon)) * 0.5
    if c.algebra.is_commutative:
        coefficient = Interval(0.0, 0.0)
    pair_values = [
        state_eval(rho, lie_product(y, x)) / 2 for x in c.generators for y in d.generators
    ]
    generator_value = max(pair_values, key=abs)
    return LieValue(coefficient, float(generator_value))


def jordan12_at(
    c: BasicElement, d: BasicElement, rho: StateFunctional, epsilon: float = DEFAULT_EPSILON
) -> Interval:
    """(1/2)[(C + D)^2 - C^2 - D^2]"""
    total = _square_interval(minkowski_sum(c, d), rho, epsilon)
    return (total - _square_interval(c, rho, epsilon) - _square_interval(d, rho, epsilon)) * 0.5


def product15_at(
    c: BasicElement, d: BasicElement, rho: StateFunctional, epsilon: float = DEFAULT_EPSILON
) -> ComplexInterval:
    """(1/2) Jordan part + (1/2) Lie part"""
    lie = lie14_at(c, d, rho, epsilon)
    return ComplexInterval(jordan12_at(c, d, rho, epsilon) * 0.5, lie.coefficient * 0.5)


FIRST = "first"
SECOND = "second"


def quadratic_cloud_at(
    c: BasicElement,
    d: BasicElement,
    e: BasicElement,
    rho: StateFunctional,
    kind: str = FIRST,
    epsilon: float = DEFAULT_EPSILON,
) -> Interval:
    """Multilinearity defect of the basic square (first kind) or of op13 (second kind)"""
    sq = lambda x: _square_interval(x, rho, epsilon)
    singles = sq(c) + sq(d) + sq(e)
    if kind == FIRST:
        cd, ce, de = minkowski_sum(c, d), minkowski_sum(c, e), minkowski_sum(d, e)
        return sq(minkowski_sum(cd, e)) - sq(cd) - sq(ce) - sq(de) + singles
    if kind == SECOND:
        op = lambda x, y: op13_at(x, y, rho, epsilon).as_interval()
        de = minkowski_sum(d, e)
        return op(c, de) - op(c, d) - op(c, e) - sq(de) + singles
    raise OplatError(f"Unknown quadratic cloud kind: {kind}")


def sqrt_square_gap_at(c: BasicElement, rho: StateFunctional, epsilon: float = DEFAULT_EPSILON) -> float:
    """s(C) - value of (sqrt C)^2; nonnegative, positive when the inequality is strict"""
    require_nonnegative(c, "argument")
    return s_basic(c, rho) - square_value_at(_sqrt_basic(c), rho, epsilon)


@dataclass(frozen=True, eq=False)
class Lemma2Report:
    side: str
    witness: HermitianElement
    threshold: float
    multiplier: float
    value: float
    square_value: float
    perturbed: bool

    @property
    def passed(self) -> bool:
        return self.value <= LEMMA2_TOLERANCE


def _relative_psd(m: HermitianElement) -> bool:
    return min_eigenvalue(m) >= -1e-12 * max(1.0, m.norm())


def _vanishing_witness(
    b: HermitianElement, xi: np.ndarray, delta: float
) -> Tuple[HermitianElement, float, float, float, float]:
    """c = K (1 - xi xi*) + delta with c >= b and c >= 0, for rho(b) < delta.

    rho(c) and rho(c^2) are read off the projection onto the complement of xi.
    """
    n = b.algebra.size
    m = b.entries
    perp = scipy.linalg.null_space(xi.conj().reshape(1, -1))
    corner = delta - float(np.real(np.vdot(xi, m @ xi)))
    cross = perp.conj().T @ m @ xi
    schur = perp.conj().T @ m @ perp - delta * np.eye(n - 1) + np.outer(cross, cross.conj()) / corner
    threshold = float(np.max(np.linalg.eigvalsh((schur + schur.conj().T) / 2))) if n > 1 else 0.0
    multiplier = max(float(math.floor(threshold)) + 1.0, 0.0)
    c = from_matrix(b.algebra, multiplier * (perp @ perp.conj().T) + delta * np.eye(n))
    leak = float(np.linalg.norm(perp.conj().T @ xi) ** 2)
    value = multiplier * leak + delta
    square_value = (multiplier ** 2 + 2.0 * multiplier * delta) * leak + delta ** 2
    return c, threshold, multiplier, value, square_value


def lemma2_state_check(a: HermitianElement, rho: StateFunctional, tol: float = LEMMA2_TOLERANCE) -> Lemma2Report:
    """Show that one of the positive or negative part values vanishes at a pure state.

    The witness c lies above a (or -a) and above 0 while rho(c) = rho(c^2) = 0,
    up to the perturbation used when rho(a) = 0.
    """
    if a.algebra.is_commutative:
        raise OplatError("lemma2_state_check works in the matrix kind")
    if not rho.is_pure:
        raise OplatError("lemma2_state_check needs a pure state")
    zero = a.algebra.zero()
    if is_positive(a):
        return Lemma2Report("minus", zero, 0.0, 0.0, 0.0, 0.0, False)
    if is_positive(-a):
        return Lemma2Report("plus", zero, 0.0, 0.0, 0.0, 0.0, False)

    xi = rho.vectors[:, 0]
    value = state_eval(rho, a)
    perturbed = abs(value) <= tol
    if perturbed:
        logger.warning("state value of a vanishes, using the perturbed witness")
    # b is the part with nonpositive state value
    side, b = ("minus", -a) if value > 0 else ("plus", a)
    delta = PERTURBATION if perturbed else 0.0
    c, threshold, multiplier, c_value, c_square = _vanishing_witness(b, xi, delta)

    if not (_relative_psd(c - b) and _relative_psd(c)):
        raise WitnessError(f"Witness for the {side} side failed its positivity check")
    return Lemma2Report(side, c, threshold, multiplier, c_value, c_square, perturbed)


@dataclass(frozen=True)
class Lemma5Trace:
    weight: str
    r_values: List[float]
    gaps: List[float]
    decreasing: bool
    final_gap: float
    vanishing: bool


_WEIGHTS: Dict[str, Callable[[float], float]] = {
    "const": lambda r: 1.0,
    "sqrt": math.sqrt,
    "id": lambda r: r,
}


def lemma5_asymptotics(
    c: BasicElement,
    weight: str,
    states: Sequence[StateFunctional],
    r_values: Optional[Sequence[float]] = None,
    tol: float = 1e-3,
    trend_start: float = 1e2,
    epsilon: float = DEFAULT_EPSILON,
) -> Lemma5Trace:
    """weight(r) * |value of (sqrt(C + r))^2 - (s(C) + r)| along a grid of r"""
    if weight not in _WEIGHTS:
        raise OplatError(f"Unknown weight: {weight}")
    require_nonnegative(c, "argument")
    r_values = list(np.logspace(0, 4, 9) if r_values is None else r_values)
    f = _WEIGHTS[weight]
    gaps = []
    for r in r_values:
        root = _sqrt_basic(shift_basic(c, r))
        worst = 0.0
        for rho in states:
            value = square_value_at(root, rho, epsilon)
            worst = max(worst, f(r) * abs(value - (s_basic(c, rho) + r)))
        gaps.append(worst)

    tail = [g for r, g in zip(r_values, gaps) if r >= trend_start]
    decreasing = all(later <= earlier * (1 + 1e-9) + 1e-12 for earlier, later in zip(tail, tail[1:]))
    return Lemma5Trace(weight, r_values, gaps, decreasing, gaps[-1], gaps[-1] <= tol)


@dataclass(frozen=True, eq=False)
class PositiveMapTable:
    """A linear map given by its values on a spanning set of the domain"""
    domain: Tuple[HermitianElement, ...]
    images: Tuple[HermitianElement, ...]

    def __post_init__(self):
        if len(self.domain) != len(self.images) or not self.domain:
            raise OplatError("Map table needs one image per domain element")

    def _vectorize(self, x: HermitianElement) -> np.ndarray:
        e = x.entries
        if x.algebra.is_commutative:
            return np.asarray(e, dtype=float)
        return np.concatenate([e.real.ravel(), e.imag.ravel()])

    def apply(self, x: HermitianElement) -> HermitianElement:
        basis = np.column_stack([self._vectorize(g) for g in self.domain])
        target = self._vectorize(x)
        coeffs, *_ = np.linalg.lstsq(basis, target, rcond=None)
        if np.max(np.abs(basis @ coeffs - target)) > 1e-8 * max(1.0, np.max(np.abs(target))):
            raise OplatError("Element lies outside the span of the map table")
        out = self.images[0] * 0.0
        for t, img in zip(coeffs, self.images):
            out = out + img * float(t)
        return out

    def check_positive(self) -> None:
        for g, img in zip(self.domain, self.images):
            if is_positive(g) and not is_positive(img):
                raise NotPositiveError("Map sends a positive generator to a non-positive element")


@dataclass(frozen=True)
class Schwarz22Report:
    passed: bool
    margin: float


def schwarz22_check(
    phi: PositiveMapTable, x0: HermitianElement, x1: Optional[HermitianElement] = None, tol: float = 1e-9
) -> Schwarz22Report:
    """phi(x x*) >= phi(x0)^2 + phi(x1)^2 for x = x0 + i x1, compared pointwise"""
    phi.check_positive()
    if not phi.images[0].algebra.is_commutative:
        raise OplatError("schwarz22_check compares values in a commutative codomain")
    x1 = x0.algebra.zero() if x1 is None else x1
    if x0.algebra.is_commutative:
        xx = x0.square() + x1.square()
    else:
        m = x0.entries + 1j * x1.entries
        xx = from_matrix(x0.algebra, m @ m.conj().T)
    lhs = phi.apply(xx)
    rhs = phi.apply(x0).square() + phi.apply(x1).square()
    margin = float(np.min(lhs.entries - rhs.entries))
    return Schwarz22Report(margin >= -tol, margin)
