"""Squares and square roots of basic elements and their state-level values."""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from utils.algebra_core import (
    HermitianElement,
    eigh,
    from_matrix,
    func_calc,
    is_positive,
    min_eigenvalue,
    positive_part,
)
from utils.errors import NotPositiveError, OplatError, WitnessError
from utils.lattice_completion import (
    BASIC,
    BasicElement,
    LatticeElement,
    as_lattice,
    s_basic,
    shift_basic,
)
from utils.states import StateFunctional, state_eval

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-6
LAMBDA_POINTS = 1000
R_POINTS = 60


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lower + other.lower, self.upper + other.upper)

    def __sub__(self, other: "Interval") -> "Interval":
        return Interval(self.lower - other.upper, self.upper - other.lower)

    def __mul__(self, scalar: float) -> "Interval":
        lo, hi = self.lower * scalar, self.upper * scalar
        return Interval(min(lo, hi), max(lo, hi))

    __rmul__ = __mul__

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return (self.lower + self.upper) / 2

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= value <= self.upper + tol


@dataclass(frozen=True, eq=False)
class CertifiedInterval:
    """Bracket for the value of a basic square at a state, with its witness"""
    lower: float
    upper: float
    witness: Optional[HermitianElement]
    epsilon: float

    def as_interval(self) -> Interval:
        return Interval(self.lower, self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower


def lambda_grid(points: int = LAMBDA_POINTS) -> np.ndarray:
    """Logarithmic grid on (0, 1], ending at 1"""
    return np.logspace(-6, 0, points)


def require_nonnegative(c: BasicElement, what: str = "basic element") -> None:
    """inf C >= 0 iff every generator is positive"""
    if c.polarity != BASIC or not all(is_positive(g) for g in c.generators):
        raise NotPositiveError(f"{what} is not a positive basic element")


def basic_square(c: BasicElement) -> LatticeElement:
    """Generator-wise square of a positive basic element.

    Exact under pi in the commutative kind. In the matrix kind the result only
    bounds the true square from above; eval_square_interval brackets its
    value at a state.
    """
    require_nonnegative(c, "square argument")
    return as_lattice(BasicElement(c.algebra, tuple(g.square() for g in c.generators), BASIC))


def basic_sqrt(c: BasicElement) -> LatticeElement:
    require_nonnegative(c, "sqrt argument")
    roots = tuple(func_calc(_clip_positive(g), "sqrt") for g in c.generators)
    return as_lattice(BasicElement(c.algebra, roots, BASIC))


def _clip_positive(g: HermitianElement) -> HermitianElement:
    if g.algebra.is_commutative:
        return HermitianElement(g.algebra, np.clip(g.entries, 0.0, None))
    return positive_part(g)


def _commutative_interval(c: BasicElement, rho: StateFunctional) -> CertifiedInterval:
    floor = c.stack().min(axis=0)
    weights = np.real(np.diag(rho.density()))
    value = float(weights @ floor ** 2)
    best = min(c.generators, key=lambda g: state_eval(rho, g.square()))
    return CertifiedInterval(value, value, best, 0.0)


def _witness(c: HermitianElement, rho: StateFunctional, epsilon: float) -> Tuple[float, HermitianElement]:
    """Element w >= c commuting with each component of rho and erasing off-diagonal terms.

    On the range of rho the witness is diagonal with entries rho_i(c) + delta_i,
    delta_i = 2^i epsilon plus the off-diagonal row sum; the complement block
    is c + R' with R' chosen from the Schur complement.
    """
    n = c.algebra.size
    m = c.entries
    xi = rho.vectors
    k = xi.shape[1]
    gram = xi.conj().T @ m @ xi
    diag = np.real(np.diag(gram))
    off = np.abs(gram - np.diag(np.diag(gram))).sum(axis=1)
    delta = np.array([2.0 ** i * epsilon for i in range(k)]) + off

    p = xi @ xi.conj().T
    q = np.eye(n) - p
    coupling = q @ m @ xi
    e_block = np.diag(delta) - (gram - np.diag(np.diag(gram)))
    e_min = float(np.min(np.linalg.eigvalsh(e_block)))
    coupling_norm = float(np.linalg.norm(coupling, 2)) if coupling.size else 0.0
    shift = 2 * coupling_norm ** 2 / e_min if coupling_norm > 0 else 0.0

    top = (xi * (diag + delta)) @ xi.conj().T
    w = from_matrix(c.algebra, top + q @ (m + shift * np.eye(n)) @ q)

    gap = w - c
    margin = min_eigenvalue(gap)
    if margin < -c.algebra.tolerance * max(1.0, gap.norm()):
        raise WitnessError(f"Witness is not above the generator (least eigenvalue {margin:.3e})")
    upper = float(np.sum(rho.weights * (diag + delta) ** 2))
    return upper, w


def eval_square_interval(
    c: BasicElement, rho: StateFunctional, epsilon: float = DEFAULT_EPSILON
) -> CertifiedInterval:
    """Bracket the value of the basic square of c at a pure or finitely mixed state"""
    if epsilon <= 0:
        raise OplatError("epsilon must be positive")
    require_nonnegative(c, "square argument")
    if c.algebra.is_commutative:
        return _commutative_interval(c, rho)

    components = rho.components()
    lower = sum(w * min(np.real(np.vdot(v, g.entries @ v)) for g in c.generators) ** 2 for w, v in components)

    best_upper, best_witness = np.inf, None
    for g in c.generators:
        upper, w = _witness(g, rho, epsilon)
        if upper < best_upper:
            best_upper, best_witness = upper, w
    logger.debug("square interval [%.6e, %.6e]", lower, best_upper)
    return CertifiedInterval(float(lower), float(best_upper), best_witness, epsilon)


def square_value_at(c: BasicElement, rho: StateFunctional, epsilon: float = DEFAULT_EPSILON) -> float:
    """Lower end of the certified interval: exact at pure states and in the commutative kind"""
    return eval_square_interval(c, rho, epsilon).lower


def _positive_representation(a: LatticeElement) -> LatticeElement:
    """Shift both parts by the same multiple of 1 so all generators are positive"""
    lowest = min(min_eigenvalue(g) for g in a.positive.generators + a.negative.generators)
    if lowest >= 0:
        return a
    return LatticeElement(shift_basic(a.positive, -lowest), shift_basic(a.negative, -lowest))


def sqrt_general_at(p: LatticeElement, rho: StateFunctional, points: int = LAMBDA_POINTS) -> float:
    """inf over lambda of (s(sqrt C) - sqrt(1 - lambda) s(sqrt D)) / sqrt(lambda) for P = C - D"""
    p = _positive_representation(as_lattice(p))
    a = s_basic(_sqrt_basic(p.positive), rho)
    b = s_basic(_sqrt_basic(p.negative), rho)
    grid = list(lambda_grid(points))
    if b >= a:
        # the infimum is the limit lambda -> 0, clipped at zero
        return 0.0
    if 0 <= b:
        # stationary point of the objective: sqrt(1 - lambda) = b / a
        grid.append(1.0 - (b / a) ** 2)
    values = [(a - np.sqrt(1.0 - lam) * b) / np.sqrt(lam) for lam in grid if lam > 0]
    return float(min(values))


def _sqrt_basic(c: BasicElement) -> BasicElement:
    return BasicElement(c.algebra, tuple(func_calc(_clip_positive(g), "sqrt") for g in c.generators), BASIC)


def sqr_general_at(
    a: LatticeElement, rho: StateFunctional, points: int = LAMBDA_POINTS, epsilon: float = DEFAULT_EPSILON
) -> float:
    """sup over lambda of lambda (s(C^2) - s(D^2) / (1 - lambda)) for A = C - D"""
    a = _positive_representation(as_lattice(a))
    c2 = square_value_at(a.positive, rho, epsilon)
    d2 = square_value_at(a.negative, rho, epsilon)
    if d2 <= 0:
        # the supremum is the limit lambda -> 1
        return float(max(0.0, c2))
    grid = list(lambda_grid(points)[:-1])
    if c2 > 0 and d2 < c2:
        grid.append(1.0 - np.sqrt(d2 / c2))
    values = [lam * (c2 - d2 / (1.0 - lam)) for lam in grid if 0 < lam < 1]
    return float(max(0.0, max(values, default=0.0)))


def square_general_at(a: LatticeElement, rho: StateFunctional, **kwargs) -> float:
    """sqr(A) + sqr(-A)"""
    a = as_lattice(a)
    return sqr_general_at(a, rho, **kwargs) + sqr_general_at(-a, rho, **kwargs)


def r_grid(r_max: float, points: int = R_POINTS) -> np.ndarray:
    return np.logspace(0, np.log10(r_max), points)


def sqr_single(a: HermitianElement, r_max: float = 1e6) -> Tuple[HermitianElement, float]:
    """sup over R of lambda_R ((R+1)^2 a+^2 - (R a+ + a-)^2 / (1 - lambda_R)), lambda_R = 1/(R+1).

    Returns the iterate and the bound |a-|^2 / r_max on its distance to a+^2.
    """
    if r_max < 1:
        raise OplatError("r_max must be at least 1")
    vals, vecs = eigh(a)
    plus, minus = np.clip(vals, 0, None), np.clip(-vals, 0, None)
    best = np.full_like(vals, -np.inf, dtype=float)
    for r in r_grid(r_max):
        lam = 1.0 / (r + 1.0)
        value = lam * ((r + 1) ** 2 * plus ** 2 - (r * plus + minus) ** 2 / (1.0 - lam))
        best = np.maximum(best, value)
    gap = float(np.max(minus) ** 2 / r_max) if len(minus) else 0.0

    if a.algebra.is_commutative:
        out = np.empty_like(best)
        out[np.argsort(a.entries, kind="stable")] = best
        return HermitianElement(a.algebra, out), gap
    return from_matrix(a.algebra, (vecs * best) @ vecs.conj().T), gap


def sqr_target(a: HermitianElement) -> HermitianElement:
    """a+^2, the limit of sqr_single"""
    return positive_part(a).square()
