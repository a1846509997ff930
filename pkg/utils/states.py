"""State functionals, evaluation and separation of states by positive elements."""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg
from scipy.optimize import linprog

from utils.algebra_core import AlgebraHandle, HermitianElement, eigh, from_matrix
from utils.errors import AlgebraMismatchError, OplatError

logger = logging.getLogger(__name__)

POINT = "point"
VECTOR = "vector"
MIXTURE = "mixture"

WEIGHT_TOLERANCE = 1e-9
# density-difference weights used when searching separating projections
SEPARATION_GRID = np.concatenate([[0.0], np.logspace(-3, 3, 25)])
DEFAULT_PROBES = 64


@dataclass(frozen=True, eq=False)
class StateFunctional:
    """A point mass, a vector state, or a finite mixture of orthogonal vector states"""
    kind: str
    dim: int
    weights: np.ndarray
    vectors: np.ndarray
    index: Optional[int] = None

    @property
    def is_pure(self) -> bool:
        return len(self.weights) == 1

    def components(self) -> List[Tuple[float, np.ndarray]]:
        return [(float(w), self.vectors[:, i]) for i, w in enumerate(self.weights)]

    def density(self) -> np.ndarray:
        """The density matrix t with rho(x) = tr(t x)"""
        return (self.vectors * self.weights) @ self.vectors.conj().T


def point_state(dim: int, index: int) -> StateFunctional:
    if not 0 <= index < dim:
        raise OplatError(f"Point index {index} outside spectrum of size {dim}")
    basis = np.zeros((dim, 1), dtype=complex)
    basis[index, 0] = 1.0
    return StateFunctional(POINT, dim, np.ones(1), basis, index)


def vector_state(xi) -> StateFunctional:
    xi = np.asarray(xi, dtype=complex).ravel()
    length = np.linalg.norm(xi)
    if length == 0:
        raise OplatError("Vector state needs a nonzero vector")
    return StateFunctional(VECTOR, len(xi), np.ones(1), (xi / length).reshape(-1, 1))


def mixture_state(weights: Sequence[float], vectors: Sequence) -> StateFunctional:
    """Convex combination of vector states along pairwise orthogonal unit vectors"""
    weights = np.asarray(weights, dtype=float)
    basis = np.column_stack([np.asarray(v, dtype=complex).ravel() for v in vectors])
    if len(weights) != basis.shape[1]:
        raise OplatError("Mixture needs one weight per vector")
    if np.any(weights <= 0) or abs(weights.sum() - 1.0) > WEIGHT_TOLERANCE:
        raise OplatError("Mixture weights must be positive and sum to 1")
    gram = basis.conj().T @ basis
    if np.max(np.abs(gram - np.eye(len(weights)))) > 1e-8:
        raise OplatError("Mixture vectors must be orthonormal")
    return StateFunctional(MIXTURE, basis.shape[0], weights, basis)


def maximally_mixed(dim: int) -> StateFunctional:
    return mixture_state(np.full(dim, 1.0 / dim), list(np.eye(dim)))


def random_pure_state(dim: int, rng: np.random.Generator) -> StateFunctional:
    return vector_state(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))


def state_eval(rho: StateFunctional, x: HermitianElement) -> float:
    """rho(x) = tr(t x)"""
    if rho.dim != x.algebra.size:
        raise AlgebraMismatchError(f"State of dimension {rho.dim} applied to algebra of size {x.algebra.size}")
    if x.algebra.is_commutative:
        return float(rho.weights @ ((np.abs(rho.vectors) ** 2).T @ x.entries))
    m = x.entries
    return float(sum(w * np.real(np.vdot(v, m @ v)) for w, v in rho.components()))


def probe_states(
    algebra: AlgebraHandle,
    elements: Sequence[HermitianElement],
    rng: Optional[np.random.Generator] = None,
    extra: int = DEFAULT_PROBES,
) -> List[StateFunctional]:
    """Eigenvector states of every element plus random pure states.

    In the commutative kind the point masses already decide the order, so
    they are returned alone.
    """
    if algebra.is_commutative:
        return [point_state(algebra.size, i) for i in range(algebra.size)]
    probes = [vector_state(np.eye(algebra.size)[:, i]) for i in range(algebra.size)]
    for x in elements:
        _, vecs = eigh(x)
        probes.extend(vector_state(vecs[:, i]) for i in range(algebra.size))
    if rng is not None:
        probes.extend(random_pure_state(algebra.size, rng) for _ in range(extra))
    return probes


@dataclass(frozen=True)
class NotSeparated:
    """Outcome of separate_states when no separating element was found"""
    reason: str


def separate_states(
    span: Sequence[HermitianElement],
    rho: StateFunctional,
    sigma: StateFunctional,
    epsilon: float,
) -> Union[HermitianElement, NotSeparated]:
    """Find c >= 0 in span(span) with rho(c) = 1 and sigma(c) <= epsilon"""
    if epsilon <= 0:
        raise OplatError("epsilon must be positive")
    if not span:
        raise OplatError("Empty operator system")
    algebra = span[0].algebra
    if algebra.is_commutative:
        return _separate_commutative(span, rho, sigma, epsilon)
    return _separate_matrix(span, rho, sigma, epsilon)


def _separate_commutative(span, rho, sigma, epsilon):
    algebra = span[0].algebra
    x = np.column_stack([e.entries for e in span])
    rho_weights = np.real(np.diag(rho.density()))
    sigma_weights = np.real(np.diag(sigma.density()))

    res = linprog(
        c=sigma_weights @ x,
        A_ub=-x,
        b_ub=np.zeros(algebra.size),
        A_eq=(rho_weights @ x).reshape(1, -1),
        b_eq=[1.0],
        bounds=[(None, None)] * len(span),
        method="highs",
    )
    logger.debug("separation LP status %s, value %s", res.status, getattr(res, "fun", None))
    if res.status != 0:
        return NotSeparated(f"linear program status {res.status}: {res.message}")
    if res.fun > epsilon + algebra.tolerance:
        return NotSeparated(f"least sigma value {res.fun:.3e} exceeds epsilon")
    values = np.clip(x @ res.x, 0.0, None)
    return HermitianElement(algebra, values)


def _span_residual(basis: np.ndarray, m: np.ndarray) -> float:
    target = np.concatenate([m.real.ravel(), m.imag.ravel()])
    coeffs, *_ = np.linalg.lstsq(basis, target, rcond=None)
    return float(np.max(np.abs(basis @ coeffs - target), initial=0.0))


def _separation_candidates(rho: StateFunctional, sigma: StateFunctional) -> List[np.ndarray]:
    t_rho, t_sigma = rho.density(), sigma.density()
    candidates = []
    for lam in SEPARATION_GRID:
        _, vecs = scipy.linalg.eigh(t_rho - lam * t_sigma)
        candidates.extend(vecs[:, i] for i in range(vecs.shape[1]))

    # the limit of the grid: compress t_rho onto the kernel of t_sigma
    kernel = scipy.linalg.null_space(t_sigma, rcond=1e-10)
    if kernel.shape[1] > 0:
        compressed = kernel.conj().T @ t_rho @ kernel
        _, vecs = scipy.linalg.eigh(compressed)
        candidates.extend(kernel @ vecs[:, i] for i in range(vecs.shape[1]))
    return candidates


def _separate_matrix(span, rho, sigma, epsilon):
    algebra = span[0].algebra
    basis = np.column_stack(
        [np.concatenate([e.entries.real.ravel(), e.entries.imag.ravel()]) for e in span]
    )
    best = None
    best_sigma = np.inf
    for v in _separation_candidates(rho, sigma):
        p = np.outer(v, v.conj())
        if _span_residual(basis, p) > 1e-8:
            continue
        candidate = from_matrix(algebra, p)
        rho_value = state_eval(rho, candidate)
        if rho_value <= algebra.cluster_tolerance:
            continue
        candidate = candidate * (1.0 / rho_value)
        sigma_value = state_eval(sigma, candidate)
        if sigma_value < best_sigma:
            best, best_sigma = candidate, sigma_value

    if best is None or best_sigma > epsilon:
        return NotSeparated("witness family exhausted")
    logger.debug("separating element found with sigma value %.3e", best_sigma)
    return best
