"""Finite-dimensional algebra substrate.

Elements of an algebra are either real tuples over a finite spectrum (the
commutative kind) or Hermitian matrices (the matrix kind). Everything here is
immutable; operations return new elements.
"""
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from utils.errors import AlgebraMismatchError, NotHermitianError, NotPositiveError, OplatError

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10
# eigenvalues closer than CLUSTER_FACTOR * tolerance are treated as one
CLUSTER_FACTOR = 100

COMMUTATIVE = "commutative"
MATRIX = "matrix"


@dataclass(frozen=True)
class AlgebraHandle:
    """A unital finite-dimensional algebra: C(X) for a finite X, or M_n"""
    kind: str
    size: int
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        if self.kind not in (COMMUTATIVE, MATRIX):
            raise OplatError(f"Unknown algebra kind: {self.kind}")
        if int(self.size) < 1:
            raise OplatError(f"Algebra size must be positive, got {self.size}")
        if self.tolerance < 0:
            raise OplatError(f"Tolerance must be nonnegative, got {self.tolerance}")

    @property
    def is_commutative(self) -> bool:
        return self.kind == COMMUTATIVE

    @property
    def cluster_tolerance(self) -> float:
        return CLUSTER_FACTOR * self.tolerance

    def element(self, entries) -> "HermitianElement":
        return make_element(self, entries)

    def identity(self) -> "HermitianElement":
        if self.is_commutative:
            return HermitianElement(self, np.ones(self.size))
        return HermitianElement(self, np.eye(self.size, dtype=complex))

    def zero(self) -> "HermitianElement":
        if self.is_commutative:
            return HermitianElement(self, np.zeros(self.size))
        return HermitianElement(self, np.zeros((self.size, self.size), dtype=complex))

    def scalar(self, value: float) -> "HermitianElement":
        return self.identity() * value

    def same_as(self, other: "AlgebraHandle") -> bool:
        return self.kind == other.kind and self.size == other.size


def check_same_algebra(*algebras: AlgebraHandle) -> None:
    """Raise AlgebraMismatchError unless all handles describe the same algebra"""
    first = algebras[0]
    for other in algebras[1:]:
        if not first.same_as(other):
            raise AlgebraMismatchError(
                f"Algebra mismatch: {first.kind}({first.size}) vs {other.kind}({other.size})"
            )


@dataclass(frozen=True, eq=False)
class HermitianElement:
    """A self-adjoint element; entries are a real vector or a Hermitian matrix"""
    algebra: AlgebraHandle
    entries: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        """Dense complex matrix form (diagonal for the commutative kind)"""
        if self.algebra.is_commutative:
            return np.diag(self.entries).astype(complex)
        return self.entries

    def _wrap(self, entries) -> "HermitianElement":
        return HermitianElement(self.algebra, entries)

    def __add__(self, other: "HermitianElement") -> "HermitianElement":
        check_same_algebra(self.algebra, other.algebra)
        return self._wrap(self.entries + other.entries)

    def __sub__(self, other: "HermitianElement") -> "HermitianElement":
        check_same_algebra(self.algebra, other.algebra)
        return self._wrap(self.entries - other.entries)

    def __neg__(self) -> "HermitianElement":
        return self._wrap(-self.entries)

    def __mul__(self, scalar: float) -> "HermitianElement":
        return self._wrap(self.entries * float(scalar))

    __rmul__ = __mul__

    def square(self) -> "HermitianElement":
        if self.algebra.is_commutative:
            return self._wrap(self.entries ** 2)
        return self._wrap(_hermitize(self.entries @ self.entries))

    def norm(self) -> float:
        """Operator norm (largest absolute eigenvalue)"""
        if self.algebra.is_commutative:
            return float(np.max(np.abs(self.entries)))
        return float(np.max(np.abs(scipy.linalg.eigvalsh(self.entries))))

    def close_to(self, other: "HermitianElement", tol: Optional[float] = None) -> bool:
        check_same_algebra(self.algebra, other.algebra)
        tol = self.algebra.tolerance if tol is None else tol
        return bool(np.max(np.abs(self.entries - other.entries)) <= tol)


def _hermitize(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def make_element(algebra: AlgebraHandle, entries) -> HermitianElement:
    """Validate raw entries and wrap them as a HermitianElement"""
    if algebra.is_commutative:
        values = np.asarray(entries)
        if values.shape != (algebra.size,):
            raise AlgebraMismatchError(f"Expected {algebra.size} values, got shape {values.shape}")
        if np.iscomplexobj(values):
            if np.max(np.abs(values.imag), initial=0.0) > algebra.tolerance:
                raise NotHermitianError("Commutative entries must be real")
            values = values.real
        return HermitianElement(algebra, values.astype(float))

    m = np.asarray(entries, dtype=complex)
    if m.shape != (algebra.size, algebra.size):
        raise AlgebraMismatchError(f"Expected a {algebra.size}x{algebra.size} matrix, got {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    if np.max(np.abs(m - m.conj().T), initial=0.0) > algebra.tolerance * scale:
        raise NotHermitianError("Matrix is not Hermitian within tolerance")
    return HermitianElement(algebra, _hermitize(m))


def from_matrix(algebra: AlgebraHandle, m: np.ndarray) -> HermitianElement:
    """Wrap a dense matrix produced internally, symmetrizing away roundoff"""
    if algebra.is_commutative:
        return HermitianElement(algebra, np.real(np.diag(m)).astype(float))
    return HermitianElement(algebra, _hermitize(np.asarray(m, dtype=complex)))


def eigh(x: HermitianElement) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors as columns"""
    if x.algebra.is_commutative:
        order = np.argsort(x.entries, kind="stable")
        vecs = np.eye(x.algebra.size, dtype=complex)[:, order]
        return x.entries[order].copy(), vecs
    return scipy.linalg.eigh(x.entries)


def min_eigenvalue(x: HermitianElement) -> float:
    if x.algebra.is_commutative:
        return float(np.min(x.entries))
    return float(scipy.linalg.eigvalsh(x.entries)[0])


def max_eigenvalue(x: HermitianElement) -> float:
    if x.algebra.is_commutative:
        return float(np.max(x.entries))
    return float(scipy.linalg.eigvalsh(x.entries)[-1])


def is_positive(x: HermitianElement) -> bool:
    """Membership in the positive cone, up to -tolerance"""
    return min_eigenvalue(x) >= -x.algebra.tolerance


def require_positive(x: HermitianElement, what: str = "element") -> None:
    if not is_positive(x):
        raise NotPositiveError(f"{what} is not positive (least eigenvalue {min_eigenvalue(x):.3e})")


def leq(x: HermitianElement, y: HermitianElement) -> bool:
    """Order of the algebra: x <= y iff y - x is positive"""
    return is_positive(y - x)


_FUNCTIONS = {
    "sqrt": lambda v: np.sqrt(np.clip(v, 0.0, None)),
    "square": lambda v: v ** 2,
}


def func_calc(x: HermitianElement, f: Union[str, Callable[[np.ndarray], np.ndarray]]) -> HermitianElement:
    """Continuous functional calculus U f(L) U* from the eigendecomposition"""
    if isinstance(f, str):
        if f not in _FUNCTIONS:
            raise OplatError(f"Unknown function: {f}")
        if f == "sqrt":
            require_positive(x, "sqrt argument")
        fn = _FUNCTIONS[f]
    else:
        fn = f

    if x.algebra.is_commutative:
        return HermitianElement(x.algebra, np.asarray(fn(x.entries), dtype=float))
    vals, vecs = eigh(x)
    return from_matrix(x.algebra, (vecs * fn(vals)) @ vecs.conj().T)


def positive_part(x: HermitianElement) -> HermitianElement:
    return func_calc(x, lambda v: np.clip(v, 0.0, None))


def negative_part(x: HermitianElement) -> HermitianElement:
    return func_calc(x, lambda v: np.clip(-v, 0.0, None))


def jordan_product(x: HermitianElement, y: HermitianElement) -> HermitianElement:
    """(xy + yx) / 2"""
    check_same_algebra(x.algebra, y.algebra)
    if x.algebra.is_commutative:
        return HermitianElement(x.algebra, x.entries * y.entries)
    return from_matrix(x.algebra, (x.entries @ y.entries + y.entries @ x.entries) / 2)


def lie_product(x: HermitianElement, y: HermitianElement) -> HermitianElement:
    """i[x, y], the self-adjoint commutator"""
    check_same_algebra(x.algebra, y.algebra)
    if x.algebra.is_commutative:
        return x.algebra.zero()
    return from_matrix(x.algebra, 1j * (x.entries @ y.entries - y.entries @ x.entries))


def cluster_eigenvalues(values: np.ndarray, tolerance: float) -> List[Tuple[float, List[int]]]:
    """Group eigenvalues whose consecutive gaps are within CLUSTER_FACTOR * tolerance.

    Returns (cluster mean, indices) pairs in ascending order of value.
    """
    order = np.argsort(values, kind="stable")
    clusters: List[List[int]] = []
    for idx in order:
        if clusters and values[idx] - values[clusters[-1][-1]] <= CLUSTER_FACTOR * tolerance:
            clusters[-1].append(int(idx))
        else:
            clusters.append([int(idx)])
    return [(float(np.mean(values[c])), c) for c in clusters]


@dataclass(frozen=True, eq=False)
class ProjectionElement:
    """An orthogonal projection with cached rank and range basis"""
    base: HermitianElement
    rank: int
    range_basis: np.ndarray

    @property
    def algebra(self) -> AlgebraHandle:
        return self.base.algebra

    @property
    def matrix(self) -> np.ndarray:
        return self.base.matrix

    def complement(self) -> "ProjectionElement":
        return projection_from_matrix(self.algebra, np.eye(self.algebra.size) - self.matrix)

    def close_to(self, other: "ProjectionElement", tol: Optional[float] = None) -> bool:
        return self.base.close_to(other.base, tol)

    def is_zero(self) -> bool:
        return self.rank == 0

    def is_identity(self) -> bool:
        return self.rank == self.algebra.size


def projection_from_basis(algebra: AlgebraHandle, basis: np.ndarray) -> ProjectionElement:
    """Projection onto the span of the given columns"""
    basis = np.asarray(basis, dtype=complex).reshape(algebra.size, -1)
    if basis.shape[1] == 0:
        q = np.zeros((algebra.size, 0), dtype=complex)
    else:
        q = scipy.linalg.orth(basis)
    return projection_from_matrix(algebra, q @ q.conj().T)


def projection_from_matrix(algebra: AlgebraHandle, m: np.ndarray) -> ProjectionElement:
    """Round the spectrum of a near-projection to {0, 1}"""
    m = _hermitize(np.asarray(m, dtype=complex))
    if algebra.is_commutative:
        mask = np.real(np.diag(m)) >= 0.5
        entries = mask.astype(float)
        basis = np.eye(algebra.size, dtype=complex)[:, mask]
        return ProjectionElement(HermitianElement(algebra, entries), int(mask.sum()), basis)
    vals, vecs = scipy.linalg.eigh(m)
    basis = vecs[:, vals >= 0.5]
    p = basis @ basis.conj().T
    return ProjectionElement(HermitianElement(algebra, _hermitize(p)), basis.shape[1], basis)


def as_projection(x: HermitianElement) -> ProjectionElement:
    """Validate that x is idempotent and wrap it"""
    tol = max(x.algebra.tolerance, 1e-12)
    if np.max(np.abs(x.square().entries - x.entries)) > tol * max(1.0, x.algebra.size):
        raise OplatError("Element is not a projection")
    return projection_from_matrix(x.algebra, x.matrix)


def zero_projection(algebra: AlgebraHandle) -> ProjectionElement:
    return projection_from_matrix(algebra, np.zeros((algebra.size, algebra.size)))


def identity_projection(algebra: AlgebraHandle) -> ProjectionElement:
    return projection_from_matrix(algebra, np.eye(algebra.size))


def support_projection(x: HermitianElement) -> ProjectionElement:
    """Smallest projection p with px = xp = x"""
    require_positive(x, "support argument")
    vals, vecs = eigh(x)
    return projection_from_basis(x.algebra, vecs[:, vals > x.algebra.cluster_tolerance])


def spectral_projections(
    x: HermitianElement, alpha: float, beta: float
) -> Tuple[ProjectionElement, ProjectionElement, ProjectionElement]:
    """Return (p_{x,alpha}, p_x^alpha, p_x^{alpha,beta}).

    p_{x,alpha} is the part of the support where x <= alpha, p_x^alpha the
    part where x >= alpha and p_x^{alpha,beta} = (1 - p_x^beta) p_x^alpha.
    """
    if alpha > beta:
        raise OplatError(f"alpha ({alpha}) must not exceed beta ({beta})")
    require_positive(x, "spectral argument")
    c = x.algebra.cluster_tolerance
    vals, vecs = eigh(x)
    below = (vals > c) & (vals <= alpha + c)
    above = vals >= alpha - c
    band = above & (vals < beta - c)
    return (
        projection_from_basis(x.algebra, vecs[:, below]),
        projection_from_basis(x.algebra, vecs[:, above]),
        projection_from_basis(x.algebra, vecs[:, band]),
    )


def chain_decomposition(x: HermitianElement) -> List[Tuple[float, ProjectionElement]]:
    """The unique x = sum alpha_k p_k with 0 < p_1 < ... < p_n and alpha_k > 0"""
    require_positive(x, "chain argument")
    vals, vecs = eigh(x)
    clusters = [
        (value, idx)
        for value, idx in cluster_eigenvalues(vals, x.algebra.tolerance)
        if value > x.algebra.cluster_tolerance
    ]
    clusters.reverse()

    chain = []
    collected: List[int] = []
    for k, (value, idx) in enumerate(clusters):
        collected.extend(idx)
        next_value = clusters[k + 1][0] if k + 1 < len(clusters) else 0.0
        chain.append((value - next_value, projection_from_basis(x.algebra, vecs[:, collected])))
    return chain


def reassemble(chain: Sequence[Tuple[float, ProjectionElement]], algebra: AlgebraHandle) -> HermitianElement:
    total = algebra.zero()
    for alpha, p in chain:
        total = total + p.base * alpha
    return total


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix"""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_hermitian(algebra: AlgebraHandle, rng: np.random.Generator, scale: float = 1.0) -> HermitianElement:
    if algebra.is_commutative:
        return HermitianElement(algebra, scale * rng.standard_normal(algebra.size))
    n = algebra.size
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return from_matrix(algebra, scale * (z + z.conj().T) / 2)


def random_positive(
    algebra: AlgebraHandle, rng: np.random.Generator, rank: Optional[int] = None, scale: float = 1.0
) -> HermitianElement:
    if algebra.is_commutative:
        values = scale * rng.random(algebra.size)
        if rank is not None:
            values[rng.permutation(algebra.size)[rank:]] = 0.0
        return HermitianElement(algebra, values)
    n = algebra.size
    r = n if rank is None else rank
    g = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
    return from_matrix(algebra, scale * (g @ g.conj().T) / max(r, 1))


def random_projection(algebra: AlgebraHandle, rng: np.random.Generator, rank: int) -> ProjectionElement:
    if algebra.is_commutative:
        mask = np.zeros(algebra.size)
        mask[rng.permutation(algebra.size)[:rank]] = 1.0
        return projection_from_matrix(algebra, np.diag(mask))
    u = random_unitary(algebra.size, rng)
    return projection_from_basis(algebra, u[:, :rank])


def projection_pair_with_angle(
    algebra: AlgebraHandle, angle: float, rng: np.random.Generator
) -> Tuple[ProjectionElement, ProjectionElement]:
    """Two rank-1 projections whose ranges meet at the given principal angle"""
    if algebra.is_commutative or algebra.size < 2:
        raise OplatError("Angle pairs need a matrix algebra of dimension >= 2")
    u = random_unitary(algebra.size, rng)
    first, second = u[:, 0], u[:, 1]
    tilted = np.cos(angle) * first + np.sin(angle) * second
    return projection_from_basis(algebra, first), projection_from_basis(algebra, tilted)


def hermitian_basis(algebra: AlgebraHandle) -> List[HermitianElement]:
    """A real basis of the self-adjoint part"""
    n = algebra.size
    if algebra.is_commutative:
        return [HermitianElement(algebra, np.eye(n)[i]) for i in range(n)]
    basis = []
    for i in range(n):
        for j in range(i, n):
            m = np.zeros((n, n), dtype=complex)
            if i == j:
                m[i, i] = 1.0
                basis.append(HermitianElement(algebra, m))
                continue
            m[i, j] = m[j, i] = 1.0
            basis.append(HermitianElement(algebra, m.copy()))
            m[i, j], m[j, i] = 1j, -1j
            basis.append(HermitianElement(algebra, m))
    return basis
