"""Finite witnesses that certain monotone extensions and unitary lifts cannot exist."""
import logging
from dataclasses import dataclass
from typing import List, Mapping, Optional, Tuple

import numpy as np

from utils.algebra_core import MATRIX, AlgebraHandle, projection_from_basis, random_unitary
from utils.errors import OplatError, SignatureTieError
from utils.pmap_filters import Signature
from utils.projection_lattice import wedge_exact

logger = logging.getLogger(__name__)

GAMMA_SEED = 0xC0FFEE
WINDING_GRID = 2 ** 16
ENTANGLEMENT_TOLERANCE = 1e-6
FORCING_ATTEMPTS = 200


def _ray(v: np.ndarray, k: int) -> np.ndarray:
    """Projection onto the span of v in C^k, zero for a vanishing v"""
    norm = np.linalg.norm(v)
    if norm <= ENTANGLEMENT_TOLERANCE:
        return np.zeros((k, k), dtype=complex)
    u = v / norm
    return np.outer(u, u.conj())


def schmidt_coefficients(xi: np.ndarray, k: int) -> np.ndarray:
    return np.linalg.svd(np.asarray(xi, dtype=complex).reshape(2, k), compute_uv=False)


@dataclass(frozen=True, eq=False)
class ForcingChain:
    """Two dominating product-type projections whose retraction values differ"""
    conjugators: Tuple[np.ndarray, np.ndarray]
    dominating: Tuple[np.ndarray, np.ndarray]
    values: Tuple[np.ndarray, np.ndarray]


@dataclass(frozen=True, eq=False)
class ForcingReport:
    forced: bool
    chain: Optional[ForcingChain]
    value: Optional[np.ndarray]
    attempts: int


def _dominating(xi: np.ndarray, k: int, u: np.ndarray, sig: Signature) -> Tuple[np.ndarray, np.ndarray]:
    """P_U = p_U ⊗ [a] + p_U^c ⊗ [b] with xi = u_0 ⊗ a + u_1 ⊗ b, and its retraction value"""
    rows = xi.reshape(2, k)
    a = u[:, 0].conj() @ rows
    b = u[:, 1].conj() @ rows
    p_u = np.outer(u[:, 0], u[:, 0].conj())
    p_c = np.outer(u[:, 1], u[:, 1].conj())
    dominating = np.kron(p_u, _ray(a, k)) + np.kron(p_c, _ray(b, k))

    algebra = AlgebraHandle(MATRIX, 2)
    upper = sig.is_positive(projection_from_basis(algebra, u[:, :1]))
    value = _ray(a, k) if upper else _ray(b, k)
    return dominating, value


def force_minimal_projection(
    xi: np.ndarray, k: int, sig: Signature, rng: np.random.Generator, attempts: int = FORCING_ATTEMPTS
) -> ForcingReport:
    """Try to force a monotone extension of the product retraction to send [xi] to 0.

    Each conjugator U rewrites xi along the basis U of C^2 and gives a
    product-type projection above [xi]; two different values below force 0.
    For product vectors every U gives the same value, which is returned.
    """
    xi = np.asarray(xi, dtype=complex).ravel()
    xi = xi / np.linalg.norm(xi)
    left, s, right = np.linalg.svd(xi.reshape(2, k))
    if s[1] <= ENTANGLEMENT_TOLERANCE:
        # [xi] = [u] ⊗ [c] lies in the product lattice; its retraction is tau([u]) [c]
        factor = projection_from_basis(AlgebraHandle(MATRIX, 2), left[:, :1])
        c = right[0]
        value = _ray(c, k) if sig.is_positive(factor) else np.zeros((k, k), dtype=complex)
        return ForcingReport(False, None, value, 0)

    seen: List[Tuple[np.ndarray, np.ndarray, np.ndarray]] = []
    for attempt in range(1, attempts + 1):
        u = random_unitary(2, rng)
        try:
            dominating, value = _dominating(xi, k, u, sig)
        except SignatureTieError:
            continue
        if np.linalg.norm(dominating @ xi - xi) > 1e-8:
            raise OplatError("Constructed projection does not dominate the minimal projection")
        for u0, d0, v0 in seen:
            if np.max(np.abs(v0 - value)) > 1e-6:
                meet = wedge_exact(*(projection_from_basis(AlgebraHandle(MATRIX, k), _range(v)) for v in (v0, value)))
                if meet.is_zero():
                    return ForcingReport(True, ForcingChain((u0, u), (d0, dominating), (v0, value)), None, attempt)
        seen.append((u, dominating, value))
    value = seen[0][2] if seen else None
    return ForcingReport(False, None, value, attempts)


def _range(p: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh((p + p.conj().T) / 2)
    return vecs[:, vals > 0.5]


@dataclass(frozen=True, eq=False)
class ObstructionWitness:
    k: int
    basis: np.ndarray
    chains: List[ForcingChain]
    orthogonality_error: float
    sum_error: float

    @property
    def projections(self) -> List[np.ndarray]:
        return [np.outer(self.basis[:, j], self.basis[:, j].conj()) for j in range(self.basis.shape[1])]

    @property
    def verified(self) -> bool:
        return (
            len(self.chains) == 2 * self.k
            and self.orthogonality_error <= 1e-10
            and self.sum_error <= 1e-10
        )


def _entangled_basis(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    for _ in range(100):
        w = random_unitary(n, rng)
        if all(schmidt_coefficients(w[:, j], k)[1] > ENTANGLEMENT_TOLERANCE for j in range(n)):
            return w
    raise OplatError("Could not draw an entangled orthonormal basis")


def gamma_counterexample(k: int, sig: Signature, seed: int = GAMMA_SEED) -> ObstructionWitness:
    """An orthonormal basis of C^2 ⊗ C^k whose minimal projections are all forced to 0.

    Any monotone extension of the product retraction then sends 1 = sum r_j
    to 0, so no such extension exists.
    """
    if not 2 <= k <= 4:
        raise OplatError("gamma_counterexample supports 2 <= k <= 4")
    if sig.dim != 2:
        raise OplatError("The signature must live on the 2x2 factor")
    rng = np.random.default_rng(seed)
    n = 2 * k
    basis = _entangled_basis(n, k, rng)

    chains = []
    for j in range(n):
        report = force_minimal_projection(basis[:, j], k, sig, rng)
        if not report.forced:
            raise OplatError(f"Minimal projection {j} was not forced; redraw the conjugators")
        chains.append(report.chain)

    projections = [np.outer(basis[:, j], basis[:, j].conj()) for j in range(n)]
    orth = max(
        (float(np.max(np.abs(projections[i] @ projections[j]))) for i in range(n) for j in range(n) if i != j),
        default=0.0,
    )
    total = float(np.max(np.abs(sum(projections) - np.eye(n))))
    logger.info("gamma witness: %d forced projections, sum error %.2e", n, total)
    return ObstructionWitness(k, basis, chains, orth, total)


def _evaluate(coefficients: Mapping[int, complex], z: np.ndarray) -> np.ndarray:
    out = np.zeros_like(z)
    for power, c in coefficients.items():
        out = out + complex(c) * z ** int(power)
    return out


def winding_obstruction(coefficients: Mapping[int, complex], grid: int = WINDING_GRID, tol: float = 1e-9) -> int:
    """Winding number around 0 of the trigonometric polynomial sum c_k z^k on the unit circle"""
    if not coefficients:
        raise OplatError("Empty symbol")
    theta = np.linspace(0.0, 2 * np.pi, grid + 1)
    values = _evaluate(coefficients, np.exp(1j * theta))
    scale = max(1.0, float(np.max(np.abs(values))))
    if np.min(np.abs(values)) <= tol * scale:
        raise OplatError("Symbol vanishes on the unit circle")
    total = np.unwrap(np.angle(values))
    turns = (total[-1] - total[0]) / (2 * np.pi)
    winding = int(round(turns))
    if abs(turns - winding) > 1e-6:
        raise OplatError("Grid too coarse to resolve the winding number")
    return winding


def toeplitz_index(coefficients: Mapping[int, complex], grid: int = WINDING_GRID) -> int:
    """Fredholm index of the Toeplitz operator with this symbol"""
    return -winding_obstruction(coefficients, grid)
