"""Completion of finite partially ordered sets by complemented subsets (cuts).

Subsets are stored as integer bitmasks; bit i stands for element i.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Sequence

import numpy as np

from utils.errors import PosetError

logger = logging.getLogger(__name__)

POSET_BOUND = 16


@dataclass(frozen=True, eq=False)
class FinitePoset:
    """relation[i, j] is True iff i <= j"""
    size: int
    relation: np.ndarray

    def __post_init__(self):
        rel = self.relation
        if self.size < 1 or rel.shape != (self.size, self.size):
            raise PosetError("Relation table must be square and nonempty")
        if not np.all(np.diag(rel)):
            raise PosetError("Relation is not reflexive")
        if np.any(rel & rel.T & ~np.eye(self.size, dtype=bool)):
            raise PosetError("Relation is not antisymmetric")
        closure = (rel.astype(int) @ rel.astype(int)) > 0
        if np.any(closure & ~rel):
            raise PosetError("Relation is not transitive")

    def leq(self, i: int, j: int) -> bool:
        return bool(self.relation[i, j])

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def down_mask(self, i: int) -> int:
        return _mask(np.flatnonzero(self.relation[:, i]))

    def up_mask(self, i: int) -> int:
        return _mask(np.flatnonzero(self.relation[i, :]))


def _mask(indices) -> int:
    out = 0
    for i in indices:
        out |= 1 << int(i)
    return out


def mask_members(mask: int, size: int) -> List[int]:
    return [i for i in range(size) if mask >> i & 1]


def transitive_closure(size: int, pairs: Sequence[Sequence[int]]) -> np.ndarray:
    rel = np.eye(size, dtype=bool)
    for i, j in pairs:
        if not (0 <= i < size and 0 <= j < size):
            raise PosetError(f"Pair ({i}, {j}) outside poset of size {size}")
        rel[i, j] = True
    for k in range(size):
        rel |= np.outer(rel[:, k], rel[k, :])
    return rel


def poset_from_pairs(size: int, pairs: Sequence[Sequence[int]]) -> FinitePoset:
    """Build the poset generated by pairs (i, j) meaning i <= j"""
    return FinitePoset(size, transitive_closure(size, pairs))


def chain(n: int) -> FinitePoset:
    return poset_from_pairs(n, [(i, i + 1) for i in range(n - 1)])


def antichain(n: int) -> FinitePoset:
    return poset_from_pairs(n, [])


def fence(n: int) -> FinitePoset:
    """Zigzag 0 < 1 > 2 < 3 > ..."""
    pairs = [(i, i + 1) if i % 2 == 0 else (i + 1, i) for i in range(n - 1)]
    return poset_from_pairs(n, pairs)


def enumerate_posets(n: int) -> Iterator[FinitePoset]:
    """All naturally labelled posets on n elements (every isomorphism class occurs)"""
    upper_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = set()
    for bits in itertools.product((False, True), repeat=len(upper_pairs)):
        rel = transitive_closure(n, [p for p, b in zip(upper_pairs, bits) if b])
        key = rel.tobytes()
        if key in seen:
            continue
        seen.add(key)
        yield FinitePoset(n, rel)


def lower_complement(poset: FinitePoset, subset: int) -> int:
    """Elements below every member of subset; the empty subset gives the whole set"""
    out = poset.full_mask
    for i in mask_members(subset, poset.size):
        out &= poset.down_mask(i)
    return out


def upper_complement(poset: FinitePoset, subset: int) -> int:
    """Elements above every member of subset; the empty subset gives the whole set"""
    out = poset.full_mask
    for i in mask_members(subset, poset.size):
        out &= poset.up_mask(i)
    return out


@dataclass(frozen=True)
class Cut:
    upper: int
    lower: int


@dataclass(frozen=True, eq=False)
class CompletionLattice:
    """Cuts ordered by reverse inclusion of their upper sets"""
    poset: FinitePoset
    cuts: List[Cut]
    leq: np.ndarray
    meet: np.ndarray
    join: np.ndarray
    embedding: List[int]

    @property
    def size(self) -> int:
        return len(self.cuts)

    @property
    def bottom(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=1))[0])

    @property
    def top(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=0))[0])

    def index_of_upper(self, upper: int) -> int:
        for k, cut in enumerate(self.cuts):
            if cut.upper == upper:
                return k
        raise PosetError("Upper set is not a cut")

    def join_all(self, indices: Sequence[int]) -> int:
        out = self.bottom
        for k in indices:
            out = int(self.join[out, k])
        return out

    def meet_all(self, indices: Sequence[int]) -> int:
        out = self.top
        for k in indices:
            out = int(self.meet[out, k])
        return out

    def as_poset(self) -> FinitePoset:
        return FinitePoset(self.size, self.leq.copy())


def build_completion(poset: FinitePoset, bound: int = POSET_BOUND) -> CompletionLattice:
    """Enumerate all cuts of poset and tabulate the lattice operations"""
    if poset.size > bound:
        raise PosetError(f"Poset of size {poset.size} exceeds the bound {bound}")

    uppers = set()
    for subset in range(1 << poset.size):
        uppers.add(upper_complement(poset, lower_complement(poset, subset)))
    # larger upper sets are smaller cuts; ties broken by mask value
    ordered = sorted(uppers, key=lambda m: (-bin(m).count("1"), m))
    cuts = [Cut(u, lower_complement(poset, u)) for u in ordered]
    index = {cut.upper: k for k, cut in enumerate(cuts)}

    n = len(cuts)
    leq = np.zeros((n, n), dtype=bool)
    meet = np.zeros((n, n), dtype=int)
    join = np.zeros((n, n), dtype=int)
    for a, ca in enumerate(cuts):
        for b, cb in enumerate(cuts):
            leq[a, b] = (ca.upper & cb.upper) == cb.upper
            join[a, b] = index[ca.upper & cb.upper]
            meet[a, b] = index[upper_complement(poset, ca.lower & cb.lower)]

    embedding = [index[poset.up_mask(s)] for s in range(poset.size)]
    logger.debug("completion of %d-element poset has %d cuts", poset.size, n)
    return CompletionLattice(poset, cuts, leq, meet, join, embedding)


def check_lattice_axioms(lattice: CompletionLattice) -> bool:
    """Meet and join tables are greatest lower and least upper bounds"""
    leq = lattice.leq
    n = lattice.size
    for a in range(n):
        for b in range(n):
            m, j = lattice.meet[a, b], lattice.join[a, b]
            if not (leq[m, a] and leq[m, b] and leq[a, j] and leq[b, j]):
                return False
            lower_bounds = leq[:, a] & leq[:, b]
            upper_bounds = leq[a, :] & leq[b, :]
            if not np.all(leq[lower_bounds, m]) or not np.all(leq[j, upper_bounds]):
                return False
    return True


def is_order_embedding(poset: FinitePoset, lattice: CompletionLattice) -> bool:
    emb = lattice.embedding
    return all(
        poset.leq(s, t) == bool(lattice.leq[emb[s], emb[t]])
        for s in range(poset.size)
        for t in range(poset.size)
    )


def completion_is_isomorphic(poset: FinitePoset, lattice: CompletionLattice) -> bool:
    """True iff the embedding is onto, i.e. poset already was its own completion"""
    return lattice.size == poset.size and is_order_embedding(poset, lattice)


def is_idempotent(poset: FinitePoset) -> bool:
    lattice = build_completion(poset)
    as_poset = lattice.as_poset()
    return completion_is_isomorphic(as_poset, build_completion(as_poset))


def _check_monotone_real(poset: FinitePoset, r: Callable[[int], float], name: str) -> None:
    for s in range(poset.size):
        for t in range(poset.size):
            if poset.leq(s, t) and r(s) > r(t):
                raise PosetError(f"{name} is not monotone")


def extend_monotone(
    poset: FinitePoset,
    lattice: CompletionLattice,
    partial: Dict[int, int],
    r_plus: Optional[Callable[[int], float]] = None,
    r_minus: Optional[Callable[[int], float]] = None,
) -> Dict[int, int]:
    """Extend a monotone map from a sub-poset to the whole poset.

    Each element goes to the join of the images of the sub-poset elements it
    dominates, clamped by the meet of the images of those dominating it.
    """
    for name, r in (("r_plus", r_plus), ("r_minus", r_minus)):
        if r is not None:
            _check_monotone_real(poset, r, name)

    for s, fs in partial.items():
        for t, ft in partial.items():
            if poset.leq(s, t) and not lattice.leq[fs, ft]:
                raise PosetError(f"Partial map is not monotone at ({s}, {t})")

    extension = {}
    for s in range(poset.size):
        below = [fv for t, fv in partial.items() if poset.leq(t, s)]
        above = [fv for t, fv in partial.items() if poset.leq(s, t)]
        extension[s] = int(lattice.meet[lattice.join_all(below), lattice.meet_all(above)])
    return extension


def is_monotone_map(poset: FinitePoset, lattice: CompletionLattice, mapping: Dict[int, int]) -> bool:
    return all(
        lattice.leq[mapping[s], mapping[t]]
        for s in mapping
        for t in mapping
        if poset.leq(s, t)
    )


def monotone_maps(poset: FinitePoset, subset: Sequence[int], lattice: CompletionLattice) -> Iterator[Dict[int, int]]:
    """Every monotone map from the sub-poset on subset into lattice"""
    subset = list(subset)
    chosen: Dict[int, int] = {}

    def fits(t: int, v: int) -> bool:
        return all(
            (not poset.leq(s, t) or lattice.leq[fs, v]) and (not poset.leq(t, s) or lattice.leq[v, fs])
            for s, fs in chosen.items()
        )

    def assign(k: int) -> Iterator[Dict[int, int]]:
        if k == len(subset):
            yield dict(chosen)
            return
        t = subset[k]
        for v in range(lattice.size):
            if fits(t, v):
                chosen[t] = v
                yield from assign(k + 1)
                del chosen[t]

    yield from assign(0)


@dataclass(frozen=True)
class ExtensionSweep:
    size: int
    posets: int
    pairs: int
    maps: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0


def extension_sweep(size: int, lattice: CompletionLattice) -> ExtensionSweep:
    """extend_monotone on every sub-poset of every poset of the given size, for every monotone map into lattice"""
    posets = pairs = maps = failures = 0
    for poset in enumerate_posets(size):
        posets += 1
        for mask in range(1 << size):
            pairs += 1
            for partial in monotone_maps(poset, mask_members(mask, size), lattice):
                maps += 1
                extension = extend_monotone(poset, lattice, partial)
                agrees = all(extension[s] == v for s, v in partial.items())
                if not (agrees and is_monotone_map(poset, lattice, extension)):
                    failures += 1
    if failures:
        logger.warning("monotone extension failed for %d of %d maps on %d-element posets", failures, maps, size)
    return ExtensionSweep(size, posets, pairs, maps, failures)
