import json
import logging
import os.path
from typing import Any, Dict, Optional

import numpy as np

from utils.algebra_core import COMMUTATIVE, MATRIX, AlgebraHandle, HermitianElement, ProjectionElement, as_projection
from utils.errors import OplatError
from utils.lattice_completion import BasicElement
from utils.pmap import PMapTable, normalize_decoration
from utils.pmap_obstructions import ForcingChain, ObstructionWitness
from utils.poset_completion import FinitePoset, poset_from_pairs

logger = logging.getLogger(__name__)


def load_json(filepath: str) -> Any:
    """Load JSON data from a file, reporting the file name on failure"""
    try:
        with open(filepath, "r") as file:
            return json.load(file)
    except json.JSONDecodeError as e:
        raise OplatError(f"Error parsing {filepath}: {e}") from e
    except OSError as e:
        raise OplatError(f"Error loading file {filepath}: {e}") from e


def load_file_if_exists(filepath: str) -> Optional[Any]:
    """Load data from a file if it exists"""
    if os.path.isfile(filepath):
        return load_json(filepath)
    return None


def save_json(data: Any, filepath: str) -> None:
    with open(filepath, "w") as file:
        json.dump(data, file, indent=2, sort_keys=True)
    logger.info("wrote %s", filepath)


def complex_matrix_to_json(m: np.ndarray) -> Dict[str, Any]:
    m = np.asarray(m, dtype=complex)
    return {"dim": int(m.shape[0]), "entries": [[float(v.real), float(v.imag)] for v in m.ravel()]}


def complex_matrix_from_json(data: Dict[str, Any]) -> np.ndarray:
    try:
        n = int(data["dim"])
        pairs = np.asarray(data["entries"], dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise OplatError(f"Malformed matrix record: {e}") from e
    if pairs.shape != (n * n, 2):
        raise OplatError(f"Matrix record of dimension {n} needs {n * n} [re, im] pairs")
    return (pairs[:, 0] + 1j * pairs[:, 1]).reshape(n, n)


def element_to_json(x: HermitianElement) -> Dict[str, Any]:
    """Matrices as {"dim", "entries"}, tuples as {"spectrum", "values"}"""
    if x.algebra.is_commutative:
        return {"spectrum": x.algebra.size, "values": [float(v) for v in x.entries]}
    return complex_matrix_to_json(x.entries)


def element_from_json(data: Dict[str, Any], tolerance: Optional[float] = None) -> HermitianElement:
    extra = {} if tolerance is None else {"tolerance": tolerance}
    if "spectrum" in data:
        algebra = AlgebraHandle(COMMUTATIVE, int(data["spectrum"]), **extra)
        return algebra.element(np.asarray(data.get("values", []), dtype=float))
    m = complex_matrix_from_json(data)
    return AlgebraHandle(MATRIX, m.shape[0], **extra).element(m)


def projection_from_json(data: Dict[str, Any]) -> ProjectionElement:
    return as_projection(element_from_json(data))


def basic_to_json(c: BasicElement) -> Dict[str, Any]:
    return {
        "algebra": {"kind": c.algebra.kind, "size": c.algebra.size},
        "polarity": c.polarity,
        "generators": [element_to_json(g) for g in c.generators],
    }


def basic_from_json(data: Dict[str, Any]) -> BasicElement:
    try:
        spec = data["algebra"]
        algebra = AlgebraHandle(spec["kind"], int(spec["size"]))
        gens = tuple(element_from_json(g) for g in data["generators"])
        return BasicElement(algebra, gens, data.get("polarity", "basic"))
    except (KeyError, TypeError) as e:
        raise OplatError(f"Malformed basic element record: {e}") from e


def poset_to_json(poset: FinitePoset) -> Dict[str, Any]:
    pairs = [[i, j] for i in range(poset.size) for j in range(poset.size) if i != j and poset.leq(i, j)]
    return {"size": poset.size, "pairs": pairs}


def poset_from_json(data: Dict[str, Any]) -> FinitePoset:
    try:
        return poset_from_pairs(int(data["size"]), [tuple(p) for p in data.get("pairs", [])])
    except (KeyError, TypeError) as e:
        raise OplatError(f"Malformed poset record: {e}") from e


def pmap_to_json(s: PMapTable) -> Dict[str, Any]:
    return {
        "domain": [element_to_json(p.base) for p in s.domain],
        "values": [element_to_json(v.base) for v in s.values],
        "decorations": sorted(s.decorations),
    }


def pmap_from_json(data: Dict[str, Any]) -> PMapTable:
    try:
        domain = tuple(projection_from_json(p) for p in data["domain"])
        values = tuple(projection_from_json(v) for v in data["values"])
        decorations = frozenset(normalize_decoration(d) for d in data.get("decorations", []))
    except (KeyError, TypeError) as e:
        raise OplatError(f"Malformed pmap table record: {e}") from e
    return PMapTable(domain, values, decorations=decorations)


def load_pmap_table(filepath: str) -> PMapTable:
    return pmap_from_json(load_json(filepath))


def matrices_to_json(matrices: Dict[str, np.ndarray]) -> Dict[str, Any]:
    """Named witness matrices in the element format"""
    return {name: complex_matrix_to_json(m) for name, m in matrices.items()}


def forcing_chain_to_json(chain: ForcingChain) -> Dict[str, Any]:
    return {
        "conjugators": [complex_matrix_to_json(u) for u in chain.conjugators],
        "dominating": [complex_matrix_to_json(p) for p in chain.dominating],
        "values": [complex_matrix_to_json(v) for v in chain.values],
    }


def obstruction_to_json(witness: ObstructionWitness) -> Dict[str, Any]:
    """The basis, one forcing chain per minimal projection and the verification errors"""
    return {
        "k": witness.k,
        "basis": complex_matrix_to_json(witness.basis),
        "chains": [forcing_chain_to_json(chain) for chain in witness.chains],
        "orthogonality_error": float(witness.orthogonality_error),
        "sum_error": float(witness.sum_error),
    }
