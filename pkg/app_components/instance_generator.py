import logging
from typing import Any, Dict, List, Optional

import numpy as np

from utils.algebra_core import (
    COMMUTATIVE,
    MATRIX,
    AlgebraHandle,
    HermitianElement,
    projection_pair_with_angle,
    random_positive,
)
from utils.errors import OplatError
from utils.file_operations import basic_to_json, complex_matrix_to_json, pmap_to_json, poset_to_json
from utils.lattice_completion import BASIC, BasicElement, LatticeElement
from utils.pmap import SurjectionSpec, coherent_lift
from utils.poset_completion import FinitePoset, poset_from_pairs
from utils.projection_lattice import principal_angles

logger = logging.getLogger(__name__)

GRID = np.arange(-3, 4)
KINDS = ("basic-element", "projection-pair", "pmap-table", "poset")


def grid_element(algebra: AlgebraHandle, rng: np.random.Generator) -> HermitianElement:
    """A tuple with small integer entries, so commutative checks stay exact"""
    return HermitianElement(algebra, rng.choice(GRID, size=algebra.size).astype(float))


def random_grid_basic(algebra: AlgebraHandle, rng: np.random.Generator, max_gens: int = 3) -> BasicElement:
    gens = tuple(grid_element(algebra, rng) for _ in range(int(rng.integers(1, max_gens + 1))))
    return BasicElement(algebra, gens, BASIC)


def random_grid_lattice(algebra: AlgebraHandle, rng: np.random.Generator) -> LatticeElement:
    return LatticeElement(random_grid_basic(algebra, rng), random_grid_basic(algebra, rng))


def random_positive_basic(
    algebra: AlgebraHandle, rng: np.random.Generator, max_gens: int = 2, unit_spectrum: bool = False
) -> BasicElement:
    """Positive generators; with unit_spectrum their spectra lie in [0, 1]"""
    gens = []
    for _ in range(int(rng.integers(1, max_gens + 1))):
        g = random_positive(algebra, rng)
        if unit_spectrum:
            g = g * (1.0 / max(g.norm(), 1.0))
        gens.append(g)
    return BasicElement(algebra, tuple(gens), BASIC)


def random_poset(n: int, rng: np.random.Generator, density: float = 0.3) -> FinitePoset:
    """Random order: relations i < j for i < j drawn independently, then closed"""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return poset_from_pairs(n, pairs)


def random_surjection(x_size: int, rng: np.random.Generator, y_size: Optional[int] = None) -> SurjectionSpec:
    """Random classes covering X except possibly some free points"""
    if y_size is None:
        y_size = int(rng.integers(1, x_size + 1))
    points = list(rng.permutation(x_size))
    classes = [[int(points[y])] for y in range(y_size)]
    for x in points[y_size:]:
        if rng.random() < 0.8:
            classes[int(rng.integers(0, y_size))].append(int(x))
    return SurjectionSpec(x_size, tuple(tuple(c) for c in classes))


def _int_param(params: Dict[str, Any], name: str, default: int, low: int, high: int) -> int:
    try:
        value = int(params.get(name, default))
    except (TypeError, ValueError) as e:
        raise OplatError(f"Parameter {name} must be an integer") from e
    if not low <= value <= high:
        raise OplatError(f"Parameter {name} must lie in [{low}, {high}], got {value}")
    return value


def gen_instance(kind: str, params: Dict[str, Any], seed: int) -> Dict[str, Any]:
    """A reproducible instance in the module file formats"""
    rng = np.random.default_rng(seed)
    if kind == "basic-element":
        size = _int_param(params, "spectrum", 3, 1, 8)
        algebra = AlgebraHandle(params.get("algebra", COMMUTATIVE), size)
        gens = _int_param(params, "gens", 2, 1, 8)
        if algebra.is_commutative:
            element = BasicElement(algebra, tuple(grid_element(algebra, rng) for _ in range(gens)), BASIC)
        else:
            element = BasicElement(algebra, tuple(random_positive(algebra, rng) for _ in range(gens)), BASIC)
        return basic_to_json(element)

    if kind == "projection-pair":
        dim = _int_param(params, "dim", 4, 2, 8)
        try:
            angle = float(params.get("angle", 0.3))
        except (TypeError, ValueError) as e:
            raise OplatError("Parameter angle must be a number") from e
        if not 0 <= angle <= np.pi / 2:
            raise OplatError("Parameter angle must lie in [0, pi/2]")
        p, q = projection_pair_with_angle(AlgebraHandle(MATRIX, dim), angle, rng)
        return {
            "p": complex_matrix_to_json(p.matrix),
            "q": complex_matrix_to_json(q.matrix),
            "angles": [float(a) for a in np.arccos(principal_angles(p, q))],
        }

    if kind == "pmap-table":
        lattice = str(params.get("lattice", "boolean-3"))
        if not lattice.startswith("boolean-"):
            raise OplatError(f"Unknown lattice: {lattice}")
        m = _int_param({"m": lattice.split("-", 1)[1]}, "m", 3, 1, 6)
        x_size = _int_param(params, "target", m, m, 6)
        return pmap_to_json(coherent_lift(random_surjection(x_size, rng, y_size=m)))

    if kind == "poset":
        return poset_to_json(random_poset(_int_param(params, "size", 5, 1, 8), rng))

    raise OplatError(f"Unknown instance kind: {kind}")


def parse_params(items: Optional[List[str]]) -> Dict[str, str]:
    """key=value strings from the command line"""
    params = {}
    for item in items or []:
        if "=" not in item:
            raise OplatError(f"Expected key=value, got {item!r}")
        key, value = item.split("=", 1)
        params[key.strip()] = value.strip()
    return params
