import numpy as np
import pytest

from app_components.instance_generator import (
    KINDS,
    gen_instance,
    parse_params,
    random_poset,
    random_positive_basic,
    random_surjection,
)
from utils.algebra_core import MATRIX, AlgebraHandle, is_positive
from utils.errors import OplatError
from utils.file_operations import basic_from_json, complex_matrix_from_json, pmap_from_json, poset_from_json


@pytest.mark.parametrize("kind", KINDS)
def test_instances_are_reproducible(kind):
    assert gen_instance(kind, {}, 5) == gen_instance(kind, {}, 5)


def test_basic_element_instance():
    c = basic_from_json(gen_instance("basic-element", {"spectrum": "4", "gens": "3"}, 1))
    assert c.algebra.size == 4 and len(c.generators) == 3
    assert all(float(v).is_integer() for g in c.generators for v in g.entries)


def test_matrix_basic_element_is_positive():
    c = basic_from_json(gen_instance("basic-element", {"algebra": "matrix", "spectrum": "3"}, 1))
    assert c.algebra.kind == MATRIX
    assert all(is_positive(g) for g in c.generators)


def test_projection_pair_instance_has_the_requested_angle():
    data = gen_instance("projection-pair", {"dim": "3", "angle": "0.3"}, 2)
    p = complex_matrix_from_json(data["p"])
    assert np.allclose(p @ p, p)
    assert data["angles"] == pytest.approx([0.3], abs=1e-8)


def test_pmap_table_instance_decodes():
    table = pmap_from_json(gen_instance("pmap-table", {"lattice": "boolean-2", "target": "4"}, 3))
    assert len(table.domain) == 4
    assert table.codomain.size == 4
    assert "c" in table.decorations


def test_poset_instance_decodes():
    assert poset_from_json(gen_instance("poset", {"size": "6"}, 4)).size == 6


@pytest.mark.parametrize(
    "kind, params",
    [
        ("poset", {"size": "20"}),
        ("basic-element", {"gens": "x"}),
        ("projection-pair", {"angle": "2"}),
        ("pmap-table", {"lattice": "chain-3"}),
        ("matrix", {}),
    ],
)
def test_bad_instance_requests(kind, params):
    with pytest.raises(OplatError):
        gen_instance(kind, params, 0)


def test_parse_params():
    assert parse_params(["dim=3", " angle = 0.5"]) == {"dim": "3", "angle": "0.5"}
    assert parse_params(None) == {}
    with pytest.raises(OplatError):
        parse_params(["dim"])


def test_random_helpers():
    rng = np.random.default_rng(8)
    spec = random_surjection(5, rng, y_size=3)
    assert spec.y_size == 3
    assert random_poset(4, rng).size == 4
    unit = random_positive_basic(AlgebraHandle(MATRIX, 3), rng, unit_spectrum=True)
    assert all(g.norm() <= 1.0 + 1e-12 for g in unit.generators)
