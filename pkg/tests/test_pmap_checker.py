import json

import pytest

from app_components.pmap_checker import check_table, check_table_file, load_order, parse_decorations
from utils.errors import OplatError
from utils.file_operations import pmap_to_json, save_json
from utils.pmap import PMapTable, SurjectionSpec, boolean_domain, coherent_lift


def _saturating_table():
    domain = boolean_domain(2)
    return PMapTable(tuple(domain), (domain[0], domain[3], domain[3], domain[3]))


def test_decorations_default_to_the_claimed_ones():
    table = coherent_lift(SurjectionSpec(2, ((0,), (1,))))
    assert parse_decorations(None, table) == ["a", "a-vee", "a-wedge", "c"]
    assert parse_decorations("o, a∨", table) == ["o", "a-vee"]


def test_table_without_claims_needs_a_list():
    with pytest.raises(OplatError):
        parse_decorations("", _saturating_table())


def test_rows_count_failures():
    rows = check_table(_saturating_table(), ["o", "a"])
    by_check = {row["check"]: row for row in rows}
    assert not by_check["o"]["passed"] and by_check["o"]["value"] > 0
    assert by_check["a"]["passed"] and by_check["a"]["value"] == 0
    assert by_check["a"]["bound"] == 16


def test_order_files(tmp_path):
    path = tmp_path / "order.json"
    path.write_text(json.dumps([[0, 1], [1, 3]]))
    assert load_order(str(path)) == [(0, 1), (1, 3)]
    assert load_order(None) is None
    path.write_text(json.dumps([1, 2]))
    with pytest.raises(OplatError):
        load_order(str(path))


def test_check_a_table_file(tmp_path):
    path = tmp_path / "table.json"
    save_json(pmap_to_json(coherent_lift(SurjectionSpec(3, ((0, 2), (1,))))), str(path))
    rows = check_table_file(str(path))
    assert len(rows) == 4
    assert all(row["passed"] for row in rows)
    assert all(row["suite"] == "pmap-check" for row in rows)


def test_failing_rows_carry_the_pair_matrices():
    rows = {row["check"]: row for row in check_table(_saturating_table(), ["c", "a"])}
    failures = rows["c"]["witness"]["failures"]
    assert len(failures) == rows["c"]["value"]
    assert {"p", "sp", "spc"} <= set(failures[0])
    assert all(m["dim"] == 2 and len(m["entries"]) == 4 for m in failures[0].values())
    assert "witness" not in rows["a"]
