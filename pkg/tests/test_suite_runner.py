import pytest

from app_components.settings import SuiteConfig
from app_components.suite_runner import ANCHORS, run_jordan_suite, run_suite
from utils.errors import OplatError


@pytest.fixture(scope="module")
def jordan_rows():
    return run_jordan_suite(SuiteConfig(count=1, max_dim=2))


def _rows(rows, check):
    return [row for row in rows if row["check"] == check]


def test_square_interval_rows_carry_their_matrices(jordan_rows):
    (row,) = _rows(jordan_rows, "square-interval")
    witness = row["witness"]
    assert {"generator_0", "state"} <= set(witness)
    assert witness["state"]["dim"] == 2
    assert len(witness["state"]["entries"]) == 4


def test_vanishing_side_rows_carry_the_element_and_its_witness(jordan_rows):
    (row,) = _rows(jordan_rows, "vanishing-side")
    assert set(row["witness"]) == {"a", "witness"}
    assert row["witness"]["a"]["dim"] == row["witness"]["witness"]["dim"] == 2


def test_linear_weight_keeps_its_gap(jordan_rows):
    (row,) = _rows(jordan_rows, "shifted-root-asymptotics-id")
    assert row["passed"]
    assert row["value"] == pytest.approx(1 / 16, rel=1e-3)
    assert row["anchor"] == ANCHORS["shifted-root-asymptotics-id"]


def test_rows_without_matrices_have_no_witness(jordan_rows):
    assert all("witness" not in row for row in _rows(jordan_rows, "sqr-single"))


def test_unknown_suite():
    with pytest.raises(OplatError):
        run_suite("geometry", SuiteConfig())


def test_every_row_quotes_its_anchor(jordan_rows):
    for row in jordan_rows:
        assert row["anchor"] == ANCHORS[row["check"]]
    assert ANCHORS["monotone-extension-exhaustive"] == ANCHORS["monotone-extension"]
