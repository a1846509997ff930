from utils.data_processing import (
    PAIR_COLUMNS,
    REPORT_COLUMNS,
    check_row,
    failed_rows,
    instance_hash,
    pair_row,
    pairs_to_frame,
    rows_to_frame,
    summarize_checks,
)


def _rows():
    return [
        check_row("lattice", "pi-linear", "anchor", {"index": 0}, True, 0.0),
        check_row("lattice", "pi-linear", "anchor", {"index": 1}, False, 2.5, 1.0),
        check_row("poset", "completion-axioms", "anchor", {"index": 0}, True),
    ]


def test_instance_hash_ignores_key_order():
    assert instance_hash({"a": 1, "b": 2}) == instance_hash({"b": 2, "a": 1})
    assert instance_hash({"a": 1}) != instance_hash({"a": 2})
    assert len(instance_hash({})) == 12


def test_check_rows_hold_plain_values():
    row = check_row("jordan", "separation", "anchor", {"seed": 1}, 1, 3, None, "sampled")
    assert row["passed"] is True
    assert row["value"] == 3.0 and row["bound"] is None
    assert row["certainty"] == "sampled"
    assert list(row) == REPORT_COLUMNS


def test_frame_keeps_the_column_order():
    frame = rows_to_frame(_rows())
    assert list(frame.columns) == REPORT_COLUMNS
    assert len(frame) == 3


def test_summary_counts_failures_per_check():
    summary = summarize_checks(_rows())
    lattice = summary[summary["check"] == "pi-linear"].iloc[0]
    assert lattice["instances"] == 2 and lattice["failures"] == 1
    poset = summary[summary["check"] == "completion-axioms"].iloc[0]
    assert poset["failures"] == 0


def test_empty_summary():
    assert summarize_checks([]).empty
    assert failed_rows(_rows())[0]["value"] == 2.5


def test_pair_rows():
    row = pair_row({"dim": 3}, 3, 1, 2, [0.1, 0.25], 12, 1e-13)
    assert row["angles"] == "0.100000 0.250000"
    assert list(pairs_to_frame([row]).columns) == PAIR_COLUMNS


def test_witness_rides_along_but_stays_out_of_the_frame():
    witness = {"c": {"dim": 1, "entries": [[1.0, 0.0]]}}
    row = check_row("jordan", "vanishing-side", "anchor", {"seed": 1}, True, 0.0, 1e-8, witness=witness)
    assert row["witness"] == witness
    assert list(rows_to_frame([row]).columns) == REPORT_COLUMNS
