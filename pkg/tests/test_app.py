import json

from app import EXIT_PASS, EXIT_USAGE, main


def test_help_exits_cleanly():
    assert main(["--help"]) == EXIT_PASS


def test_unknown_suite_is_a_usage_error():
    assert main(["run-suite", "nope"]) == EXIT_USAGE


def test_bad_settings_are_usage_errors():
    assert main(["run-suite", "poset", "--count", "0"]) == EXIT_USAGE
    assert main(["run-suite", "poset", "--seed", "zz"]) == EXIT_USAGE
    assert main(["run-suite", "poset", "--profile", "nightly"]) == EXIT_USAGE


def test_poset_suite_passes(tmp_path):
    out = tmp_path / "poset.json"
    assert main(["run-suite", "poset", "--count", "1", "--out", str(out)]) == EXIT_PASS
    report = json.loads(out.read_text())
    assert report["header"]["count"] == 1
    assert report["header"]["profile"] == "quick"
    checks = {row["check"] for row in report["checks"]}
    assert checks >= {"completion-axioms", "monotone-extension", "monotone-extension-exhaustive"}


def test_generated_table_checks_out(tmp_path):
    table = tmp_path / "table.json"
    assert main(["gen-instance", "pmap-table", "--param", "lattice=boolean-2", "--seed", "3", "--out", str(table)]) == 0
    report = tmp_path / "report.csv"
    assert main(["pmap", "check", "--table", str(table), "--format", "csv", "--out", str(report)]) == EXIT_PASS
    assert report.read_text().startswith("# generated: ")


def test_missing_table_file(tmp_path):
    assert main(["pmap", "check", "--table", str(tmp_path / "absent.json")]) == EXIT_USAGE


def test_pairs_table(tmp_path):
    out = tmp_path / "pairs.json"
    assert main(["pairs", "--count", "1", "--dims", "3", "--out", str(out)]) == EXIT_PASS
    rows = json.loads(out.read_text())["rows"]
    assert [row["dim"] for row in rows] == [2, 3]
