import hashlib
import json
from typing import Any, Dict, List, Optional

import pandas as pd

REPORT_COLUMNS = ["suite", "check", "anchor", "instance", "passed", "value", "bound", "certainty"]
PAIR_COLUMNS = ["instance", "dim", "rank_p", "rank_q", "angles", "iterations", "gap_to_oracle"]


def instance_hash(params: Dict[str, Any]) -> str:
    """First 12 hex digits of the sha256 of the canonical JSON of the parameters"""
    canonical = json.dumps(params, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


def check_row(
    suite: str,
    check: str,
    anchor: str,
    params: Dict[str, Any],
    passed: bool,
    value: Optional[float] = None,
    bound: Optional[float] = None,
    certainty: str = "exact",
    witness: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """One line of a report; the witness, when given, rides along in JSON reports only"""
    row = {
        "suite": suite,
        "check": check,
        "anchor": anchor,
        "instance": instance_hash(params),
        "passed": bool(passed),
        "value": None if value is None else float(value),
        "bound": None if bound is None else float(bound),
        "certainty": certainty,
    }
    if witness is not None:
        row["witness"] = witness
    return row


def rows_to_frame(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    """Report rows as a DataFrame with the fixed column order"""
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def summarize_checks(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    """Per-check instance and failure counts"""
    frame = rows_to_frame(rows)
    if frame.empty:
        return pd.DataFrame(columns=["suite", "check", "instances", "failures"])
    grouped = frame.groupby(["suite", "check"], sort=False)["passed"]
    summary = grouped.agg(instances="count", failures=lambda s: int((~s.astype(bool)).sum()))
    return summary.reset_index()


def failed_rows(rows: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    return [row for row in rows if not row["passed"]]


def pair_row(
    params: Dict[str, Any], dim: int, rank_p: int, rank_q: int, angles, iterations: int, gap: float
) -> Dict[str, Any]:
    """A line of the per-pair projection table"""
    return {
        "instance": instance_hash(params),
        "dim": dim,
        "rank_p": rank_p,
        "rank_q": rank_q,
        "angles": " ".join(f"{a:.6f}" for a in angles),
        "iterations": int(iterations),
        "gap_to_oracle": float(gap),
    }


def pairs_to_frame(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    return pd.DataFrame(rows, columns=PAIR_COLUMNS)
