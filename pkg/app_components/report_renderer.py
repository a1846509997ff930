import json
import logging
import sys
from datetime import datetime
from typing import Any, Dict, List, Optional, TextIO

import pandas as pd
import pytz

from app_components.settings import SuiteConfig
from utils.data_processing import REPORT_COLUMNS, failed_rows, rows_to_frame, summarize_checks

logger = logging.getLogger(__name__)


def generated_at() -> str:
    """UTC timestamp for report headers"""
    return datetime.now(pytz.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def report_header(cfg: SuiteConfig, suite: str) -> Dict[str, Any]:
    return {
        "suite": suite,
        "profile": cfg.profile,
        "seed": cfg.seed,
        "tolerance": cfg.tolerance,
        "epsilon": cfg.epsilon,
        "count": cfg.count,
        "dims": cfg.max_dim,
        "generated": generated_at(),
    }


def render_json(rows: List[Dict[str, Any]], header: Dict[str, Any]) -> str:
    return json.dumps({"header": header, "checks": rows}, indent=2)


def render_csv(frame: pd.DataFrame, header: Dict[str, Any]) -> str:
    """CSV body preceded by a comment line with the generation time"""
    return f"# generated: {header['generated']}\n" + frame.to_csv(index=False)


def write_report(rows: List[Dict[str, Any]], cfg: SuiteConfig, suite: str, out: Optional[TextIO] = None) -> None:
    """Write the check rows to cfg.out, or to out (stdout by default)"""
    header = report_header(cfg, suite)
    if cfg.fmt == "csv":
        text = render_csv(rows_to_frame(rows), header)
    else:
        text = render_json(rows, header)
    _emit(text, cfg.out, out)


def write_table(frame: pd.DataFrame, cfg: SuiteConfig, out: Optional[TextIO] = None) -> None:
    """Write a plain table, such as the per-pair projection table"""
    header = {"generated": generated_at()}
    if cfg.fmt == "csv":
        text = render_csv(frame, header)
    else:
        text = json.dumps({"header": header, "rows": frame.to_dict(orient="records")}, indent=2)
    _emit(text, cfg.out, out)


def _emit(text: str, path: Optional[str], out: Optional[TextIO]) -> None:
    if path:
        with open(path, "w") as file:
            file.write(text)
        logger.info("report written to %s", path)
    else:
        (out or sys.stdout).write(text + ("" if text.endswith("\n") else "\n"))


def console_summary(rows: List[Dict[str, Any]], out: Optional[TextIO] = None) -> None:
    """Per-check counts and the failing rows, on stderr unless told otherwise"""
    out = out or sys.stderr
    summary = summarize_checks(rows)
    if summary.empty:
        out.write("No checks ran\n")
        return
    out.write(summary.to_string(index=False) + "\n")
    failures = failed_rows(rows)
    if failures:
        out.write(f"\n{len(failures)} failing instance(s):\n")
        out.write(pd.DataFrame(failures, columns=REPORT_COLUMNS).to_string(index=False) + "\n")
    else:
        out.write(f"\nAll {len(rows)} checks passed\n")
