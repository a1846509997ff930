import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

from utils.data_processing import check_row
from utils.errors import OplatError
from utils.file_operations import load_json, load_pmap_table, matrices_to_json
from utils.pmap import PMapTable, check_decoration, normalize_decoration

logger = logging.getLogger(__name__)

SUITE = "pmap-check"
ANCHOR = "orthogonal 𝒫-maps or 𝒫^o-maps"


def load_order(filepath: Optional[str]) -> Optional[List[Tuple[int, int]]]:
    """Construction order as a JSON list of [i, j] domain index pairs"""
    if not filepath:
        return None
    data = load_json(filepath)
    try:
        return [(int(i), int(j)) for i, j in data]
    except (TypeError, ValueError) as e:
        raise OplatError(f"Order file {filepath} must hold [i, j] pairs") from e


def parse_decorations(text: Optional[str], table: PMapTable) -> List[str]:
    """Comma separated list; defaults to the decorations claimed by the table"""
    if text:
        return [normalize_decoration(d.strip()) for d in text.split(",") if d.strip()]
    if not table.decorations:
        raise OplatError("Table claims no decorations and none were requested")
    return sorted(table.decorations)


def check_table(
    table: PMapTable, decorations: Sequence[str], order: Optional[List[Tuple[int, int]]] = None, source: str = ""
) -> List[Dict[str, Any]]:
    """One report row per decoration"""
    rows = []
    for decoration in decorations:
        report = check_decoration(table, decoration, order=order)
        if not report.passed:
            logger.warning("%s: decoration %s fails on %d pair(s)", source or "table", decoration, len(report.failures))
        params = {"table": source, "decoration": decoration, "order": order}
        witness = {"failures": [matrices_to_json(f) for f in report.failures]} if report.failures else None
        rows.append(
            check_row(
                SUITE, decoration, ANCHOR, params, report.passed, len(report.failures), report.checked,
                report.certainty, witness,
            )
        )
    return rows


def check_table_file(path: str, decorations: Optional[str] = None, order_path: Optional[str] = None) -> List[Dict[str, Any]]:
    table = load_pmap_table(path)
    return check_table(table, parse_decorations(decorations, table), load_order(order_path), source=path)
