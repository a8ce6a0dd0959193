"""Report formatting utility.

This module provides functions to turn the report documents built by the
command handlers into the three output formats: an aligned text table,
csv and json. A document is a plain dict:

    {"schema": 1, "command": ..., "subject": ..., "columns": [...],
     "rows": [{...}, ...], "summary": {...}}
"""

import csv
import io
import json
import logging
import math
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import config

# Set up logging
logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
SIGNIFICANT_DIGITS = 12


def format_number(value: Any) -> str:
    """Render a value with 12 significant digits for floats and exact text for rationals."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        if math.isfinite(value):
            return float(format_number(value))
        return format_number(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def make_document(command: str, subject: str, columns: Sequence[str], rows: Sequence[Dict[str, Any]],
                  summary: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Assemble a versioned report document.

    Args:
        command: Command that produced the report
        subject: The system, graph or suite the rows describe
        columns: Column order for table and csv output
        rows: One dict per row, keyed by column
        summary: Scalar results shown after the rows

    Returns:
        The report document
    """
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "subject": subject,
        "columns": list(columns),
        "rows": [dict(row) for row in rows],
        "summary": dict(summary or {}),
    }


def format_table(document: Dict[str, Any]) -> str:
    """Format a report document into an aligned text table followed by its summary."""
    columns = document["columns"]
    cells = [[format_number(row.get(c)) for c in columns] for row in document["rows"]]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]

    lines = [f"{document['command']}: {document['subject']}"]
    if columns:
        lines.append("  ".join(c.rjust(w) for c, w in zip(columns, widths)))
        lines.append("  ".join("-" * w for w in widths))
        for row in cells:
            lines.append("  ".join(v.rjust(w) for v, w in zip(row, widths)))
    summary = document.get("summary") or {}
    if summary:
        lines.append("")
        key_width = max(len(k) for k in summary)
        for key, value in summary.items():
            lines.append(f"{key.ljust(key_width)}  {format_number(value)}")
    return "\n".join(lines) + "\n"


def format_csv(document: Dict[str, Any]) -> str:
    """Format the rows of a report document as csv (`,` separator, `.` decimal)."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(document["columns"])
    for row in document["rows"]:
        writer.writerow([format_number(row.get(c)) for c in document["columns"]])
    return buffer.getvalue()


def format_json(document: Dict[str, Any]) -> str:
    """Format a report document as json with sorted keys."""
    return json.dumps(_jsonable(document), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


FORMATTERS = {
    "table": format_table,
    "csv": format_csv,
    "json": format_json,
}


def render(document: Dict[str, Any], output_format: str = "table") -> str:
    """Render a document in one of config.OUTPUT_FORMATS.

    Raises:
        ValueError: Unknown format
    """
    if output_format not in config.OUTPUT_FORMATS:
        raise ValueError(f"unknown output format {output_format!r}; expected one of {', '.join(config.OUTPUT_FORMATS)}")
    return FORMATTERS[output_format](document)


def format_failures(failures: List[Dict[str, Any]]) -> str:
    """One line per failed assertion, for the stderr dump of a failing suite."""
    if not failures:
        return ""
    lines = ["Failed checks:"]
    for failure in failures:
        detail = ", ".join(f"{k}={format_number(v)}" for k, v in failure.items() if k != "check")
        lines.append(f"  {failure.get('check', '?')}: {detail}")
    return "\n".join(lines) + "\n"
