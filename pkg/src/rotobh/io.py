"""Deterministic emission and parsing of result tables.

CSV layout: line 1 is `# rotobh v1 <subcommand>`, line 2 the column
names, then one data row per line.  Floats are serialized with repr(),
the shortest decimal string that round-trips to the same 64-bit value,
so identical runs produce byte-identical files and re-parsing recovers
the in-memory table exactly.  JSON output mirrors the same rows plus a
`meta` object (convention, fit protocol, tolerances, version); NaN cells
become null there since strict JSON has no NaN.
"""

from __future__ import annotations

import json
import math
from typing import Iterable

FORMAT_TAG = "rotobh v1"


def format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_cell(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    if text == "true":
        return True
    if text == "false":
        return False
    return text


def csv_text(subcommand: str, columns: Iterable[str], rows: Iterable[tuple]) -> str:
    lines = ["# %s %s" % (FORMAT_TAG, subcommand), ",".join(columns)]
    for row in rows:
        lines.append(",".join(format_cell(c) for c in row))
    return "\n".join(lines) + "\n"


def parse_csv(text: str):
    """Inverse of csv_text: returns (subcommand, columns, rows)."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# %s " % FORMAT_TAG):
        raise ValueError("not a %s table" % FORMAT_TAG)
    subcommand = lines[0][len(FORMAT_TAG) + 3:]
    columns = tuple(lines[1].split(","))
    rows = tuple(tuple(parse_cell(c) for c in line.split(","))
                 for line in lines[2:] if line)
    return subcommand, columns, rows


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def json_text(subcommand: str, columns, rows, meta: dict) -> str:
    payload = {
        "format": FORMAT_TAG,
        "subcommand": subcommand,
        "meta": meta,
        "columns": list(columns),
        "rows": [[_json_safe(c) for c in row] for row in rows],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
