"""Deterministic result writing: tidy CSV tables plus a JSON summary per run."""

from __future__ import annotations

import json
from pathlib import Path


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path, fieldnames, rows) -> Path:
    """Write rows (dicts) as CSV with stable float formatting."""
    path = Path(path)
    lines = [",".join(fieldnames)]
    for row in rows:
        lines.append(",".join(format_cell(row.get(name)) for name in fieldnames))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_summary(path, payload: dict) -> Path:
    """Write the machine-readable run summary (sorted keys, stable layout)."""
    path = Path(path)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")
    return path
