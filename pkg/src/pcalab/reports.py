"""Serialization of density reports to the fixed CSV/JSON schemas."""

from __future__ import annotations

import json
from pathlib import Path

from .density import DensityReport

CSV_HEADER = "n,exact_num,exact_den,approx,estimate,halfwidth,trials,seed"


def row_fields(report: DensityReport) -> dict:
    """Schema fields in column order; rationals split into integer parts."""
    return {
        "n": report.n,
        "exact_num": None if report.exact is None else report.exact.numerator,
        "exact_den": None if report.exact is None else report.exact.denominator,
        "approx": report.approx,
        "estimate": report.mc_estimate,
        "halfwidth": report.mc_halfwidth,
        "trials": report.trials,
        "seed": report.seed,
    }


def _cell(value) -> str:
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else str(value)


def to_csv(rows) -> str:
    lines = [CSV_HEADER]
    lines.extend(",".join(_cell(v) for v in row_fields(r).values())
                 for r in rows)
    return "\n".join(lines) + "\n"


def to_json(rows) -> str:
    return json.dumps([row_fields(r) for r in rows], indent=2) + "\n"


def write_report(rows, fmt: str, path=None) -> str:
    """Serialize reports; also write them to ``path`` when given."""
    if fmt == "csv":
        text = to_csv(rows)
    elif fmt == "json":
        text = to_json(rows)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
