"""Report assembly and machine-readable serialization.

Reports are plain dict trees.  Every float is rendered with 17 significant
digits through a single formatting routine used by both the JSON and CSV
writers, so the two formats carry identical numeric strings and runs are
byte-identical apart from the timestamp.
"""
from __future__ import annotations

import dataclasses
import enum
import io
import math
from datetime import datetime, timezone

from .criteria import CriterionVerdict, DivergenceAssessment, EvidenceRow

SCHEMA_VERSION = 1


def fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    return format(x, ".17g")


def _to_plain(obj):
    """Normalize dataclasses / enums / tuples into dicts, lists and scalars."""
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, CriterionVerdict):
        return verdict_to_dict(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_plain(v) for v in obj]
    return obj


def verdict_to_dict(v: CriterionVerdict) -> dict:
    return {
        "criterion": v.criterion,
        "status": v.status.value,
        "holds": v.holds,
        "conclusion": v.conclusion,
        "probe": _to_plain(v.probe) if v.probe else None,
        "flags": list(v.flags),
        "evidence": [
            {
                "zeta": r.zeta,
                "term": r.term,
                "partial_sum": r.partial_sum,
                "running_value": r.running_value,
            }
            for r in v.evidence
        ],
    }


def new_report(config_echo: dict, seed: int = 0) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "seed": seed,
        "config": config_echo,
        "stages": {},
        "discrepancy_flags": [],
        "errors": [],
    }


def _write_json(out: io.StringIO, obj, indent: int):
    pad = "  " * indent
    if obj is None:
        out.write("null")
    elif obj is True:
        out.write("true")
    elif obj is False:
        out.write("false")
    elif isinstance(obj, float):
        out.write(fmt_float(obj))
    elif isinstance(obj, int):
        out.write(str(obj))
    elif isinstance(obj, str):
        out.write(
            '"'
            + obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
            + '"'
        )
    elif isinstance(obj, dict):
        if not obj:
            out.write("{}")
            return
        out.write("{\n")
        items = list(obj.items())
        for i, (k, v) in enumerate(items):
            out.write(pad + "  ")
            _write_json(out, str(k), 0)
            out.write(": ")
            _write_json(out, v, indent + 1)
            out.write(",\n" if i + 1 < len(items) else "\n")
        out.write(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.write("[]")
            return
        out.write("[\n")
        for i, v in enumerate(obj):
            out.write(pad + "  ")
            _write_json(out, v, indent + 1)
            out.write(",\n" if i + 1 < len(obj) else "\n")
        out.write(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(report: dict) -> str:
    out = io.StringIO()
    _write_json(out, _to_plain(report), 0)
    out.write("\n")
    return out.getvalue()


def _csv_cell(value) -> str:
    if isinstance(value, float):
        cell = fmt_float(value).strip('"')
    else:
        cell = str(value)
    if any(c in cell for c in ',"\n'):
        cell = '"' + cell.replace('"', '""') + '"'
    return cell


def evidence_rows(report: dict):
    """Yield (criterion_id, EvidenceRow-like dict) over every verdict in the report."""
    plain = _to_plain(report)
    stages = plain.get("stages", {})
    sources = []
    check = stages.get("check") or {}
    sources.extend(check.get("verdicts", []))
    transform = stages.get("transform") or {}
    if transform.get("sumq_verdict"):
        sources.append(transform["sumq_verdict"])
    for v in plain.get("verdicts", []):  # example reproduction reports
        sources.append(v)
    for verdict in sources:
        for row in verdict.get("evidence", []):
            yield verdict["criterion"], row


def to_csv(report: dict) -> str:
    """Plot-ready CSV of criterion evidence, one row per sampled index."""
    lines = ["criterion_id,zeta,term,partial_sum,running_value"]
    for criterion, row in evidence_rows(report):
        lines.append(
            ",".join(
                [
                    _csv_cell(criterion),
                    _csv_cell(row["zeta"]),
                    _csv_cell(float(row["term"])),
                    _csv_cell(float(row["partial_sum"])),
                    _csv_cell(float(row["running_value"])),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    raise ValueError(f"unknown format {fmt!r}")
