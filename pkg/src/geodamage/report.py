"""Report files: fixed-column CSV or JSON, each led by a provenance header."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from . import __version__
from .damage import DamageReport

REPORT_COLUMNS = (
    "scenario-kind",
    "entity",
    "layer",
    "C0",
    "C1",
    "Q0",
    "Q1",
    "G0",
    "G1",
    "c",
    "q",
    "g",
    "delta",
    "delta-norm",
    "seed",
    "repetitions",
    "resolution",
    "omega",
    "scope",
)


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def provenance(config: Mapping[str, Any], inputs: Mapping[str, str]) -> dict[str, Any]:
    return {
        "tool": "geodamage",
        "version": __version__,
        "config": dict(config),
        "inputs": {k: {"path": v, "sha256": file_digest(v)} for k, v in sorted(inputs.items())},
    }


def _num(x) -> Any:
    if isinstance(x, float) and x.is_integer() and abs(x) < 2**53:
        return int(x)
    return x


def report_rows(reports: Iterable[DamageReport]) -> list[dict[str, Any]]:
    rows = []
    for r in reports:
        m, p = r.metrics, r.params
        values = (
            r.scenario.kind, r.entity, str(r.scenario.layer),
            m.C0, m.C1, m.Q0, m.Q1, m.G0, m.G1,
            m.c, m.q, m.g, m.delta, r.delta_norm,
            p.seed, p.repetitions, p.resolution, p.omega, m.scope,
        )
        rows.append(dict(zip(REPORT_COLUMNS, (_num(v) for v in values))))
    return rows


def _fmt(v: Any) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_table(
    path,
    columns: Sequence[str],
    rows: Sequence[Mapping[str, Any]],
    prov: Mapping[str, Any],
    fmt: str = "csv",
) -> Path:
    """Write rows as CSV (``# `` header lines) or JSON ({provenance, records})."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        doc = {"provenance": prov, "records": [{c: row[c] for c in columns} for row in rows]}
        path.write_text(json.dumps(doc, indent=2, sort_keys=False) + "\n", encoding="utf-8")
        return path
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    for line in json.dumps(prov, indent=1, sort_keys=True).splitlines():
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in columns])
    path.write_text(buf.getvalue(), encoding="utf-8")
    return path


def write_reports(path, reports: Sequence[DamageReport], prov, fmt: str = "csv") -> Path:
    return write_table(path, REPORT_COLUMNS, report_rows(reports), prov, fmt)


def read_table(path) -> list[dict[str, str]]:
    """Read back a CSV or JSON table written by :func:`write_table`."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        return [{k: str(v) for k, v in rec.items()} for rec in json.loads(text)["records"]]
    body = "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))
    return list(csv.DictReader(io.StringIO(body)))
