"""Deterministic CSV/JSON rendering of service responses.

Floats are written with ``repr`` (shortest round-trip form), rows follow
the computation order, and metadata headers carry the config hash but no
timestamps, so rerunning the same config yields byte-identical files.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .service import (
    OracleCheckResponse,
    QuenchResponse,
    StaticScanResponse,
    StudyResponse,
    SweepResponse,
)

COLUMN_DOCS = {
    "t": "time, inverse energy units",
    "fq": "maximal Fisher density, dimensionless in [0, 1]",
    "n_eff": "effective macroscopic size N*fq, sites",
    "le": "Loschmidt echo, dimensionless in [0, 1]",
    "r_le": "echo rate -log(le^2)/N, dimensionless ('divergent' marks an exact zero)",
    "r_fq": "Fisher-density rate -log(fq^2)/N, dimensionless ('divergent' marks an exact zero)",
    "argmax": "direction of the maximal variance, one of X, Y, Z",
    "n": "chain length, sites",
    "lambda": "transverse-coupling ratio, dimensionless",
    "lambda1": "pre-quench coupling, dimensionless",
    "lambda2": "post-quench coupling, dimensionless",
    "quench_size": "|lambda2 - lambda1|, dimensionless",
    "kind": "event kind",
    "measured_time": "detected extremum time, inverse energy units",
    "predicted_time": "light-cone prediction N/(2 v_max), inverse energy units",
    "fq_static": "equilibrium Fisher density at t = 0, dimensionless",
    "fq_longtime": "trailing-window time average of the Fisher density, dimensionless",
    "dfq_longtime_dlambda2": "discrete derivative of the long-time curve, dimensionless",
    "dfq_dlambda": "discrete derivative of fq along lambda, dimensionless",
    "p_index": "size-scaling exponent of the maximal variance, dimensionless",
    "time": "event time, inverse energy units",
    "detail": "event detail, JSON",
}

_DIVERGENT_COLUMNS = {"r_le", "r_fq"}


def _fmt(value, column: str) -> str:
    if value is None:
        return "divergent" if column in _DIVERGENT_COLUMNS else ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True, separators=(";", ":")).replace(",", ";")
    return str(value)


def _csv_header(metadata: dict, columns: list[str], summary: dict | None = None) -> list[str]:
    lines = [f"# config: sha256:{metadata['config_hash']}"]
    docs = "; ".join(f"{c}: {COLUMN_DOCS.get(c, c)}" for c in columns)
    lines.append(f"# columns: {docs}")
    if summary:
        parts = json.dumps(summary, sort_keys=True, separators=(";", ":"))
        lines.append(f"# summary: {parts}")
    lines.append(",".join(columns))
    return lines


def _csv_table(metadata: dict, columns: dict[str, list], summary: dict | None = None) -> str:
    names = list(columns)
    lines = _csv_header(metadata, names, summary)
    length = len(next(iter(columns.values()))) if columns else 0
    for i in range(length):
        lines.append(",".join(_fmt(columns[c][i], c) for c in names))
    return "\n".join(lines) + "\n"


def render_csv(response) -> str:
    if isinstance(response, QuenchResponse):
        return _csv_table(response.metadata, response.columns)
    if isinstance(response, StudyResponse):
        return _csv_table(response.metadata, response.columns, {"fit": response.fit})
    if isinstance(response, StaticScanResponse):
        return _csv_table(response.metadata, response.columns, response.summary)
    if isinstance(response, SweepResponse):
        return _csv_table(response.metadata, response.columns, response.summary)
    if isinstance(response, OracleCheckResponse):
        columns = {
            "name": [c.name for c in response.checks],
            "max_deviation": [c.max_deviation for c in response.checks],
            "tolerance": [c.tolerance for c in response.checks],
            "passed": [c.passed for c in response.checks],
            "detail": [c.detail for c in response.checks],
        }
        return _csv_table(response.metadata, columns, {"passed": response.passed})
    raise TypeError(f"no CSV renderer for {type(response).__name__}")


def render_events_csv(response: QuenchResponse) -> str:
    columns = {
        "kind": [e.kind for e in response.events],
        "time": [e.time for e in response.events],
        "detail": [e.detail for e in response.events],
    }
    return _csv_table(response.metadata, columns)


def render_json(response) -> str:
    return json.dumps(response.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def check_writable(out: Path):
    parent = out.resolve().parent
    if not parent.is_dir() or not os.access(parent, os.W_OK):
        raise OSError(f"output directory {parent} does not exist or is not writable")


def atomic_write(path: Path, content: str):
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(content)
    os.replace(tmp, path)


def write_output(response, out: Path, fmt: str) -> list[Path]:
    """Render a response to disk; returns the written paths.

    CSV quench output gets an ``<out stem>.events.csv`` sidecar; JSON
    carries the events inline.
    """
    out = Path(out)
    check_writable(out)
    written = []
    if fmt == "json":
        atomic_write(out, render_json(response))
        written.append(out)
    elif fmt == "csv":
        atomic_write(out, render_csv(response))
        written.append(out)
        if isinstance(response, QuenchResponse):
            sidecar = out.with_name(out.stem + ".events.csv")
            atomic_write(sidecar, render_events_csv(response))
            written.append(sidecar)
    else:
        raise ValueError(f"unknown format {fmt!r}, expected csv or json")
    return written
