"""Serialization of run results: metrics JSON, one-row metrics CSV, event-log CSV.

Floats are written with ``repr`` so files are byte-reproducible from the
inputs; absent metrics are ``null`` in JSON and empty cells in CSV.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable

from .sim import EVENT_FIELDS, MetricsReport, SimEvent, SimulationResult

SUMMARY_FIELDS = (
    "scenario", "scheme", "method", "n_candidates", "seed",
    "processing_delay", "throughput", "end_to_end_delay", "handover_events",
    "packet_delivery_ratio", "repeat_handovers",
)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "value"):  # enums
        return str(value.value)
    return str(value)


def summary_row(result: SimulationResult) -> dict:
    cfg, rep = result.config, result.report
    return {
        "scenario": cfg.name,
        "scheme": cfg.scheme.value,
        "method": cfg.method.value,
        "n_candidates": cfg.n_candidates,
        "seed": cfg.seed,
        **{name: getattr(rep, name) for name in MetricsReport.METRIC_NAMES},
    }


def metrics_document(result: SimulationResult) -> dict:
    cfg = result.config
    return {
        "scenario": cfg.name,
        "seed": cfg.seed,
        "scheme": cfg.scheme.value,
        "method": cfg.method.value,
        "n_candidates": cfg.n_candidates,
        "metrics": result.report.to_dict(),
        "trust": result.trust,
    }


def metrics_json(result: SimulationResult) -> str:
    return json.dumps(metrics_document(result), indent=2, sort_keys=True) + "\n"


def rows_csv(rows: Iterable[dict], fieldnames: Iterable[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    fieldnames = list(fieldnames)
    writer.writerow(fieldnames)
    for row in rows:
        writer.writerow([_cell(row.get(f)) for f in fieldnames])
    return buf.getvalue()


def events_csv(events: Iterable[SimEvent]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(EVENT_FIELDS)
    for ev in events:
        writer.writerow([_cell(v) for v in ev])
    return buf.getvalue()


def write_run(result: SimulationResult, out_dir: str | Path) -> dict[str, Path]:
    """Write metrics.json, metrics.csv and events.csv into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "metrics_json": out / "metrics.json",
        "metrics_csv": out / "metrics.csv",
        "events_csv": out / "events.csv",
    }
    paths["metrics_json"].write_text(metrics_json(result), encoding="utf-8")
    paths["metrics_csv"].write_text(rows_csv([summary_row(result)], SUMMARY_FIELDS), encoding="utf-8")
    paths["events_csv"].write_text(events_csv(result.events), encoding="utf-8")
    return paths
