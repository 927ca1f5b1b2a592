"""Delimited report files for simulation runs and benchmarks.

Simulation CSVs are pure functions of the run manifest, so repeated runs
produce byte-identical files. Measured solver wall times are inherently
nondeterministic and therefore live in their own timing file instead of
sim_metrics.csv.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Sequence

from .bench import BoxStats, MetricsTable, TtsRecord
from .fileio import atomic_write_text
from .mwis import save_instance
from .scheduler import SimResult

MANIFEST_NAME = "run_manifest.json"


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def route_label(nodes: Sequence[int]) -> str:
    return "-".join(str(n) for n in nodes)


def write_flights_csv(result: SimResult, path: str | Path) -> Path:
    rows = [
        (f.request_id, f.approved_at, route_label(f.route.node_sequence), f.route.length, f.route.weight)
        for f in result.approved
    ]
    return atomic_write_text(path, _csv_text(("request_id", "approved_at", "route", "length", "weight"), rows))


def write_rejected_csv(result: SimResult, path: str | Path) -> Path:
    rows = [(r.request_id, r.reason, r.time) for r in result.rejected]
    return atomic_write_text(path, _csv_text(("request_id", "reason", "time"), rows))


def write_metrics_csv(result: SimResult, metrics: MetricsTable, path: str | Path) -> Path:
    rows = [
        (
            rec.step,
            rec.time,
            metrics.cumulative_approved[i],
            metrics.active[i],
            rec.mwis_vertices,
            rec.mwis_edges,
        )
        for i, rec in enumerate(result.steps)
    ]
    header = ("step", "time", "cum_approved", "active", "mwis_vertices", "mwis_edges")
    return atomic_write_text(path, _csv_text(header, rows))


def write_timings_csv(result: SimResult, path: str | Path) -> Path:
    rows = [(rec.step, rec.time, rec.solver_wall_time) for rec in result.steps]
    return atomic_write_text(path, _csv_text(("step", "time", "solver_time"), rows))


def write_instances(result: SimResult, directory: str | Path) -> list[Path]:
    """One MWIS JSON file per solved step, named by step index."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for idx, (_, problem) in enumerate(result.instances):
        paths.append(save_instance(problem, directory / f"step_{idx:04d}.json"))
    return paths


def write_tts_records_csv(records: Sequence[TtsRecord], path: str | Path) -> Path:
    rows = [
        (r.instance, r.n, r.solver, r.t_c, r.p_opt, r.tts, r.wall_time, r.optimal_found)
        for r in records
    ]
    header = ("instance", "n", "solver", "t_c", "p_opt", "tts", "wall_time", "optimal_found")
    return atomic_write_text(path, _csv_text(header, rows))


def write_tts_summary_csv(stats: Sequence[BoxStats], path: str | Path) -> Path:
    rows = [
        (
            s.solver, s.count, s.finite, s.infinite,
            s.q1, s.median, s.q3, s.whisker_low, s.whisker_high, len(s.outliers),
        )
        for s in stats
    ]
    header = (
        "solver", "count", "finite", "infinite",
        "q1", "median", "q3", "whisker_low", "whisker_high", "n_outliers",
    )
    return atomic_write_text(path, _csv_text(header, rows))


def write_manifest(directory: str | Path, command: str, parameters: dict) -> Path:
    """Record the fully resolved configuration of a run; no timestamps, so
    identical runs produce identical manifests."""
    payload = {"command": command, "parameters": parameters}
    return atomic_write_text(Path(directory) / MANIFEST_NAME, json.dumps(payload, indent=2, sort_keys=True) + "\n")
