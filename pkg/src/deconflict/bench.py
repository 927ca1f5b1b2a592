"""Time-to-solution benchmarking and simulation metric aggregation.

TTS(p) = t_c * log(1 - p) / log(1 - p_opt): the expected time to hit the
optimum at least once with confidence p, given the per-trial success
probability p_opt and per-trial time t_c. The benchmark grades the
sampling solver against the exact solver's optimum over an instance
corpus; the greedy solver is deterministic, so a fixed penalty time stands
in for its runtime whenever it misses the optimum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import seeding
from .mwis import load_instance
from .scheduler import SimConfig, SimResult
from .solvers import SaSchedule, exact_mwis, greedy_mwis, solve_mwis_via_sampler

OBJECTIVE_TOL = 1e-9
GREEDY_SUBOPTIMAL_PENALTY = 10.0

BENCH_SOLVERS = ("greedy", "exact", "sa")


def tts(t_c: float, p_opt: float, p: float) -> float:
    """Time to solution at confidence p for per-trial success probability p_opt.

    Returns t_c when p_opt == 1 (success is deterministic) and infinity
    when p_opt == 0.
    """
    if t_c <= 0:
        raise ValueError(f"t_c must be positive, got {t_c}")
    if not 0.0 <= p_opt <= 1.0:
        raise ValueError(f"p_opt must lie in [0, 1], got {p_opt}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if p_opt == 0.0:
        return math.inf
    if p_opt == 1.0:
        return t_c
    return t_c * math.log(1.0 - p) / math.log(1.0 - p_opt)


def estimate_p_opt(samples: Sequence[float], optimal: float, tolerance: float = OBJECTIVE_TOL) -> float:
    """Fraction of sample objectives within tolerance of the optimum."""
    if len(samples) == 0:
        raise ValueError("cannot estimate success probability from zero samples")
    hits = sum(1 for s in samples if abs(s - optimal) <= tolerance)
    return hits / len(samples)


@dataclass(frozen=True)
class TtsRecord:
    """One solver's benchmark result on one instance.

    The sampling solver produces two records per instance: solver
    "sa_sweep" charges only the anneal sweep loop per trial, "sa_call" the
    full call time per trial.
    """

    instance: str
    n: int
    solver: str
    t_c: float
    p_opt: float
    confidence: float
    tts: float
    wall_time: float
    optimal_found: bool


@dataclass(frozen=True)
class BoxStats:
    """Box-plot summary of finite TTS values: quartiles plus 1.5 IQR whiskers."""

    solver: str
    count: int
    finite: int
    infinite: int
    q1: float
    median: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...]


def summarize_tts(records: Sequence[TtsRecord]) -> list[BoxStats]:
    """Per-solver box statistics over the records' TTS values."""
    by_solver: dict[str, list[float]] = {}
    for rec in records:
        by_solver.setdefault(rec.solver, []).append(rec.tts)
    stats = []
    for solver in sorted(by_solver):
        values = np.asarray(by_solver[solver])
        finite = values[np.isfinite(values)]
        n_inf = int(len(values) - len(finite))
        if len(finite) == 0:
            stats.append(BoxStats(solver, len(values), 0, n_inf, math.nan, math.nan,
                                  math.nan, math.nan, math.nan, ()))
            continue
        q1, med, q3 = (float(q) for q in np.percentile(finite, [25, 50, 75]))
        iqr = q3 - q1
        inside = finite[(finite >= q1 - 1.5 * iqr) & (finite <= q3 + 1.5 * iqr)]
        lo = float(inside.min())
        hi = float(inside.max())
        outliers = tuple(float(v) for v in sorted(finite[(finite < lo) | (finite > hi)]))
        stats.append(BoxStats(solver, len(values), len(finite), n_inf, q1, med, q3, lo, hi, outliers))
    return stats


def run_tts_benchmark(
    corpus: str | Path,
    solvers: Sequence[str] = BENCH_SOLVERS,
    schedule: SaSchedule | None = None,
    p: float = 0.99,
    tolerance: float = OBJECTIVE_TOL,
    suboptimal_penalty: float = GREEDY_SUBOPTIMAL_PENALTY,
    exact_time_limit: float | None = None,
) -> tuple[list[TtsRecord], list[BoxStats]]:
    """Benchmark the chosen solvers over a directory of MWIS instance files.

    Every instance is graded against the exact solver's optimum. The
    sampling solver's p_opt is the fraction of refined samples hitting the
    optimum; greedy gets the fixed penalty time as its TTS when it misses.
    Each instance's SA run derives its own seed from the schedule seed, so
    results do not depend on which other instances sit in the corpus.
    """
    unknown = sorted(set(solvers) - set(BENCH_SOLVERS))
    if unknown:
        raise ValueError(f"unknown benchmark solvers: {', '.join(unknown)}")
    if schedule is None:
        schedule = SaSchedule(num_samples=10_000)
    paths = sorted(Path(corpus).glob("*.json"))
    if not paths:
        raise ValueError(f"no MWIS instance files (*.json) in {corpus}")

    records: list[TtsRecord] = []
    for idx, path in enumerate(paths):
        problem = load_instance(path)
        name = path.stem

        exact = exact_mwis(problem, exact_time_limit)
        optimum = exact.objective
        if "exact" in solvers:
            records.append(TtsRecord(
                instance=name, n=problem.n, solver="exact",
                t_c=exact.wall_time, p_opt=1.0 if exact.proven_optimal else 0.0,
                confidence=p, tts=exact.wall_time, wall_time=exact.wall_time,
                optimal_found=bool(exact.proven_optimal),
            ))

        if "greedy" in solvers:
            greedy = greedy_mwis(problem)
            hit = abs(greedy.objective - optimum) <= tolerance
            records.append(TtsRecord(
                instance=name, n=problem.n, solver="greedy",
                t_c=greedy.wall_time, p_opt=1.0 if hit else 0.0,
                confidence=p,
                tts=greedy.wall_time if hit else suboptimal_penalty,
                wall_time=greedy.wall_time, optimal_found=hit,
            ))

        if "sa" in solvers:
            per_instance = SaSchedule(
                num_samples=schedule.num_samples,
                sweeps_per_sample=schedule.sweeps_per_sample,
                beta_start=schedule.beta_start,
                beta_end=schedule.beta_end,
                seed=seeding.derive_seed(schedule.seed, seeding.BENCH, idx),
            )
            sa = solve_mwis_via_sampler(problem, schedule=per_instance)
            # Refined samples are always feasible, so objective == -energy.
            sample_objectives = [-energy for energy, _ in sa.per_sample_records]
            p_opt = estimate_p_opt(sample_objectives, optimum, tolerance)
            hit = abs(sa.objective - optimum) <= tolerance
            t_sweep = sa.sweep_time / schedule.num_samples
            t_call = sa.wall_time / schedule.num_samples
            for solver_name, t_c in (("sa_sweep", t_sweep), ("sa_call", t_call)):
                records.append(TtsRecord(
                    instance=name, n=problem.n, solver=solver_name,
                    t_c=t_c, p_opt=p_opt, confidence=p,
                    tts=tts(t_c, p_opt, p), wall_time=sa.wall_time,
                    optimal_found=hit,
                ))

    return records, summarize_tts(records)


@dataclass
class MetricsTable:
    """Per-step series behind the simulation report figures."""

    times: list[float] = field(default_factory=list)
    cumulative_approved: list[int] = field(default_factory=list)
    active: list[int] = field(default_factory=list)
    vertex_counts: list[int] = field(default_factory=list)
    solver_times: list[float] = field(default_factory=list)

    @property
    def mean_active(self) -> float:
        return float(np.mean(self.active)) if self.active else 0.0


def collect_metrics(result: SimResult, config: SimConfig) -> MetricsTable:
    """Aggregate a run into plot-ready series.

    Active aircraft at step time t counts flights with start <= t < end;
    the cumulative series counts approvals up to and including each step.
    """
    table = MetricsTable()
    approved_at = sorted(f.approved_at for f in result.approved)
    spans = [(f.trajectory.start_time, f.trajectory.end_time) for f in result.approved]
    cum = 0
    idx = 0
    for rec in result.steps:
        t = rec.time
        while idx < len(approved_at) and approved_at[idx] <= t + 1e-9:
            cum += 1
            idx += 1
        table.times.append(t)
        table.cumulative_approved.append(cum)
        table.active.append(sum(1 for s, e in spans if s <= t + 1e-9 and t < e - 1e-9))
        table.vertex_counts.append(rec.mwis_vertices)
        table.solver_times.append(rec.solver_wall_time)
    return table
