"""Command-line entry point: gen-network, simulate, solve, bench-tts.

Every run writes a manifest with the fully resolved configuration. Results
go to stdout and report files; diagnostics such as measured wall times go
to stderr so identical seeded runs print identical results.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import bench, plots, reports
from .mwis import DEFAULT_PENALTY, load_instance
from .network import NetworkError, generate_synthetic_network, load_network, save_network
from .scheduler import (
    SOLVER_CHOICES,
    SimConfig,
    generate_requests,
    load_requests,
    run_fifo_baseline,
    run_simulation,
)
from .solvers import SaSchedule, exact_mwis, greedy_mwis, solve_mwis_via_sampler


def cmd_gen_network(args: argparse.Namespace) -> int:
    network = generate_synthetic_network(
        rows=args.rows, cols=args.cols, spacing=args.spacing,
        altitude=args.altitude, jitter=args.jitter, seed=args.seed,
    )
    out = Path(args.out)
    save_network(network, out)
    reports.write_manifest(out.parent, "gen-network", {
        "rows": args.rows, "cols": args.cols, "spacing": args.spacing,
        "altitude": args.altitude, "jitter": args.jitter, "seed": args.seed,
        "out": out.name,
    })
    print(f"wrote {out} ({network.n} nodes, {len(network.edges)} edges, "
          f"{len(network.aerodromes)} aerodromes)")
    return 0


def _resolved_config(args: argparse.Namespace) -> SimConfig:
    config = SimConfig.from_file(args.config) if args.config else SimConfig()
    overrides = {}
    if args.solver is not None:
        overrides["solver"] = args.solver
    if args.seed is not None:
        overrides["seed"] = args.seed
    return dataclasses.replace(config, **overrides) if overrides else config


def cmd_simulate(args: argparse.Namespace) -> int:
    network = load_network(args.network)
    config = _resolved_config(args)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    if args.requests:
        requests = load_requests(args.requests, network)
    else:
        requests = generate_requests(network, config)

    if config.solver in ("fifo", "fifo-none"):
        result = run_fifo_baseline(network, requests, config)
    else:
        result = run_simulation(network, requests, config, export_instances=args.export_instances)

    metrics = bench.collect_metrics(result, config)
    reports.write_manifest(outdir, "simulate", {
        "network": str(args.network),
        "requests": str(args.requests) if args.requests else None,
        "export_instances": bool(args.export_instances),
        "config": config.to_dict(),
    })
    reports.write_flights_csv(result, outdir / "flights.csv")
    reports.write_rejected_csv(result, outdir / "rejected.csv")
    reports.write_metrics_csv(result, metrics, outdir / "sim_metrics.csv")
    reports.write_timings_csv(result, outdir / "step_timings.csv")
    if args.export_instances:
        reports.write_instances(result, outdir / "mwis_instances")

    if not args.no_figures:
        label = config.solver
        series = {label: (metrics.times, metrics.cumulative_approved)}
        plots.plot_cumulative_approved(series, outdir / "cumulative_approved.png")
        plots.plot_active_aircraft({label: (metrics.times, metrics.active)}, outdir / "active_aircraft.png")
        bound = [rec.eligible * config.candidates_per_request for rec in result.steps]
        plots.plot_vertex_counts(metrics.times, metrics.vertex_counts, bound, outdir / "mwis_vertices.png")
        plots.plot_network(network, outdir / "network.png")

    print(f"approved {len(result.approved)} / {len(requests)} requests "
          f"({len(result.rejected)} rejected, {len(result.pending)} pending)")
    print(f"reports in {outdir}")
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    problem = load_instance(args.instance)
    if args.solver == "greedy":
        result = greedy_mwis(problem)
    elif args.solver == "exact":
        result = exact_mwis(problem, args.time_limit)
    elif args.solver == "sa":
        schedule = SaSchedule(num_samples=args.samples, sweeps_per_sample=args.sweeps, seed=args.seed or 0)
        result = solve_mwis_via_sampler(problem, DEFAULT_PENALTY, schedule)
    else:
        raise ValueError(f"solve supports greedy|exact|sa, got {args.solver!r}")
    print(f"objective {result.objective}")
    print(f"bits {''.join(str(b) for b in result.assignment)}")
    print(f"wall_time {result.wall_time:.6f}s", file=sys.stderr)
    if result.proven_optimal is False:
        print("optimality not proven (time limit hit)", file=sys.stderr)
    return 0


def cmd_bench_tts(args: argparse.Namespace) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    schedule = SaSchedule(num_samples=args.samples, sweeps_per_sample=args.sweeps, seed=args.seed or 0)
    solvers = tuple(s.strip() for s in args.solvers.split(",") if s.strip())
    records, stats = bench.run_tts_benchmark(
        args.corpus, solvers=solvers, schedule=schedule, p=args.p,
        exact_time_limit=args.exact_time_limit,
    )
    reports.write_manifest(outdir, "bench-tts", {
        "corpus": str(args.corpus), "solvers": list(solvers), "p": args.p,
        "samples": args.samples, "sweeps": args.sweeps, "seed": args.seed or 0,
        "exact_time_limit": args.exact_time_limit,
    })
    reports.write_tts_records_csv(records, outdir / "tts_records.csv")
    reports.write_tts_summary_csv(stats, outdir / "tts_summary.csv")
    if not args.no_figures:
        by_solver: dict[str, list[float]] = {}
        for rec in records:
            by_solver.setdefault(rec.solver, []).append(rec.tts)
        plots.plot_tts_box(by_solver, outdir / "tts_box.png")
    for s in stats:
        print(f"{s.solver}: median TTS {s.median:.3e} s over {s.finite} finite / {s.count} instances")
    print(f"reports in {outdir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deconflict",
        description="Strategic deconfliction simulator and MWIS solver bench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-network", help="generate a synthetic grid network")
    gen.add_argument("--rows", type=int, required=True)
    gen.add_argument("--cols", type=int, required=True)
    gen.add_argument("--spacing", type=float, default=800.0, help="grid spacing in meters")
    gen.add_argument("--altitude", type=float, default=100.0, help="corridor altitude in meters")
    gen.add_argument("--jitter", type=float, default=0.0, help="uniform position jitter in meters")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--out", required=True, help="output network JSON path")
    gen.set_defaults(func=cmd_gen_network)

    sim = sub.add_parser("simulate", help="run the scheduling simulation")
    sim.add_argument("--network", required=True, help="network JSON path")
    sim.add_argument("--config", help="simulation config JSON path")
    sim.add_argument("--requests", help="optional request list JSON path")
    sim.add_argument("--solver", choices=SOLVER_CHOICES, help="override the configured solver")
    sim.add_argument("--seed", type=int, help="override the configured seed")
    sim.add_argument("--export-instances", action="store_true", help="write per-step MWIS JSON files")
    sim.add_argument("--no-figures", action="store_true")
    sim.add_argument("-o", "--out", required=True, help="output directory")
    sim.set_defaults(func=cmd_simulate)

    solve = sub.add_parser("solve", help="solve one MWIS instance file")
    solve.add_argument("--instance", required=True)
    solve.add_argument("--solver", choices=("greedy", "exact", "sa"), default="exact")
    solve.add_argument("--seed", type=int)
    solve.add_argument("--samples", type=int, default=100)
    solve.add_argument("--sweeps", type=int, default=64)
    solve.add_argument("--time-limit", type=float, help="exact solver time limit in seconds")
    solve.set_defaults(func=cmd_solve)

    tts = sub.add_parser("bench-tts", help="time-to-solution benchmark over an instance corpus")
    tts.add_argument("--corpus", required=True, help="directory of MWIS instance JSON files")
    tts.add_argument("--solvers", default="greedy,exact,sa")
    tts.add_argument("--p", type=float, default=0.99, help="target confidence")
    tts.add_argument("--samples", type=int, default=10_000)
    tts.add_argument("--sweeps", type=int, default=64)
    tts.add_argument("--seed", type=int)
    tts.add_argument("--exact-time-limit", type=float, default=60.0)
    tts.add_argument("--no-figures", action="store_true")
    tts.add_argument("-o", "--out", required=True, help="output directory")
    tts.set_defaults(func=cmd_bench_tts)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except (NetworkError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(main())
