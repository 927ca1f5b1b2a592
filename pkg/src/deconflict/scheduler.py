"""Dynamic scheduling loop over simulated time, plus the shortest-FIFO baseline.

Each step gathers the requests eligible to start now, generates candidate
routes, drops candidates that would come too close to already-approved
flights, builds the conflict graph over the survivors, and lets the
configured solver pick one route per request. Requests retry every step
inside their window and expire once it passes. Approved flights always
start at the current step time.
"""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import seeding
from .candidates import CandidateRoute, FlightRequest, generate_candidates
from .conflict import build_conflict_graph, filter_against_active
from .mwis import MwisProblem
from .network import RoutingNetwork
from .solvers import SaSchedule, SolverResult, exact_mwis, greedy_mwis, solve_mwis_via_sampler
from .trajectory import Trajectory, sample_trajectory

SOLVER_CHOICES = ("greedy", "exact", "sa", "fifo", "fifo-none")

REASON_EXPIRED = "expired"
REASON_NO_SAFE_ROUTE = "no_safe_route"


@dataclass(frozen=True)
class SimConfig:
    """Simulation settings; defaults follow the reference operating scenario."""

    scheduling_interval: float = 30.0
    horizon: float = 3500.0
    candidates_per_request: int = 5
    d_min: float = 100.0
    request_period: float = 30.0
    requests_per_period: int = 1
    start_delay_window: float = 60.0
    speed: float = 20.0
    sample_interval: float = 1.0
    penalty_factor: float = 5.0
    penalty_cumulative: bool = True
    solver: str = "exact"
    seed: int = 0
    qubo_penalty: float = 2.0
    sa_num_samples: int = 100
    sa_sweeps_per_sample: int = 64
    sa_beta_start: float = 0.1
    sa_beta_end: float = 10.0

    def __post_init__(self) -> None:
        positive = (
            "scheduling_interval", "horizon", "candidates_per_request", "d_min",
            "request_period", "requests_per_period", "speed", "sample_interval",
        )
        for name in positive:
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.start_delay_window < 0:
            raise ValueError(f"start_delay_window must be >= 0, got {self.start_delay_window}")
        if self.penalty_factor < 0:
            raise ValueError(f"penalty_factor must be >= 0, got {self.penalty_factor}")
        ratio = self.scheduling_interval / self.sample_interval
        if abs(ratio - round(ratio)) > 1e-9:
            raise ValueError(
                "scheduling_interval must be a multiple of sample_interval so flight "
                "start times stay on the shared sampling lattice"
            )
        if self.solver not in SOLVER_CHOICES:
            raise ValueError(f"unknown solver {self.solver!r}; choose one of {SOLVER_CHOICES}")

    @classmethod
    def from_dict(cls, data: dict) -> "SimConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path: str | Path) -> "SimConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValueError(f"cannot parse config file {path}: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def sa_schedule(self, seed: int) -> SaSchedule:
        return SaSchedule(
            num_samples=self.sa_num_samples,
            sweeps_per_sample=self.sa_sweeps_per_sample,
            beta_start=self.sa_beta_start,
            beta_end=self.sa_beta_end,
            seed=seed,
        )

    def step_times(self) -> list[float]:
        count = int(math.ceil(self.horizon / self.scheduling_interval - 1e-9))
        return [i * self.scheduling_interval for i in range(count)]


@dataclass(frozen=True)
class ScheduledFlight:
    request_id: int
    route: CandidateRoute
    trajectory: Trajectory
    approved_at: float


@dataclass(frozen=True)
class RejectedRequest:
    request_id: int
    reason: str
    time: float


@dataclass(frozen=True)
class StepRecord:
    step: int
    time: float
    eligible: int
    candidates_generated: int
    candidates_surviving: int
    mwis_vertices: int
    mwis_edges: int
    solver_objective: float
    solver_wall_time: float


@dataclass
class SimResult:
    """Everything a run produced; approved, rejected and pending partition the requests."""

    approved: list[ScheduledFlight] = field(default_factory=list)
    rejected: list[RejectedRequest] = field(default_factory=list)
    pending: list[int] = field(default_factory=list)
    steps: list[StepRecord] = field(default_factory=list)
    instances: list[tuple[float, MwisProblem]] = field(default_factory=list)


def generate_requests(network: RoutingNetwork, config: SimConfig) -> list[FlightRequest]:
    """Seeded request stream: every period emits distinct random aerodrome pairs.

    Each request may start at its submission time and no later than
    start_delay_window seconds after it.
    """
    aero = list(network.aerodromes)
    if len(aero) < 2:
        raise ValueError(f"need at least 2 aerodromes, got {len(aero)}")
    n_pairs = len(aero) * (len(aero) - 1)
    if config.requests_per_period > n_pairs:
        raise ValueError(
            f"requests_per_period {config.requests_per_period} exceeds {n_pairs} ordered pairs"
        )

    rng = seeding.derive_rng(config.seed, seeding.REQUESTS)
    requests: list[FlightRequest] = []
    t = 0.0
    while t < config.horizon - 1e-9:
        picks = rng.choice(n_pairs, size=config.requests_per_period, replace=False)
        for p in picks:
            s, rest = divmod(int(p), len(aero) - 1)
            d = rest if rest < s else rest + 1
            requests.append(
                FlightRequest(
                    request_id=len(requests),
                    source=aero[s],
                    destination=aero[d],
                    submitted_at=t,
                    earliest_start=t,
                    latest_start=t + config.start_delay_window,
                )
            )
        t += config.request_period
    return requests


def load_requests(path: str | Path, network: RoutingNetwork) -> list[FlightRequest]:
    """Read a request list from JSON and validate it against the network."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot parse requests file {path}: {exc}") from exc
    aero = set(network.aerodromes)
    requests = []
    for item in data:
        req = FlightRequest(
            request_id=int(item["request_id"]),
            source=int(item["source"]),
            destination=int(item["destination"]),
            submitted_at=float(item["submitted_at"]),
            earliest_start=float(item["earliest_start"]),
            latest_start=float(item["latest_start"]),
        )
        for node in (req.source, req.destination):
            if node not in aero:
                raise ValueError(f"request {req.request_id}: node {node} is not an aerodrome")
        requests.append(req)
    ids = [r.request_id for r in requests]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate request ids in request file")
    return requests


def _make_solver(config: SimConfig) -> Callable[[MwisProblem, int], SolverResult]:
    if config.solver == "greedy":
        return lambda problem, step: greedy_mwis(problem)
    if config.solver == "exact":
        return lambda problem, step: exact_mwis(problem)
    if config.solver == "sa":
        def solve(problem: MwisProblem, step: int) -> SolverResult:
            seed = seeding.derive_seed(config.seed, seeding.SA_SOLVER, step)
            return solve_mwis_via_sampler(problem, config.qubo_penalty, config.sa_schedule(seed))
        return solve
    raise ValueError(f"run_simulation has no solver {config.solver!r}; use run_fifo_baseline")


def _expire(pending: dict[int, FlightRequest], rejected: list[RejectedRequest], t: float) -> None:
    for rid in sorted(pending):
        if pending[rid].latest_start < t - 1e-9:
            rejected.append(RejectedRequest(rid, REASON_EXPIRED, t))
            del pending[rid]


def _eligible(pending: dict[int, FlightRequest], t: float) -> list[FlightRequest]:
    return [
        pending[rid]
        for rid in sorted(pending)
        if pending[rid].earliest_start <= t + 1e-9 and t <= pending[rid].latest_start + 1e-9
    ]


def run_simulation(
    network: RoutingNetwork,
    requests: Sequence[FlightRequest],
    config: SimConfig,
    export_instances: bool = False,
) -> SimResult:
    """Run the optimizing scheduler over the whole horizon.

    Per step: expire stale requests, regenerate candidates for the eligible
    ones starting at the step time, filter them against every approved
    flight, build the conflict graph, solve the MWIS, and approve one route
    per selected vertex. With export_instances=True every solved instance
    is kept on the result.
    """
    solve = _make_solver(config)
    result = SimResult()
    pending = {r.request_id: r for r in requests}
    if len(pending) != len(requests):
        raise ValueError("duplicate request ids")
    routes_by_vertex: list[tuple[int, CandidateRoute, Trajectory]] = []
    active: list[Trajectory] = []

    for step, t in enumerate(config.step_times()):
        _expire(pending, result.rejected, t)
        eligible = _eligible(pending, t)

        per_request: dict[int, list[tuple[Trajectory, float]]] = {}
        routes_by_vertex = []
        generated = 0
        for req in eligible:
            routes = generate_candidates(
                network, req, config.candidates_per_request,
                config.penalty_factor, config.penalty_cumulative,
            )
            trajs = [
                sample_trajectory(r, network, t, config.speed, config.sample_interval)
                for r in routes
            ]
            generated += len(routes)
            kept = filter_against_active(trajs, active, config.d_min)
            if kept:
                per_request[req.request_id] = [(trajs[i], routes[i].weight) for i in kept]
                routes_by_vertex.extend((req.request_id, routes[i], trajs[i]) for i in kept)

        graph = build_conflict_graph(per_request, config.d_min)
        problem = graph.as_mwis_problem()
        if export_instances:
            result.instances.append((t, problem))

        solver_objective = 0.0
        solver_wall = 0.0
        if problem.n:
            solved = solve(problem, step)
            solver_objective = solved.objective
            solver_wall = solved.wall_time
            for vid, bit in enumerate(solved.assignment):
                if not bit:
                    continue
                rid, route, traj = routes_by_vertex[vid]
                result.approved.append(ScheduledFlight(rid, route, traj, t))
                active.append(traj)
                del pending[rid]

        result.steps.append(
            StepRecord(
                step=step,
                time=t,
                eligible=len(eligible),
                candidates_generated=generated,
                candidates_surviving=graph.n,
                mwis_vertices=problem.n,
                mwis_edges=len(problem.edges),
                solver_objective=solver_objective,
                solver_wall_time=solver_wall,
            )
        )

    result.pending = sorted(pending)
    return result


def run_fifo_baseline(
    network: RoutingNetwork,
    requests: Sequence[FlightRequest],
    config: SimConfig,
) -> SimResult:
    """Shortest-FIFO baseline: arrival order, first safe route, no joint solve.

    Eligible requests are processed by ascending (submitted_at, request_id);
    each takes its highest-weight candidate that clears every approved
    flight, including ones approved earlier in the same step.
    """
    result = SimResult()
    pending = {r.request_id: r for r in requests}
    if len(pending) != len(requests):
        raise ValueError("duplicate request ids")
    active: list[Trajectory] = []

    for step, t in enumerate(config.step_times()):
        _expire(pending, result.rejected, t)
        eligible = sorted(_eligible(pending, t), key=lambda r: (r.submitted_at, r.request_id))

        generated = 0
        surviving = 0
        step_objective = 0.0
        for req in eligible:
            routes = generate_candidates(
                network, req, config.candidates_per_request,
                config.penalty_factor, config.penalty_cumulative,
            )
            trajs = [
                sample_trajectory(r, network, t, config.speed, config.sample_interval)
                for r in routes
            ]
            generated += len(routes)
            kept = filter_against_active(trajs, active, config.d_min)
            surviving += len(kept)
            if kept:
                first = kept[0]  # candidates are sorted by descending weight
                result.approved.append(ScheduledFlight(req.request_id, routes[first], trajs[first], t))
                active.append(trajs[first])
                step_objective += routes[first].weight
                del pending[req.request_id]

        result.steps.append(
            StepRecord(
                step=step,
                time=t,
                eligible=len(eligible),
                candidates_generated=generated,
                candidates_surviving=surviving,
                mwis_vertices=0,
                mwis_edges=0,
                solver_objective=step_objective,
                solver_wall_time=0.0,
            )
        )

    result.pending = sorted(pending)
    return result


def verify_separation(
    result: SimResult,
    network: RoutingNetwork,
    config: SimConfig,
) -> list[tuple[int, int, float, float]]:
    """Independent post-hoc safety check over all approved flights.

    Replays every trajectory from its route and start time and scans all
    pairs at their shared sample times with a direct distance computation.
    Returns (request_id_a, request_id_b, time, distance) for every point
    strictly below d_min; an empty list means the schedule is safe.
    """
    dt = config.sample_interval
    replayed = [
        (f.request_id, sample_trajectory(f.route, network, f.approved_at, config.speed, dt))
        for f in result.approved
    ]
    violations: list[tuple[int, int, float, float]] = []
    for i in range(len(replayed)):
        rid_a, a = replayed[i]
        ia0 = round(a.start_time / dt)
        for j in range(i + 1, len(replayed)):
            rid_b, b = replayed[j]
            ib0 = round(b.start_time / dt)
            lo = max(ia0, ib0)
            hi = min(ia0 + a.n_lattice - 1, ib0 + b.n_lattice - 1)
            if lo <= hi:
                pa = a.positions[lo - ia0 : hi - ia0 + 1]
                pb = b.positions[lo - ib0 : hi - ib0 + 1]
                dist = np.linalg.norm(pa - pb, axis=1)
                for k in np.flatnonzero(dist < config.d_min):
                    violations.append((rid_a, rid_b, (lo + int(k)) * dt, float(dist[k])))
            a_off = a.n_lattice < len(a.times)
            b_off = b.n_lattice < len(b.times)
            if a_off and b_off and abs(a.end_time - b.end_time) <= 1e-9:
                d = float(np.linalg.norm(a.positions[-1] - b.positions[-1]))
                if d < config.d_min:
                    violations.append((rid_a, rid_b, a.end_time, d))
    return violations
