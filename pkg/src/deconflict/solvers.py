"""Interchangeable MWIS solvers: greedy, exact branch-and-bound, and SA sampling.

All three return only feasible (independent) assignments. The sampling
solver anneals the QUBO form with single-bit Metropolis sweeps over a
geometric inverse-temperature ladder, refines every sample by steepest
descent, and repairs any residual constraint violation by clearing the
lower-weight endpoint of each violated edge.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .mwis import DEFAULT_PENALTY, MwisProblem, Qubo, objective, to_qubo


@dataclass(frozen=True)
class SaSchedule:
    """Settings for the simulated-annealing sampler.

    Each sample is an independent run of sweeps_per_sample full sweeps; the
    inverse temperature follows a geometric ladder from beta_start to
    beta_end, one rung per sweep.
    """

    num_samples: int = 100
    sweeps_per_sample: int = 64
    beta_start: float = 0.1
    beta_end: float = 10.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.num_samples < 1 or self.sweeps_per_sample < 1:
            raise ValueError("num_samples and sweeps_per_sample must be >= 1")
        if not 0 < self.beta_start < self.beta_end:
            raise ValueError(
                f"need 0 < beta_start < beta_end, got {self.beta_start}, {self.beta_end}"
            )


@dataclass
class SolverResult:
    """Outcome of one solve call; wall_time covers the call only.

    proven_optimal is set by the exact solver (False after a timeout);
    per_sample_records and sweep_time are set by the sampling solver.
    """

    assignment: list[int]
    objective: float
    wall_time: float
    proven_optimal: bool | None = None
    per_sample_records: list[tuple[float, bool]] | None = None
    sweep_time: float | None = None


def greedy_mwis(problem: MwisProblem) -> SolverResult:
    """Greedy selection with the degree-weighted guarantee.

    Repeatedly picks, among the residual graph's vertices scanned by
    descending w_i / (d(i) + 1), the first vertex i whose neighbors satisfy
    sum_j w_j / (d(j) + 1) <= w_i (the maximizer always does), then removes
    i and its neighbors. The total weight is at least
    sum_i w_i / (d(i) + 1) over the original graph.
    """
    t0 = time.perf_counter()
    n = problem.n
    w = problem.weights
    adj = problem.neighbor_sets()

    alive = set(range(n))
    picked: list[int] = []
    while alive:
        deg = {i: len(adj[i] & alive) for i in alive}
        order = sorted(alive, key=lambda i: (-w[i] / (deg[i] + 1), i))
        chosen = order[0]
        for i in order:
            if sum(w[j] / (deg[j] + 1) for j in adj[i] & alive) <= w[i] + 1e-12:
                chosen = i
                break
        picked.append(chosen)
        alive -= adj[chosen] | {chosen}

    bits = [0] * n
    for i in picked:
        bits[i] = 1
    return SolverResult(bits, objective(problem, bits), time.perf_counter() - t0)


class _Timeout(Exception):
    pass


def exact_mwis(problem: MwisProblem, time_limit: float | None = None) -> SolverResult:
    """Branch and bound over vertices ordered by descending w / (degree + 1).

    The bound at each node is the current weight plus the total weight of
    all vertices still selectable; subtrees that cannot beat the incumbent
    are pruned. Without a timeout the result is provably optimal; on
    timeout the best incumbent is returned with proven_optimal=False.
    """
    t0 = time.perf_counter()
    n = problem.n
    if n == 0:
        return SolverResult([], 0.0, time.perf_counter() - t0, proven_optimal=True)

    w = problem.weights
    deg = problem.degrees()
    order = sorted(range(n), key=lambda i: (-w[i] / (deg[i] + 1), i))

    close_mask = [1 << i for i in range(n)]  # vertex plus neighbors
    for a, b in problem.edges:
        close_mask[a] |= 1 << b
        close_mask[b] |= 1 << a

    warm = greedy_mwis(problem)
    best_w = warm.objective
    best_bits = list(warm.assignment)

    full = (1 << n) - 1
    total_w = float(sum(w))
    nodes_visited = 0

    def weight_of(mask: int) -> float:
        s = 0.0
        while mask:
            lsb = mask & -mask
            s += w[lsb.bit_length() - 1]
            mask ^= lsb
        return s

    def dfs(oi: int, mask: int, cur_w: float, rem_w: float, cur_bits: int) -> None:
        nonlocal best_w, best_bits, nodes_visited
        nodes_visited += 1
        if time_limit is not None and nodes_visited % 256 == 0:
            if time.perf_counter() - t0 > time_limit:
                raise _Timeout
        if cur_w + rem_w <= best_w + 1e-12:
            return
        while oi < n and not (mask >> order[oi]) & 1:
            oi += 1
        if oi == n:
            if cur_w > best_w:
                best_w = cur_w
                best_bits = [(cur_bits >> i) & 1 for i in range(n)]
            return
        v = order[oi]
        removed = mask & close_mask[v]
        dfs(oi + 1, mask & ~removed, cur_w + w[v], rem_w - weight_of(removed), cur_bits | (1 << v))
        dfs(oi + 1, mask & ~(1 << v), cur_w, rem_w - w[v], cur_bits)

    proven = True
    try:
        dfs(0, full, 0.0, total_w, 0)
    except _Timeout:
        proven = False

    return SolverResult(
        best_bits,
        objective(problem, best_bits),
        time.perf_counter() - t0,
        proven_optimal=proven,
    )


def _sa_batch(q: Qubo, schedule: SaSchedule) -> tuple[np.ndarray, float]:
    """All samples annealed in lockstep; returns (samples, sweep-loop seconds).

    The random stream is fixed by the schedule seed: first the initial
    assignments, then one uniform block per (sweep, bit). Changing that
    layout changes seeded regression values.
    """
    n = q.n
    r = schedule.num_samples
    rng = np.random.default_rng(schedule.seed)
    x = rng.integers(0, 2, size=(r, n), dtype=np.uint8)
    if n == 0:
        return x, 0.0

    coupling, h = q.dense()
    betas = np.geomspace(schedule.beta_start, schedule.beta_end, schedule.sweeps_per_sample)

    t0 = time.perf_counter()
    fields = x.astype(np.float64) @ coupling + h
    for beta in betas:
        for i in range(n):
            delta_e = (1.0 - 2.0 * x[:, i]) * fields[:, i]
            u = rng.random(r)
            accept = u < np.exp(np.clip(-beta * delta_e, -700.0, 0.0))
            if accept.any():
                sign = 1.0 - 2.0 * x[accept, i]
                x[accept, i] ^= 1
                fields[accept] += sign[:, None] * coupling[i]
    return x, time.perf_counter() - t0


def _descend_batch(coupling: np.ndarray, h: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Steepest-descent bit flips per row until no flip lowers the energy."""
    if x.shape[1] == 0:
        return x
    x = x.copy()
    fields = x.astype(np.float64) @ coupling + h
    while True:
        delta_e = (1.0 - 2.0 * x) * fields
        cols = np.argmin(delta_e, axis=1)  # ties resolve to the lowest index
        rows = np.flatnonzero(delta_e[np.arange(len(x)), cols] < 0.0)
        if len(rows) == 0:
            return x
        i = cols[rows]
        sign = 1.0 - 2.0 * x[rows, i]
        x[rows, i] ^= 1
        fields[rows] += sign[:, None] * coupling[i]


def _qubo_energies(q: Qubo, x: np.ndarray) -> np.ndarray:
    coupling, h = q.dense()
    xf = x.astype(np.float64)
    return 0.5 * np.einsum("ri,ri->r", xf @ coupling, xf) + xf @ h


def sa_sample_qubo(q: Qubo, schedule: SaSchedule) -> list[list[int]]:
    """num_samples independent annealing runs from uniform random starts.

    Deterministic given the schedule seed; raw samples are returned without
    refinement or repair.
    """
    x, _ = _sa_batch(q, schedule)
    return [[int(b) for b in row] for row in x]


def steepest_descent(q: Qubo, bits: Sequence[int]) -> list[int]:
    """Refine one assignment by repeated best single-bit flips.

    Flips the bit giving the largest energy decrease (ties to the lowest
    index) until no flip strictly decreases the energy.
    """
    if len(bits) != q.n:
        raise ValueError(f"assignment length {len(bits)} != qubo size {q.n}")
    coupling, h = q.dense()
    x = np.asarray(bits, dtype=np.uint8).reshape(1, -1)
    out = _descend_batch(coupling, h, x)
    return [int(b) for b in out[0]]


def _repair_batch(problem: MwisProblem, x: np.ndarray) -> np.ndarray:
    """Clear the lower-weight endpoint of every violated edge, in place.

    Ties clear the higher index. Returns the per-sample repaired flags.
    """
    repaired = np.zeros(len(x), dtype=bool)
    edges = problem.sorted_edges()
    if not edges:
        return repaired
    w = problem.weights
    ei = np.array([a for a, _ in edges])
    ej = np.array([b for _, b in edges])
    for r in np.flatnonzero((x[:, ei] & x[:, ej]).any(axis=1)):
        repaired[r] = True
        for a, b in edges:
            if x[r, a] and x[r, b]:
                drop = a if (w[a] < w[b] or (w[a] == w[b] and a > b)) else b
                x[r, drop] = 0
    return repaired


def solve_mwis_via_sampler(
    problem: MwisProblem,
    penalty: float = DEFAULT_PENALTY,
    schedule: SaSchedule = SaSchedule(),
) -> SolverResult:
    """Full sampling pipeline: QUBO form, SA samples, refinement, repair.

    Returns the feasible sample with the largest objective (first such
    sample on ties). per_sample_records holds each refined sample's QUBO
    energy and whether repair had to touch it.
    """
    t0 = time.perf_counter()
    q = to_qubo(problem, penalty)
    if problem.n == 0:
        return SolverResult([], 0.0, time.perf_counter() - t0, per_sample_records=[], sweep_time=0.0)

    x, sweep_seconds = _sa_batch(q, schedule)
    coupling, h = q.dense()
    x = _descend_batch(coupling, h, x)
    repaired = _repair_batch(problem, x)

    energies = _qubo_energies(q, x)
    objectives = x.astype(np.float64) @ np.asarray(problem.weights)
    best = int(np.argmax(objectives))
    bits = [int(b) for b in x[best]]
    return SolverResult(
        bits,
        objective(problem, bits),
        time.perf_counter() - t0,
        per_sample_records=list(zip(energies.tolist(), repaired.tolist())),
        sweep_time=sweep_seconds,
    )
