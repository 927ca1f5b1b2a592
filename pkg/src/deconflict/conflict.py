"""Pairwise separation checks and the weighted conflict graph over candidates.

Two candidate routes are in conflict when their trajectories come closer
than the separation minimum at any shared sample time (strictly below the
threshold). Candidates of the same request always form a complete subgraph
so that at most one of them can be selected.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping, Sequence

import numpy as np

from .mwis import MwisProblem

if TYPE_CHECKING:
    from .trajectory import Trajectory

SAME_REQUEST = "same_request"
CROSS_CONFLICT = "cross_conflict"

_LATTICE_EPS = 1e-9


def route_weight(route_length: float, shortest_length: float) -> float:
    """Route weight: shortest length over route length, 1.0 for the shortest route."""
    if not 0.0 < shortest_length:
        raise ValueError(f"shortest length must be positive, got {shortest_length}")
    if route_length < shortest_length * (1.0 - 1e-9):
        raise ValueError(f"route length {route_length} below shortest length {shortest_length}")
    return min(1.0, shortest_length / route_length)


def _lattice_index(t: float, dt: float) -> int:
    k = t / dt
    rounded = round(k)
    if abs(k - rounded) > _LATTICE_EPS:
        raise ValueError(f"misaligned sampling lattices: time {t} is not a multiple of {dt}")
    return int(rounded)


def min_separation(a: "Trajectory", b: "Trajectory") -> float | None:
    """Minimum distance over all shared sample times, or None without temporal overlap.

    Both trajectories must be sampled at the same interval with start times
    on the shared lattice (integer multiples of the interval).
    """
    if abs(a.sample_interval - b.sample_interval) > _LATTICE_EPS:
        raise ValueError(
            f"misaligned sampling lattices: intervals {a.sample_interval} vs {b.sample_interval}"
        )
    dt = a.sample_interval
    ia0 = _lattice_index(a.start_time, dt)
    ib0 = _lattice_index(b.start_time, dt)

    lo = max(ia0, ib0)
    hi = min(ia0 + a.n_lattice - 1, ib0 + b.n_lattice - 1)

    best: float | None = None
    if lo <= hi:
        pa = a.positions[lo - ia0 : hi - ia0 + 1]
        pb = b.positions[lo - ib0 : hi - ib0 + 1]
        best = float(np.min(np.linalg.norm(pa - pb, axis=1)))

    # Off-lattice landing samples only coincide when the end times match.
    a_off = a.n_lattice < len(a.times)
    b_off = b.n_lattice < len(b.times)
    if a_off and b_off and abs(a.end_time - b.end_time) <= _LATTICE_EPS:
        d = float(np.linalg.norm(a.positions[-1] - b.positions[-1]))
        best = d if best is None else min(best, d)
    return best


def filter_against_active(
    candidates: Sequence["Trajectory"],
    active: Sequence["Trajectory"],
    d_min: float,
) -> list[int]:
    """Indices of candidates keeping at least d_min from every active flight.

    Separation strictly below d_min discards a candidate; exactly d_min, or
    no temporal overlap at all, keeps it.
    """
    if d_min <= 0:
        raise ValueError(f"d_min must be positive, got {d_min}")
    kept = []
    for idx, cand in enumerate(candidates):
        ok = True
        for flight in active:
            sep = min_separation(cand, flight)
            if sep is not None and sep < d_min:
                ok = False
                break
        if ok:
            kept.append(idx)
    return kept


@dataclass(frozen=True)
class ConflictVertex:
    vertex_id: int
    request_id: int
    candidate_index: int
    weight: float


@dataclass(frozen=True)
class ConflictGraph:
    """Vertices are candidate routes; edges forbid selecting both endpoints."""

    vertices: tuple[ConflictVertex, ...]
    edges: dict[tuple[int, int], str]  # (u, v) with u < v -> edge kind

    @property
    def n(self) -> int:
        return len(self.vertices)

    def as_mwis_problem(self) -> MwisProblem:
        return MwisProblem([v.weight for v in self.vertices], list(self.edges))


def build_conflict_graph(
    per_request: Mapping[int, Sequence[tuple["Trajectory", float]]],
    d_min: float,
) -> ConflictGraph:
    """Conflict graph over already-filtered candidates, grouped by request.

    Vertex order is deterministic: ascending request id, then the given
    candidate order. Same-request pairs always get an edge; cross-request
    pairs get one exactly when their separation drops below d_min.
    """
    vertices: list[ConflictVertex] = []
    trajs: list["Trajectory"] = []
    for request_id in sorted(per_request):
        for cand_idx, (traj, weight) in enumerate(per_request[request_id]):
            if not 0.0 < weight <= 1.0 + 1e-12:
                raise ValueError(f"request {request_id} candidate {cand_idx}: weight {weight} outside (0, 1]")
            vertices.append(ConflictVertex(len(vertices), request_id, cand_idx, float(weight)))
            trajs.append(traj)

    edges: dict[tuple[int, int], str] = {}
    for u in range(len(vertices)):
        for v in range(u + 1, len(vertices)):
            if vertices[u].request_id == vertices[v].request_id:
                edges[(u, v)] = SAME_REQUEST
            else:
                sep = min_separation(trajs[u], trajs[v])
                if sep is not None and sep < d_min:
                    edges[(u, v)] = CROSS_CONFLICT
    return ConflictGraph(tuple(vertices), edges)
