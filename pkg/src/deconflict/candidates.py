"""Diverse candidate route generation: Dijkstra with iterative edge penalization.

After each extracted path, every traversed edge's working cost grows by
penalty_factor times its original length, so later rounds steer away from
earlier routes. Route lengths and weights always use the true geometric
lengths, never the penalized working costs.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import pairwise
from typing import Mapping

from .conflict import route_weight
from .network import RoutingNetwork


@dataclass(frozen=True)
class FlightRequest:
    """One transport request between two aerodromes with a start-time window."""

    request_id: int
    source: int
    destination: int
    submitted_at: float
    earliest_start: float
    latest_start: float

    def __post_init__(self) -> None:
        if self.source == self.destination:
            raise ValueError(f"request {self.request_id}: source equals destination {self.source}")
        if self.earliest_start > self.latest_start:
            raise ValueError(
                f"request {self.request_id}: earliest_start {self.earliest_start} "
                f"after latest_start {self.latest_start}"
            )


@dataclass(frozen=True)
class CandidateRoute:
    """A simple node path with its geometric length and weight in (0, 1]."""

    request_id: int
    node_sequence: tuple[int, ...]
    length: float
    weight: float


def _edge_key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def shortest_path(
    network: RoutingNetwork,
    source: int,
    destination: int,
    edge_costs: Mapping[tuple[int, int], float] | None = None,
) -> tuple[list[int], float]:
    """Minimum-cost simple path under the given costs (stored lengths by default).

    Equal-cost ties resolve to the lexicographically smallest node sequence,
    which makes repeated runs fully deterministic.
    """
    for node in (source, destination):
        if not 0 <= node < network.n:
            raise ValueError(f"node {node} not in network")
    if edge_costs is not None:
        for key, cost in edge_costs.items():
            if cost <= 0:
                raise ValueError(f"edge cost for {key} must be positive, got {cost}")
    if source == destination:
        return [source], 0.0

    # Heap entries (cost, path) settle each node with the cheapest cost and,
    # among equal costs, the lexicographically smallest path: every shortest
    # predecessor settles strictly earlier because costs are positive.
    heap: list[tuple[float, tuple[int, ...]]] = [(0.0, (source,))]
    settled: set[int] = set()
    while heap:
        cost, path = heapq.heappop(heap)
        node = path[-1]
        if node in settled:
            continue
        settled.add(node)
        if node == destination:
            return list(path), cost
        for nbr, length in network.adjacency[node]:
            if nbr in settled:
                continue
            step = edge_costs[_edge_key(node, nbr)] if edge_costs is not None else length
            heapq.heappush(heap, (cost + step, path + (nbr,)))
    raise ValueError(f"no path from {source} to {destination}")


def generate_candidates(
    network: RoutingNetwork,
    request: FlightRequest,
    k: int = 5,
    penalty_factor: float = 5.0,
    cumulative: bool = True,
) -> list[CandidateRoute]:
    """Up to k distinct short routes for a request, sorted by descending weight.

    Runs k shortest-path rounds on a working cost map. With cumulative
    penalization (the default) each traversal adds penalty_factor times the
    original edge length on top of the current working cost; otherwise a
    penalized edge is pinned at (1 + penalty_factor) times its original
    length. Duplicate node sequences are dropped, so the result can be
    shorter than k. The first route is always the true shortest one.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if penalty_factor < 0:
        raise ValueError(f"penalty_factor must be >= 0, got {penalty_factor}")

    base = {_edge_key(a, b): length for (a, b), length in zip(network.edges, network.lengths)}
    working = dict(base)

    sequences: list[tuple[int, ...]] = []
    for _ in range(k):
        path, _ = shortest_path(network, request.source, request.destination, working)
        sequences.append(tuple(path))
        for a, b in pairwise(path):
            key = _edge_key(a, b)
            if cumulative:
                working[key] += penalty_factor * base[key]
            else:
                working[key] = base[key] * (1.0 + penalty_factor)

    unique = list(dict.fromkeys(sequences))
    lengths = [sum(base[_edge_key(a, b)] for a, b in pairwise(seq)) for seq in unique]
    shortest_length = lengths[0]  # round one runs on unpenalized costs
    routes = [
        CandidateRoute(request.request_id, seq, length, route_weight(length, shortest_length))
        for seq, length in zip(unique, lengths)
    ]
    return sorted(routes, key=lambda r: r.weight, reverse=True)
