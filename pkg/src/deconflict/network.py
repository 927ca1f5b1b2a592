"""Routing networks: aerodromes (nodes with 3D positions) joined by corridors (edges).

Coordinates are local ENU meters, so separation checks reduce to plain
Euclidean distance. Networks are immutable after construction and safe for
concurrent shared reads.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import seeding
from .fileio import atomic_write_text

# Stored edge lengths must agree with node geometry to this relative tolerance.
LENGTH_RTOL = 1e-6


class NetworkError(ValueError):
    """A network file or construction violates the format or geometry invariants."""


def euclidean_distance(a, b) -> float:
    """Straight-line distance in meters between two 3D points."""
    dx = float(a[0]) - float(b[0])
    dy = float(a[1]) - float(b[1])
    dz = float(a[2]) - float(b[2])
    return math.sqrt(dx * dx + dy * dy + dz * dz)


@dataclass(eq=False)
class RoutingNetwork:
    """Geometric graph of nodes (some marked aerodromes) and corridor edges.

    Node ids are dense 0..n-1. Edges are unordered pairs stored as (a, b)
    with a < b; their lengths are stored explicitly and validated against
    the node geometry so hand-authored networks can be inspected.
    """

    names: tuple[str, ...]
    positions: np.ndarray  # (n, 3) float64
    edges: tuple[tuple[int, int], ...]
    lengths: tuple[float, ...]
    aerodromes: tuple[int, ...]
    adjacency: dict[int, tuple[tuple[int, float], ...]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.positions = np.asarray(self.positions, dtype=np.float64).reshape(-1, 3)
        self.positions.setflags(write=False)
        n = self.positions.shape[0]
        if len(self.names) != n:
            raise NetworkError(f"{len(self.names)} names for {n} nodes")

        seen: set[tuple[int, int]] = set()
        norm_edges: list[tuple[int, int]] = []
        for idx, (a, b) in enumerate(self.edges):
            a, b = int(a), int(b)
            for end in (a, b):
                if not 0 <= end < n:
                    raise NetworkError(f"edge ({a}, {b}) references missing node {end}")
            if a == b:
                raise NetworkError(f"self-loop at node {a}")
            key = (a, b) if a < b else (b, a)
            if key in seen:
                raise NetworkError(f"duplicate edge ({key[0]}, {key[1]})")
            seen.add(key)
            norm_edges.append(key)
        self.edges = tuple(norm_edges)

        if len(self.lengths) != len(self.edges):
            raise NetworkError(f"{len(self.lengths)} lengths for {len(self.edges)} edges")
        self.lengths = tuple(float(v) for v in self.lengths)
        for (a, b), stored in zip(self.edges, self.lengths):
            geo = euclidean_distance(self.positions[a], self.positions[b])
            if stored <= 0.0:
                raise NetworkError(f"edge ({a}, {b}) has nonpositive length {stored}")
            if not math.isclose(stored, geo, rel_tol=LENGTH_RTOL):
                raise NetworkError(
                    f"edge ({a}, {b}) stored length {stored} disagrees with geometry {geo}"
                )

        aero = sorted({int(i) for i in self.aerodromes})
        for i in aero:
            if not 0 <= i < n:
                raise NetworkError(f"aerodrome references missing node {i}")
        self.aerodromes = tuple(aero)

        adj: dict[int, list[tuple[int, float]]] = {i: [] for i in range(n)}
        for (a, b), length in zip(self.edges, self.lengths):
            adj[a].append((b, length))
            adj[b].append((a, length))
        self.adjacency = {i: tuple(sorted(nbrs)) for i, nbrs in adj.items()}

        self._check_aerodromes_connected()

    def _check_aerodromes_connected(self) -> None:
        if len(self.aerodromes) < 2:
            return
        start = self.aerodromes[0]
        reached = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v, _ in self.adjacency[u]:
                if v not in reached:
                    reached.add(v)
                    stack.append(v)
        for a in self.aerodromes:
            if a not in reached:
                raise NetworkError(f"disconnected aerodrome {a}")

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    def edge_length(self, a: int, b: int) -> float:
        for v, length in self.adjacency[a]:
            if v == b:
                return length
        raise KeyError(f"no edge ({a}, {b})")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RoutingNetwork):
            return NotImplemented
        return (
            self.names == other.names
            and np.array_equal(self.positions, other.positions)
            and self.edges == other.edges
            and self.lengths == other.lengths
            and self.aerodromes == other.aerodromes
        )


def load_network(path: str | Path) -> RoutingNetwork:
    """Load a network from the JSON file format.

    The file carries top-level `nodes` (objects with id, name, x, y, z,
    aerodrome) and `edges` (objects with a, b); edge lengths are derived
    from the node geometry.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise NetworkError(f"cannot parse network file {path}: {exc}") from exc
    if not isinstance(data, dict) or "nodes" not in data or "edges" not in data:
        raise NetworkError(f"network file {path} must have 'nodes' and 'edges' keys")

    nodes = data["nodes"]
    ids = sorted(int(nd["id"]) for nd in nodes)
    if ids != list(range(len(nodes))):
        raise NetworkError(f"node ids must be dense 0..{len(nodes) - 1}, got {ids}")

    names = [""] * len(nodes)
    positions = np.zeros((len(nodes), 3))
    aerodromes = []
    for nd in nodes:
        i = int(nd["id"])
        names[i] = str(nd.get("name", i))
        positions[i] = (float(nd["x"]), float(nd["y"]), float(nd["z"]))
        if nd.get("aerodrome", False):
            aerodromes.append(i)

    edges = []
    lengths = []
    for ed in data["edges"]:
        a, b = int(ed["a"]), int(ed["b"])
        for end in (a, b):
            if not 0 <= end < len(nodes):
                raise NetworkError(f"edge ({a}, {b}) references missing node {end}")
        edges.append((a, b))
        lengths.append(euclidean_distance(positions[a], positions[b]))

    return RoutingNetwork(tuple(names), positions, tuple(edges), tuple(lengths), tuple(aerodromes))


def save_network(network: RoutingNetwork, path: str | Path) -> Path:
    """Write a network in the JSON file format (round-trips through load_network)."""
    nodes = [
        {
            "id": i,
            "name": network.names[i],
            "x": float(network.positions[i, 0]),
            "y": float(network.positions[i, 1]),
            "z": float(network.positions[i, 2]),
            "aerodrome": i in set(network.aerodromes),
        }
        for i in range(network.n)
    ]
    edges = [{"a": a, "b": b} for a, b in network.edges]
    text = json.dumps({"nodes": nodes, "edges": edges}, indent=2) + "\n"
    return atomic_write_text(path, text)


def generate_synthetic_network(
    rows: int,
    cols: int,
    spacing: float,
    altitude: float = 100.0,
    jitter: float = 0.0,
    seed: int = 0,
) -> RoutingNetwork:
    """Deterministic rows x cols grid with 4-neighbor corridors.

    Positions sit at a single altitude; x/y are jittered uniformly in
    [-jitter, jitter] by the seeded generator. Perimeter nodes (corners and
    edges of the grid) are marked as aerodromes.
    """
    if rows < 2 or cols < 2:
        raise NetworkError(f"grid needs rows, cols >= 2, got {rows}x{cols}")
    if spacing <= 0:
        raise NetworkError(f"spacing must be positive, got {spacing}")
    if not 0 <= jitter < spacing / 2:
        raise NetworkError(f"jitter must satisfy 0 <= jitter < spacing/2, got {jitter}")

    rng = seeding.derive_rng(seed, seeding.NETWORK_JITTER)
    offsets = rng.uniform(-jitter, jitter, size=(rows * cols, 2)) if jitter > 0 else np.zeros((rows * cols, 2))

    names = []
    positions = np.zeros((rows * cols, 3))
    aerodromes = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            names.append(f"r{r}c{c}")
            positions[i] = (c * spacing + offsets[i, 0], r * spacing + offsets[i, 1], altitude)
            if r in (0, rows - 1) or c in (0, cols - 1):
                aerodromes.append(i)

    edges = []
    lengths = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                edges.append((i, i + 1))
                lengths.append(euclidean_distance(positions[i], positions[i + 1]))
            if r + 1 < rows:
                edges.append((i, i + cols))
                lengths.append(euclidean_distance(positions[i], positions[i + cols]))

    return RoutingNetwork(tuple(names), positions, tuple(edges), tuple(lengths), tuple(aerodromes))
