"""Maximum weighted independent set problems and their QUBO / Ising forms.

The integer program is: maximize sum w_i x_i subject to x_i + x_j <= 1 on
every edge. Folding the constraints into the objective with penalty
coefficient lam gives the QUBO

    minimize  -sum_i w_i x_i + lam * sum_{ij in E} x_i x_j

whose minimum over binary assignments is attained on an independent set of
maximum weight whenever lam exceeds every vertex weight. Substituting
x_i = (1 + s_i) / 2 maps the QUBO exactly onto an Ising energy
-sum J_ij s_i s_j - sum h_i s_i plus a constant offset.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .fileio import atomic_write_text

# Penalty that dominates any route weight (route weights are <= 1).
DEFAULT_PENALTY = 2.0

# Hard cap for exhaustive enumeration.
BRUTE_FORCE_MAX_N = 25
_CHUNK_BITS = 18


@dataclass(frozen=True)
class MwisProblem:
    """Vertex weights plus an undirected conflict edge set (pairs i < j)."""

    weights: tuple[float, ...]
    edges: frozenset[tuple[int, int]]

    def __init__(self, weights: Sequence[float], edges: Iterable[Sequence[int]] = ()):
        w = tuple(float(v) for v in weights)
        for i, v in enumerate(w):
            if not v > 0.0:
                raise ValueError(f"vertex {i} has nonpositive weight {v}")
        norm = set()
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if not (0 <= a < len(w) and 0 <= b < len(w)):
                raise ValueError(f"edge ({a}, {b}) out of range for n={len(w)}")
            norm.add((a, b) if a < b else (b, a))
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "edges", frozenset(norm))

    @property
    def n(self) -> int:
        return len(self.weights)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def neighbor_sets(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg


def _check_length(problem: MwisProblem, bits: Sequence[int]) -> None:
    if len(bits) != problem.n:
        raise ValueError(f"assignment length {len(bits)} != problem size {problem.n}")


def is_independent(problem: MwisProblem, bits: Sequence[int]) -> bool:
    """True iff no edge has both endpoints selected."""
    _check_length(problem, bits)
    return all(not (bits[a] and bits[b]) for a, b in problem.edges)


def objective(problem: MwisProblem, bits: Sequence[int]) -> float:
    """Total weight of the selected vertices."""
    _check_length(problem, bits)
    if problem.n == 0:
        return 0.0
    return float(np.dot(np.asarray(problem.weights), np.asarray(bits, dtype=np.float64)))


@dataclass(frozen=True)
class Qubo:
    """Quadratic form over binary variables: sum linear_i x_i + sum quad_ij x_i x_j."""

    linear: tuple[float, ...]
    quadratic: dict[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        norm: dict[tuple[int, int], float] = {}
        for (a, b), coef in self.quadratic.items():
            a, b = int(a), int(b)
            if a == b:
                raise ValueError(f"diagonal term ({a}, {b}); fold it into linear")
            key = (a, b) if a < b else (b, a)
            if coef != 0.0:
                norm[key] = norm.get(key, 0.0) + float(coef)
        object.__setattr__(self, "linear", tuple(float(v) for v in self.linear))
        object.__setattr__(self, "quadratic", norm)

    @property
    def n(self) -> int:
        return len(self.linear)

    def energy(self, bits: Sequence[int]) -> float:
        if len(bits) != self.n:
            raise ValueError(f"assignment length {len(bits)} != qubo size {self.n}")
        e = sum(c * bits[i] for i, c in enumerate(self.linear) if bits[i])
        for (a, b), coef in self.quadratic.items():
            if bits[a] and bits[b]:
                e += coef
        return float(e)

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        """Symmetric coupling matrix (zero diagonal) and linear vector."""
        w = np.zeros((self.n, self.n))
        for (a, b), coef in self.quadratic.items():
            w[a, b] = coef
            w[b, a] = coef
        return w, np.asarray(self.linear, dtype=np.float64)


@dataclass(frozen=True)
class IsingModel:
    """Spin model with energy -sum J_ij s_i s_j - sum h_i s_i (s_i = +-1)."""

    couplings: dict[tuple[int, int], float]
    biases: tuple[float, ...]
    offset: float

    @property
    def n(self) -> int:
        return len(self.biases)

    def energy(self, spins: Sequence[int]) -> float:
        if len(spins) != self.n:
            raise ValueError(f"spin vector length {len(spins)} != model size {self.n}")
        e = -sum(h * spins[i] for i, h in enumerate(self.biases))
        for (a, b), j in self.couplings.items():
            e -= j * spins[a] * spins[b]
        return float(e)


def to_qubo(problem: MwisProblem, penalty: float = DEFAULT_PENALTY) -> Qubo:
    """Penalty reformulation: linear_i = -w_i, quadratic_ij = +penalty per edge.

    Requires penalty strictly above the largest vertex weight, which makes
    every QUBO minimizer an independent set.
    """
    if problem.n and not penalty > max(problem.weights):
        raise ValueError(
            f"penalty {penalty} must exceed the maximum vertex weight {max(problem.weights)}"
        )
    linear = tuple(-w for w in problem.weights)
    quadratic = {edge: float(penalty) for edge in problem.edges}
    return Qubo(linear, quadratic)


def qubo_to_ising(q: Qubo) -> IsingModel:
    """Exact change of variables x_i = (1 + s_i) / 2.

    For every assignment, QUBO energy == Ising energy + offset.
    """
    biases = [-0.5 * c for c in q.linear]
    couplings: dict[tuple[int, int], float] = {}
    offset = 0.5 * sum(q.linear)
    for (a, b), coef in q.quadratic.items():
        couplings[(a, b)] = -0.25 * coef
        biases[a] -= 0.25 * coef
        biases[b] -= 0.25 * coef
        offset += 0.25 * coef
    couplings = {k: v for k, v in couplings.items() if v != 0.0}
    return IsingModel(couplings, tuple(biases), float(offset))


def _bit_columns(values: np.ndarray, n: int) -> np.ndarray:
    """Rows of assignment bits; row order equals lexicographic bit-string order."""
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((values[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def brute_force_mwis(problem: MwisProblem) -> tuple[list[int], float]:
    """Exhaustive oracle over all 2^n assignments (n <= 25).

    Returns a maximum-weight independent set; ties break toward the
    lexicographically smallest bit string.
    """
    n = problem.n
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force capped at n={BRUTE_FORCE_MAX_N}, got {n}")
    if n == 0:
        return [], 0.0

    w = np.asarray(problem.weights)
    edges = problem.sorted_edges()
    ei = np.array([a for a, _ in edges], dtype=np.int64)
    ej = np.array([b for _, b in edges], dtype=np.int64)

    best_obj = -np.inf
    best_bits: np.ndarray | None = None
    step = 1 << min(n, _CHUNK_BITS)
    for base in range(0, 1 << n, step):
        values = np.arange(base, min(base + step, 1 << n), dtype=np.int64)
        bits = _bit_columns(values, n)
        obj = bits @ w
        if len(edges):
            obj[(bits[:, ei] & bits[:, ej]).any(axis=1)] = -np.inf
        k = int(np.argmax(obj))
        if obj[k] > best_obj:
            best_obj = float(obj[k])
            best_bits = bits[k]
    assert best_bits is not None
    return [int(b) for b in best_bits], best_obj


def save_instance(problem: MwisProblem, path: str | Path) -> Path:
    """Write an instance in the JSON corpus format {n, weights, edges}."""
    payload = {
        "n": problem.n,
        "weights": list(problem.weights),
        "edges": [list(e) for e in problem.sorted_edges()],
    }
    return atomic_write_text(path, json.dumps(payload, indent=2) + "\n")


def load_instance(path: str | Path) -> MwisProblem:
    """Read an instance from the JSON corpus format."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot parse MWIS instance {path}: {exc}") from exc
    weights = data["weights"]
    if "n" in data and int(data["n"]) != len(weights):
        raise ValueError(f"instance {path}: n={data['n']} but {len(weights)} weights")
    return MwisProblem(weights, data.get("edges", ()))
