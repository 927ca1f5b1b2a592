"""Figure rendering for simulation and benchmark reports."""
from __future__ import annotations

import math
from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

# Marker per scheduling strategy, shared across figures.
MARKERS = {"fifo": "^", "fifo-none": "^", "sa": "o", "exact": "s", "greedy": "v"}

_DPI = 150


def _marker(label: str) -> str:
    return MARKERS.get(label, ".")


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_cumulative_approved(series: Mapping[str, tuple[Sequence[float], Sequence[float]]], path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, (times, counts) in series.items():
        ax.plot(times, counts, marker=_marker(label), markersize=4, markevery=max(1, len(times) // 25), label=label)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("cumulative approved flights")
    ax.legend()
    ax.grid(alpha=0.3)
    return _save(fig, path)


def plot_active_aircraft(series: Mapping[str, tuple[Sequence[float], Sequence[float]]], path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, (times, counts) in series.items():
        ax.plot(times, counts, marker=_marker(label), markersize=4, markevery=max(1, len(times) // 25), label=label)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("active aircraft")
    ax.legend()
    ax.grid(alpha=0.3)
    return _save(fig, path)


def plot_vertex_counts(
    times: Sequence[float],
    vertex_counts: Sequence[float],
    bound: Sequence[float],
    path: str | Path,
) -> Path:
    """Per-step conflict-graph sizes next to the eligible-requests-times-k cap."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(times, vertex_counts, marker=".", label="problem vertices")
    ax.plot(times, bound, linestyle="--", label="upper bound")
    ax.set_xlabel("time [s]")
    ax.set_ylabel("vertices")
    ax.legend()
    ax.grid(alpha=0.3)
    return _save(fig, path)


def plot_tts_box(tts_by_solver: Mapping[str, Sequence[float]], path: str | Path) -> Path:
    """Box plot over finite TTS values: quartile boxes, 1.5 IQR whiskers, x outliers."""
    labels = sorted(tts_by_solver)
    data = [[v for v in tts_by_solver[lab] if math.isfinite(v) and v > 0] for lab in labels]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.boxplot(data, tick_labels=labels, whis=1.5, flierprops={"marker": "x"})
    ax.set_yscale("log")
    ax.set_ylabel("time to solution [s]")
    ax.grid(alpha=0.3, axis="y")
    return _save(fig, path)


def plot_network(network, path: str | Path) -> Path:
    """Top-down map of corridors with aerodromes highlighted."""
    fig, ax = plt.subplots(figsize=(6, 6))
    pos = np.asarray(network.positions)
    for a, b in network.edges:
        ax.plot([pos[a, 0], pos[b, 0]], [pos[a, 1], pos[b, 1]], color="0.6", linewidth=1)
    plain = [i for i in range(network.n) if i not in set(network.aerodromes)]
    if plain:
        ax.scatter(pos[plain, 0], pos[plain, 1], s=14, color="0.4", zorder=3)
    if network.aerodromes:
        aero = list(network.aerodromes)
        ax.scatter(pos[aero, 0], pos[aero, 1], s=30, color="tab:red", zorder=4, label="aerodromes")
        ax.legend(loc="upper right")
    ax.set_aspect("equal")
    ax.set_xlabel("east [m]")
    ax.set_ylabel("north [m]")
    return _save(fig, path)
