"""Time-sampled flight trajectories under constant-speed motion along a route.

A trajectory samples the polyline position at fixed intervals from take-off
to landing; the last sample always lands exactly on the end time (the final
gap may be shorter than the interval). Arc length is parameterized by the
network's stored edge lengths, which are validated against geometry.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .network import RoutingNetwork

if TYPE_CHECKING:
    from .candidates import CandidateRoute

_TIME_EPS = 1e-9


@dataclass(eq=False)
class Trajectory:
    """Sampled positions of one flight; immutable after construction.

    `times[:n_lattice]` sit on the shared lattice t = k * sample_interval;
    a trailing off-lattice sample is present only when the flight duration
    is not a whole number of intervals.
    """

    request_id: int
    start_time: float
    end_time: float
    sample_interval: float
    times: np.ndarray  # (m,)
    positions: np.ndarray  # (m, 3)
    n_lattice: int

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=np.float64)
        self.positions = np.asarray(self.positions, dtype=np.float64).reshape(-1, 3)
        self.times.setflags(write=False)
        self.positions.setflags(write=False)

    @property
    def duration(self) -> float:
        return self.end_time - self.start_time


def sample_trajectory(
    route: "CandidateRoute",
    network: RoutingNetwork,
    start_time: float,
    speed: float,
    sample_interval: float,
) -> Trajectory:
    """Fly the route at constant speed, sampling every sample_interval seconds.

    The position at time t is the linear interpolation along the route
    polyline at arc length speed * (t - start_time).
    """
    if speed <= 0:
        raise ValueError(f"speed must be positive, got {speed}")
    if sample_interval <= 0:
        raise ValueError(f"sample_interval must be positive, got {sample_interval}")

    nodes = list(route.node_sequence)
    points = network.positions[nodes]
    seg = [network.edge_length(a, b) for a, b in zip(nodes, nodes[1:])]
    cum = np.concatenate(([0.0], np.cumsum(seg))) if seg else np.zeros(1)

    duration = route.length / speed
    end_time = start_time + duration

    n_full = int(math.floor(duration / sample_interval + _TIME_EPS))
    offsets = np.arange(n_full + 1, dtype=np.float64) * sample_interval
    if duration - offsets[-1] > _TIME_EPS:
        offsets = np.append(offsets, duration)
        n_lattice = n_full + 1
    else:
        offsets[-1] = duration  # snap: duration is a whole number of intervals
        n_lattice = n_full + 1

    arcs = np.clip(offsets * speed, 0.0, cum[-1])
    positions = np.stack([np.interp(arcs, cum, points[:, d]) for d in range(3)], axis=1)
    return Trajectory(
        request_id=route.request_id,
        start_time=float(start_time),
        end_time=float(end_time),
        sample_interval=float(sample_interval),
        times=start_time + offsets,
        positions=positions,
        n_lattice=n_lattice,
    )


def position_at(trajectory: Trajectory, t: float) -> np.ndarray | None:
    """Position at time t, or None when the vehicle is not airborne.

    Sample times return the stored sample; interior times resolve by linear
    interpolation between the adjacent samples.
    """
    if t < trajectory.start_time - _TIME_EPS or t > trajectory.end_time + _TIME_EPS:
        return None
    times = trajectory.times
    t = float(min(max(t, times[0]), times[-1]))
    idx = int(np.searchsorted(times, t))
    if idx < len(times) and abs(times[idx] - t) <= _TIME_EPS:
        return trajectory.positions[idx].copy()
    if idx > 0 and abs(times[idx - 1] - t) <= _TIME_EPS:
        return trajectory.positions[idx - 1].copy()
    lo, hi = idx - 1, idx
    frac = (t - times[lo]) / (times[hi] - times[lo])
    return (1.0 - frac) * trajectory.positions[lo] + frac * trajectory.positions[hi]
