"""Deterministic RNG derivation: one root seed, split per subsystem by fixed labels."""
from __future__ import annotations

import numpy as np

# Subsystem labels. Each consumer of randomness derives its stream from
# (root_seed, label, ...) so the subsystems stay independently reproducible.
REQUESTS = 1
NETWORK_JITTER = 2
SA_SOLVER = 3
BENCH = 4


def derive_rng(seed: int, *labels: int) -> np.random.Generator:
    """Generator seeded from the root seed plus a fixed label path."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *(int(x) for x in labels)]))


def derive_seed(seed: int, *labels: int) -> int:
    """Integer sub-seed derived from the root seed plus a fixed label path."""
    ss = np.random.SeedSequence([int(seed), *(int(x) for x in labels)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])
