"""Seeded instance generators."""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .instance import MIN_VERTICES, GeneralInstance, Instance, MetricInstance, metric_closure

FAMILIES = ("euclidean-unit-square", "random-metric-closure", "random-connected")


def euclidean_unit_square(n: int, seed: int) -> MetricInstance:
    """Uniform points in the unit square, unrounded Euclidean distances."""
    pts = np.random.default_rng(seed).random((n, 2))
    dx = pts[:, None, 0] - pts[None, :, 0]
    dy = pts[:, None, 1] - pts[None, :, 1]
    return MetricInstance(np.hypot(dx, dy))


def random_connected_graph(n: int, seed: int, extra_edge_prob: float | None = None) -> GeneralInstance:
    """Random spanning tree plus random extra edges, weights in (0, 1].

    The tree attaches each vertex of a random permutation to an earlier
    one; every other pair is added independently with probability
    ``extra_edge_prob`` (default ``2/n``, a sparse graph).
    """
    rng = np.random.default_rng(seed)
    p = 2.0 / n if extra_edge_prob is None else extra_edge_prob
    perm = rng.permutation(n)
    pairs = set()
    for i in range(1, n):
        parent = perm[rng.integers(0, i)]
        u, v = int(perm[i]), int(parent)
        pairs.add((min(u, v), max(u, v)))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in pairs and rng.random() < p:
                pairs.add((u, v))
    ordered = sorted(pairs)
    weights = 1.0 - rng.random(len(ordered))
    return GeneralInstance(n, tuple((u, v, float(w)) for (u, v), w in zip(ordered, weights)))


def random_metric_closure(n: int, seed: int) -> MetricInstance:
    return metric_closure(random_connected_graph(n, seed)).metric


def generate(family: str, n: int, seed: int) -> Instance:
    """Deterministic instance for ``(family, n, seed)``."""
    if n < MIN_VERTICES:
        raise InputError(f"need at least {MIN_VERTICES} vertices, got {n}")
    if family == "euclidean-unit-square":
        return euclidean_unit_square(n, seed)
    if family == "random-metric-closure":
        return random_metric_closure(n, seed)
    if family == "random-connected":
        return random_connected_graph(n, seed)
    raise InputError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def trial_seed(seed: int, n: int, trial: int) -> int:
    """64-bit per-trial seed derived from the experiment seed."""
    return int(np.random.SeedSequence([seed, n, trial]).generate_state(1, dtype=np.uint64)[0])
