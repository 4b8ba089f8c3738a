"""Shared fixtures and independent test oracles."""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import strategies as st

from tspapprox.generate import euclidean_unit_square, random_connected_graph, random_metric_closure
from tspapprox.instance import GeneralInstance, MetricInstance


def points_instance(points) -> MetricInstance:
    pts = np.asarray(points, dtype=float)
    d = np.hypot(pts[:, None, 0] - pts[None, :, 0], pts[:, None, 1] - pts[None, :, 1])
    return MetricInstance(d)


def kruskal_weight(m: MetricInstance) -> float:
    """Kruskal with union-find: an MST oracle independent of Prim."""
    n = m.n
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = sorted((m.weight(i, j), i, j) for i in range(n) for j in range(i + 1, n))
    total = 0.0
    used = 0
    for w, i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            total += w
            used += 1
    assert used == n - 1
    return total


def simple_path_distances(g: GeneralInstance) -> np.ndarray:
    """All-pairs minimum over every simple path, by exhaustive DFS (tiny n only)."""
    n = g.n
    best = np.full((n, n), math.inf)
    np.fill_diagonal(best, 0.0)

    def dfs(src, u, visited, length):
        for v, w in g.neighbors(u).items():
            if v in visited:
                continue
            total = length + w
            if total < best[src, v]:
                best[src, v] = total
            dfs(src, v, visited | {v}, total)

    for s in range(n):
        dfs(s, s, {s}, 0.0)
    return best


def closed_walks_min(g: GeneralInstance, max_edges: int) -> float:
    """Shortest closed walk from 0 covering all vertices with at most ``max_edges`` steps."""
    best = math.inf
    n = g.n

    def rec(u, seen, length, steps):
        nonlocal best
        if length >= best:
            return
        if u == 0 and len(seen) == n:
            best = length
        if steps == max_edges:
            return
        for v, w in g.neighbors(u).items():
            rec(v, seen | {v}, length + w, steps + 1)

    rec(0, {0}, 0.0, 0)
    return best


def matching_enumeration(w) -> float:
    """Minimum perfect matching by recursive enumeration of all pairings."""
    w = np.asarray(w)

    def rec(rest):
        if not rest:
            return 0.0
        a = rest[0]
        return min(w[a, b] + rec(rest[1:i] + rest[i + 1:]) for i, b in enumerate(rest) if i > 0)

    return rec(tuple(range(len(w))))


def random_symmetric(rng, k, low=0.1, high=1.0) -> np.ndarray:
    w = rng.uniform(low, high, (k, k))
    w = np.triu(w, 1)
    return w + w.T


@pytest.fixture
def triangle_ones() -> MetricInstance:
    return MetricInstance([[0, 1, 1], [1, 0, 1], [1, 1, 0]])


@pytest.fixture
def path3() -> GeneralInstance:
    return GeneralInstance(3, ((0, 1, 1.0), (1, 2, 1.0)))


def metric_instances(min_n=4, max_n=10):
    """Hypothesis strategy over both metric families."""
    return st.builds(
        lambda fam, n, seed: (euclidean_unit_square if fam else random_metric_closure)(n, seed),
        st.booleans(),
        st.integers(min_n, max_n),
        st.integers(0, 2**32 - 1),
    )


def connected_graphs(min_n=3, max_n=9):
    return st.builds(random_connected_graph, st.integers(min_n, max_n), st.integers(0, 2**32 - 1))
