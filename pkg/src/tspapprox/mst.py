"""Minimum spanning tree and its odd-degree vertices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DefectError
from .instance import MetricInstance


@dataclass(frozen=True)
class SpanningTree:
    edges: tuple[tuple[int, int], ...]
    weight: float

    def degrees(self, n: int) -> list[int]:
        deg = [0] * n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


@dataclass(frozen=True)
class OddSet:
    vertices: tuple[int, ...]

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


def minimum_spanning_tree(m: MetricInstance) -> SpanningTree:
    """Prim's algorithm on the dense matrix, O(n^2), rooted at vertex 0.

    Ties between equal keys go to the smallest vertex index, and a key is
    only replaced by a strictly smaller one, so the output is reproducible.
    Edges are returned as ``(min, max)`` pairs in insertion order; the
    weight is summed in that order.
    """
    w = m.weights
    n = m.n
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    key = w[0].copy()
    parent = np.zeros(n, dtype=np.int64)
    key[0] = np.inf
    edges = []
    total = 0.0
    for _ in range(n - 1):
        v = int(np.argmin(key))
        u = int(parent[v])
        edges.append((min(u, v), max(u, v)))
        total += float(w[u, v])
        in_tree[v] = True
        key[v] = np.inf
        better = (~in_tree) & (w[v] < key)
        key[better] = w[v][better]
        parent[better] = v
    return SpanningTree(tuple(edges), total)


def odd_degree_vertices(t: SpanningTree, n: int) -> OddSet:
    """Vertices of odd degree in ``t``, ascending. Always an even number of them."""
    deg = t.degrees(n)
    odd = tuple(v for v in range(n) if deg[v] % 2)
    if len(odd) % 2:
        raise DefectError(f"odd-degree vertex count {len(odd)} is odd")
    return OddSet(odd)
