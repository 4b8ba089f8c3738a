"""Tree-plus-matching multigraph and its Eulerian circuit."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import InfeasibleError, InputError
from .instance import MetricInstance
from .matching import Matching
from .mst import SpanningTree


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph as ``{(u, v): multiplicity}`` with ``u < v``."""

    n: int
    edge_multiset: Mapping[tuple[int, int], int]
    weight: float

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for (u, v), c in self.edge_multiset.items():
            deg[u] += c
            deg[v] += c
        return deg

    def edge_count(self) -> int:
        return sum(self.edge_multiset.values())


def union_multigraph(t: SpanningTree, w: Matching, m: MetricInstance) -> Multigraph:
    """Tree edges plus matching edges; shared pairs get multiplicity 2."""
    counts: dict[tuple[int, int], int] = {}
    for u, v in list(t.edges) + list(w.pairs):
        key = (u, v) if u < v else (v, u)
        counts[key] = counts.get(key, 0) + 1
    return Multigraph(m.n, dict(sorted(counts.items())), t.weight + w.weight)


def eulerian_circuit(g: Multigraph, start: Optional[int] = None) -> list[int]:
    """Hierholzer's algorithm; neighbours are tried in ascending order.

    Returns the closed vertex sequence, of length ``edge_count() + 1``.
    """
    deg = g.degrees()
    odd = [v for v in range(g.n) if deg[v] % 2]
    if odd:
        raise InfeasibleError(f"vertex {odd[0]} has odd degree {deg[odd[0]]}")
    touched = [v for v in range(g.n) if deg[v]]
    if not touched:
        raise InfeasibleError("multigraph has no edges")
    if start is None:
        start = touched[0]
    elif not (0 <= start < g.n) or deg[start] == 0:
        raise InputError(f"start vertex {start} has no incident edges")

    nbrs: list[list[int]] = [[] for _ in range(g.n)]
    left: dict[tuple[int, int], int] = dict(g.edge_multiset)
    for u, v in left:
        nbrs[u].append(v)
        nbrs[v].append(u)
    for lst in nbrs:
        lst.sort()
    ptr = [0] * g.n

    stack = [start]
    circuit: list[int] = []
    while stack:
        v = stack[-1]
        lst = nbrs[v]
        while ptr[v] < len(lst):
            u = lst[ptr[v]]
            if left[(v, u) if v < u else (u, v)]:
                break
            ptr[v] += 1
        if ptr[v] == len(lst):
            circuit.append(stack.pop())
        else:
            u = lst[ptr[v]]
            left[(v, u) if v < u else (u, v)] -= 1
            stack.append(u)
    circuit.reverse()
    if len(circuit) != g.edge_count() + 1:
        raise InfeasibleError("multigraph is not connected on its touched vertices")
    return circuit


def circuit_weight(circuit: list[int], m: MetricInstance) -> float:
    total = 0.0
    for a, b in zip(circuit, circuit[1:]):
        total += float(m.weights[a, b])
    return total
