"""Exact reference solvers for small instances.

Held-Karp dynamic programming (n <= 16), permutation enumeration (n <= 9)
and a state-space search for the shortest covering closed walk. They exist
to check the approximation, never to replace it.
"""

from __future__ import annotations

import heapq
import itertools
import math

import numpy as np

from .errors import CapacityError
from .instance import GeneralInstance, MetricInstance, Tour, fp_tol, metric_closure, tour_weight

DP_MAX_VERTICES = 16
BRUTE_MAX_VERTICES = 9
WALK_SEARCH_MAX_VERTICES = 12


def _canonical(order: list[int]) -> tuple[int, ...]:
    i = order.index(0)
    order = order[i:] + order[:i]
    if order[1] > order[-1]:
        order = [0] + order[:0:-1]
    return tuple(order)


def exact_tsp(m: MetricInstance) -> Tour:
    """Optimal tour by DP over (visited subset, last vertex), vectorised per layer.

    Vertex 0 is the fixed start; the returned tour starts at 0 and its
    second vertex is the smaller of 0's two neighbours.
    """
    n = m.n
    if n > DP_MAX_VERTICES:
        raise CapacityError(f"exact TSP handles at most {DP_MAX_VERTICES} vertices, got {n}")
    k = n - 1
    w = np.asarray(m.weights)
    inner = w[1:, 1:]
    size = 1 << k
    cost = np.full((size, k), np.inf)
    back = np.full((size, k), -1, dtype=np.int8)
    for j in range(k):
        cost[1 << j, j] = w[0, j + 1]
    masks = np.arange(size, dtype=np.int64)
    popcount = np.zeros(size, dtype=np.int64)
    for j in range(k):
        popcount += (masks >> j) & 1
    for layer in range(2, k + 1):
        layer_masks = masks[popcount == layer]
        for j in range(k):
            sel = layer_masks[((layer_masks >> j) & 1) == 1]
            prev = sel ^ (1 << j)
            cand = cost[prev] + inner[:, j][None, :]
            best = np.argmin(cand, axis=1)
            cost[sel, j] = cand[np.arange(len(sel)), best]
            back[sel, j] = best
    full = size - 1
    closing = cost[full] + w[1:, 0]
    last = int(np.argmin(closing))
    path = []
    mask = full
    while last >= 0:
        path.append(last + 1)
        prev = int(back[mask, last])
        mask ^= 1 << last
        last = prev
    order = _canonical([0] + path[::-1])
    return Tour(order, tour_weight(order, m))


def exact_tsp_brute(m: MetricInstance) -> Tour:
    """Optimal tour by enumerating all (n-1)!/2 undirected cycles through vertex 0."""
    n = m.n
    if n > BRUTE_MAX_VERTICES:
        raise CapacityError(f"brute-force TSP handles at most {BRUTE_MAX_VERTICES} vertices, got {n}")
    w = np.asarray(m.weights)
    perms = np.array(
        [p for p in itertools.permutations(range(1, n)) if p[0] < p[-1]], dtype=np.int64
    )
    zeros = np.zeros((len(perms), 1), dtype=np.int64)
    cycles = np.hstack([zeros, perms, zeros])
    totals = w[cycles[:, :-1], cycles[:, 1:]].sum(axis=1)
    best = int(np.argmin(totals))
    order = tuple(int(v) for v in cycles[best, :-1])
    return Tour(order, tour_weight(order, m))


def problem_b_lower_bound(g: GeneralInstance) -> float:
    """Optimal covering-walk weight, computed as the optimal tour of the metric closure."""
    if g.n > DP_MAX_VERTICES:
        raise CapacityError(f"exact TSP handles at most {DP_MAX_VERTICES} vertices, got {g.n}")
    return exact_tsp(metric_closure(g).metric).weight


def shortest_covering_walk(g: GeneralInstance | MetricInstance, bound: float | None = None) -> float:
    """Weight of the shortest closed walk visiting every vertex, edges reusable.

    Dijkstra over (current vertex, visited set) states of the graph itself;
    with ``bound`` given, states heavier than it are discarded. Returns
    ``inf`` if nothing within the bound closes.
    """
    n = g.n
    if n > WALK_SEARCH_MAX_VERTICES:
        raise CapacityError(f"covering-walk search handles at most {WALK_SEARCH_MAX_VERTICES} vertices, got {n}")
    if isinstance(g, MetricInstance):
        adj = [{v: float(g.weights[u, v]) for v in range(n) if v != u} for u in range(n)]
    else:
        adj = [g.neighbors(u) for u in range(n)]
    limit = math.inf if bound is None else bound + fp_tol(bound)
    full = (1 << n) - 1
    best = {(0, 1): 0.0}
    heap = [(0.0, 0, 1)]
    while heap:
        d, u, mask = heapq.heappop(heap)
        if d > best.get((u, mask), math.inf):
            continue
        if u == 0 and mask == full:
            return d
        for v, wt in adj[u].items():
            nd = d + wt
            if nd > limit:
                continue
            state = (v, mask | (1 << v))
            if nd < best.get(state, math.inf):
                best[state] = nd
                heapq.heappush(heap, (nd, v, state[1]))
    return math.inf
