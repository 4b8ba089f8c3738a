"""Graph data model: metric and general instances, tours, walks, metric closure."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from .errors import (
    AsymmetricWeightsError,
    DefectError,
    DisconnectedGraphError,
    InputError,
    NonPositiveWeightError,
    NonSquareMatrixError,
)

# Relative tolerances, scaled by the largest weight of the instance at hand.
TAU_METRIC = 1e-9
TAU_FP = 1e-9

MIN_VERTICES = 3


def fp_tol(scale: float, rel: float = TAU_FP) -> float:
    """Absolute floating-point slack for quantities of magnitude ``scale``."""
    return rel * max(1.0, abs(float(scale)))


class Violation(NamedTuple):
    """A triangle ``source -> via -> target`` shorter than the direct edge by ``deficit``."""

    source: int
    via: int
    target: int
    deficit: float


def _as_matrix(weights) -> np.ndarray:
    try:
        w = np.array(weights, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"weights are not a numeric matrix: {exc}") from None
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise NonSquareMatrixError(f"weight matrix must be square, got shape {w.shape}")
    return w


def _check_structure(w: np.ndarray, tau: float) -> np.ndarray:
    """Validate square/symmetric/positive and return an exactly symmetric copy."""
    n = w.shape[0]
    if n < MIN_VERTICES:
        raise InputError(f"need at least {MIN_VERTICES} vertices, got {n}")
    off = ~np.eye(n, dtype=bool)
    bad = off & ~(np.isfinite(w) & (w > 0))
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        raise NonPositiveWeightError(i, j, float(w[i, j]))
    tol = tau * max(1.0, float(w[off].max()))
    asym = np.abs(w - w.T) > tol
    if asym.any():
        i, j = map(int, np.argwhere(asym)[0])
        raise AsymmetricWeightsError(i, j, float(w[i, j]), float(w[j, i]))
    upper = np.triu(w, 1)
    sym = upper + upper.T
    return sym


def validate_metric(weights, tau_metric: float = TAU_METRIC) -> list[Violation]:
    """Return every triangle-inequality violation, sorted lexicographically.

    Each unordered pair is reported once, with ``source < target``. A triple
    counts as a violation when the direct weight exceeds the two-hop detour
    by more than ``tau_metric`` times the largest weight.
    """
    w = _check_structure(_as_matrix(weights), tau_metric)
    n = w.shape[0]
    tol = tau_metric * max(1.0, float(w.max()))
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    found: list[Violation] = []
    for k in range(n):
        deficit = w - (w[:, k][:, None] + w[k, :][None, :])
        hits = np.argwhere((deficit > tol) & upper)
        for i, j in hits:
            found.append(Violation(int(i), k, int(j), float(deficit[i, j])))
    found.sort()
    return found


@dataclass(frozen=True, eq=False)
class MetricInstance:
    """Complete undirected graph given by a symmetric matrix of positive weights.

    Construction checks shape, symmetry and positivity. The triangle
    inequality is checked separately by :func:`validate_metric` because
    rounded inputs may legitimately waive it.
    """

    weights: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        w = _check_structure(_as_matrix(self.weights), TAU_METRIC)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != w.shape[0]:
                raise InputError(f"{len(labels)} labels for {w.shape[0]} vertices")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def __eq__(self, other):
        if not isinstance(other, MetricInstance):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.weights.tobytes(), self.labels))

    def weight(self, u: int, v: int) -> float:
        return float(self.weights[u, v])

    def max_weight(self) -> float:
        return float(self.weights.max())


@dataclass(frozen=True, eq=False)
class GeneralInstance:
    """Connected undirected graph with positive edge weights.

    Edges are normalised to ``(u, v, w)`` with ``u < v`` and sorted.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]
    _adj: tuple[dict[int, float], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = int(self.n)
        if n < MIN_VERTICES:
            raise InputError(f"need at least {MIN_VERTICES} vertices, got {n}")
        adj: list[dict[int, float]] = [{} for _ in range(n)]
        norm = []
        for e in self.edges:
            try:
                u, v, w = e
                u, v, w = int(u), int(v), float(w)
            except (TypeError, ValueError):
                raise InputError(f"edge {e!r} is not a (u, v, weight) triple") from None
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (math.isfinite(w) and w > 0):
                raise NonPositiveWeightError(u, v, w)
            if u > v:
                u, v = v, u
            if v in adj[u]:
                raise InputError(f"duplicate edge ({u}, {v})")
            adj[u][v] = w
            adj[v][u] = w
            norm.append((u, v, w))
        norm.sort()
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(norm))
        object.__setattr__(self, "_adj", tuple(adj))
        seen = _reachable(adj, 0)
        if len(seen) < n:
            missing = min(set(range(n)) - seen)
            raise DisconnectedGraphError(0, missing)

    @classmethod
    def from_metric(cls, m: MetricInstance) -> "GeneralInstance":
        n = m.n
        return cls(n, tuple((i, j, m.weight(i, j)) for i in range(n) for j in range(i + 1, n)))

    def __eq__(self, other):
        if not isinstance(other, GeneralInstance):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def neighbors(self, u: int) -> dict[int, float]:
        return self._adj[u]

    def weight(self, u: int, v: int) -> float:
        try:
            return self._adj[u][v]
        except (KeyError, IndexError):
            raise InputError(f"({u}, {v}) is not an edge of the graph") from None


def _reachable(adj: Sequence[dict], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


Instance = Union[MetricInstance, GeneralInstance]


@dataclass(frozen=True)
class Tour:
    """Hamiltonian cycle given as a vertex permutation; the closing edge is implicit."""

    order: tuple[int, ...]
    weight: float

    @classmethod
    def from_order(cls, order: Iterable[int], m: MetricInstance) -> "Tour":
        order = tuple(int(v) for v in order)
        if sorted(order) != list(range(m.n)):
            raise InputError(f"tour {order} is not a permutation of 0..{m.n - 1}")
        return cls(order, tour_weight(order, m))

    def __len__(self):
        return len(self.order)


@dataclass(frozen=True)
class Walk:
    """Closed vertex sequence (first == last); repeats allowed, weight counts multiplicity."""

    sequence: tuple[int, ...]
    weight: float

    @classmethod
    def from_sequence(cls, sequence: Iterable[int], g: Instance) -> "Walk":
        seq = tuple(int(v) for v in sequence)
        if len(seq) < 2 or seq[0] != seq[-1]:
            raise InputError("a closed walk must start and end at the same vertex")
        return cls(seq, walk_weight(seq, g))

    def covers(self, n: int) -> bool:
        return set(self.sequence) == set(range(n))


def tour_weight(tour: Tour | Sequence[int], m: MetricInstance) -> float:
    """Cycle weight summed left to right over the order, closing edge last."""
    order = tour.order if isinstance(tour, Tour) else tuple(tour)
    w = m.weights
    total = 0.0
    for a, b in zip(order, order[1:] + order[:1]):
        total += float(w[a, b])
    return total


def walk_weight(walk: Walk | Sequence[int], g: Instance) -> float:
    """Closed-walk weight summed left to right; every traversal counts."""
    seq = walk.sequence if isinstance(walk, Walk) else tuple(walk)
    total = 0.0
    if isinstance(g, MetricInstance):
        for a, b in zip(seq, seq[1:]):
            if a == b:
                raise InputError(f"walk repeats vertex {a} without moving")
            total += float(g.weights[a, b])
    else:
        for a, b in zip(seq, seq[1:]):
            total += g.weight(a, b)
    return total


@dataclass(frozen=True, eq=False)
class MetricClosure:
    """Shortest-path distances of a general graph plus witness paths.

    ``pred[s, v]`` is the predecessor of ``v`` on the chosen shortest path
    from ``s``; only rows ``s < v`` are consulted so that the path used for
    a pair is the same in both directions.
    """

    metric: MetricInstance
    source: GeneralInstance
    pred: np.ndarray

    def path(self, i: int, j: int) -> list[int]:
        if i == j:
            return [i]
        s, t = (i, j) if i < j else (j, i)
        row = self.pred[s]
        rev = [t]
        while rev[-1] != s:
            rev.append(int(row[rev[-1]]))
        if i < j:
            rev.reverse()
        return rev


def _dijkstra(g: GeneralInstance, s: int) -> tuple[list[float], list[int]]:
    n = g.n
    dist = [math.inf] * n
    pred = [-1] * n
    done = [False] * n
    dist[s] = 0.0
    heap = [(0.0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in g.neighbors(u).items():
            if done[v]:
                continue
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
            elif nd == dist[v] and u < pred[v]:
                pred[v] = u
    return dist, pred


def metric_closure(g: GeneralInstance) -> MetricClosure:
    """All-pairs shortest paths by one Dijkstra run per source vertex.

    Ties between equally short paths go to the smallest predecessor.
    """
    n = g.n
    dist = np.zeros((n, n))
    pred = np.full((n, n), -1, dtype=np.int64)
    for s in range(n):
        d, p = _dijkstra(g, s)
        unreachable = [v for v in range(n) if math.isinf(d[v])]
        if unreachable:
            raise DisconnectedGraphError(s, unreachable[0])
        dist[s] = d
        pred[s] = p
    upper = np.triu(dist, 1)
    pred.setflags(write=False)
    return MetricClosure(MetricInstance(upper + upper.T), g, pred)


def expand_walk(tour: Tour, closure: MetricClosure) -> Walk:
    """Replace each tour edge by its witness shortest path in the source graph."""
    order = tour.order
    seq = [order[0]]
    for a, b in zip(order, order[1:] + order[:1]):
        seq.extend(closure.path(a, b)[1:])
    walk = Walk(tuple(seq), walk_weight(seq, closure.source))
    if abs(walk.weight - tour.weight) > fp_tol(tour.weight):
        raise DefectError(f"expanded walk weighs {walk.weight!r}, tour weighs {tour.weight!r}")
    return walk


# -- canonical JSON form ----------------------------------------------------


def instance_to_json(inst: Instance) -> dict:
    if isinstance(inst, MetricInstance):
        doc = {"n": inst.n, "weights": inst.weights.tolist()}
        if inst.labels is not None:
            doc["labels"] = list(inst.labels)
        return doc
    return {"n": inst.n, "edges": [[u, v, w] for u, v, w in inst.edges]}


def instance_from_json(doc: dict) -> Instance:
    if not isinstance(doc, dict) or "n" not in doc:
        raise InputError('instance JSON must be an object with an "n" field')
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise InputError('"n" must be an integer')
    if "weights" in doc:
        m = MetricInstance(doc["weights"], doc.get("labels"))
        if m.n != n:
            raise InputError(f'"n" is {n} but the weight matrix is {m.n}x{m.n}')
        return m
    if "edges" in doc:
        return GeneralInstance(n, tuple(tuple(e) if isinstance(e, list) else e for e in doc["edges"]))
    raise InputError('instance JSON needs either "weights" or "edges"')
