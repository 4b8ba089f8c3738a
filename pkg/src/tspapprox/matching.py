"""Minimum-weight perfect matching on the complete graph of odd-degree vertices.

The solver is a primal-dual blossom algorithm (Edmonds, in the O(k^3)
organisation popularised by Galil) written directly for the
minimisation/perfect case. Vertex duals ``y`` and blossom duals ``z >= 0``
keep every edge's reduced cost

    slack(u, v) = w(u, v) - y[u] - y[v] + sum(z[B] for blossoms B holding u and v)

non-negative. Each stage grows alternating trees from all exposed vertices
over zero-slack edges and ends with one augmentation; a complete graph of
even order always admits a perfect matching, so every stage succeeds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CapacityError, DefectError, InputError
from .instance import MetricInstance, fp_tol
from .mst import OddSet

ORACLE_MAX_VERTICES = 20

Edge = tuple[int, int]

# labels of top-level blossoms; bit 4 marks a blossom visited by _scan_blossom
FREE, EVEN, ODD, BREADCRUMB = 0, 1, 2, 4


@dataclass(frozen=True, eq=False)
class SubInstance:
    """The complete subgraph induced on an even set of vertices."""

    original_ids: tuple[int, ...]
    weights: np.ndarray

    def __post_init__(self):
        k = len(self.original_ids)
        if k < 2 or k % 2:
            raise InputError(f"a perfect matching needs an even vertex count >= 2, got {k}")
        w = np.array(self.weights, dtype=float)
        if w.shape != (k, k):
            raise InputError(f"weights shape {w.shape} does not match {k} vertices")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "original_ids", tuple(int(v) for v in self.original_ids))

    @property
    def k(self) -> int:
        return len(self.original_ids)

    @classmethod
    def from_matrix(cls, weights) -> "SubInstance":
        w = np.asarray(weights, dtype=float)
        return cls(tuple(range(w.shape[0])), w)


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]
    weight: float


def induce_subgraph(m: MetricInstance, odd: OddSet | tuple[int, ...]) -> SubInstance:
    ids = tuple(sorted(int(v) for v in odd))
    if len(ids) % 2:
        raise DefectError(f"odd vertex set has odd cardinality {len(ids)}")
    idx = np.array(ids, dtype=np.int64)
    return SubInstance(ids, m.weights[np.ix_(idx, idx)])


def max_weight_transform(s: SubInstance) -> tuple[np.ndarray, float]:
    """Weights ``2a - w`` with ``a`` the largest edge weight.

    Every perfect matching has ``k/2`` edges, so its transformed total is
    ``k*a - w(M)``: minimising ``w`` and maximising the transform pick the
    same perfect matchings.
    """
    k = s.k
    off = ~np.eye(k, dtype=bool)
    a = float(s.weights[off].max())
    out = 2.0 * a - s.weights
    np.fill_diagonal(out, 0.0)
    return out, a


def _to_matching(s: SubInstance, local_pairs) -> Matching:
    ids = s.original_ids
    pairs = sorted(
        (min(ids[i], ids[j]), max(ids[i], ids[j])) for i, j in local_pairs
    )
    pos = {v: i for i, v in enumerate(ids)}
    total = 0.0
    for a, b in pairs:
        total += float(s.weights[pos[a], pos[b]])
    return Matching(tuple(pairs), total)


def min_weight_perfect_matching(s: SubInstance, check: bool = True) -> Matching:
    """Exact minimum-weight perfect matching; pairs sorted, smaller id first.

    With ``check`` on, the final duals are verified against the matching
    (feasibility, complementary slackness, equal objectives) and a
    :class:`DefectError` is raised on any mismatch.
    """
    solver = _BlossomSolver(s.weights.tolist())
    mate = solver.solve()
    if check:
        solver.verify_certificate()
    return _to_matching(s, [(v, mate[v]) for v in range(s.k) if v < mate[v]])


class _BlossomSolver:
    """Single-use scratch state for one matching computation.

    Ids ``0..k-1`` are vertices, ``k..2k-1`` are blossom slots. For a
    blossom ``b`` with children ``c_0..c_{m-1}`` (``c_0`` holds the base),
    ``blossom_edges[b][i] = (x, y)`` joins ``x`` in ``c_i`` to ``y`` in
    ``c_{i+1 mod m}``. ``label_edge[b] = (outer, inner)`` is the tree edge
    through which ``b`` got its label, ``inner`` lying inside ``b``.
    """

    def __init__(self, w: list[list[float]]):
        k = len(w)
        self.k = k
        self.w = w
        self.mate = [-1] * k
        self.label = [FREE] * (2 * k)
        self.label_edge: list[Optional[Edge]] = [None] * (2 * k)
        self.in_blossom = list(range(k))
        self.parent = [-1] * (2 * k)
        self.children: list[Optional[list[int]]] = [None] * (2 * k)
        self.base = list(range(k)) + [-1] * k
        self.blossom_edges: list[Optional[list[Edge]]] = [None] * (2 * k)
        self.best_edge: list[Optional[Edge]] = [None] * (2 * k)
        self.blossom_best_edges: list[Optional[list[Edge]]] = [None] * (2 * k)
        self.unused = list(range(2 * k - 1, k - 1, -1))
        self.dual = [0.0] * (2 * k)
        for v in range(k):
            self.dual[v] = min(w[v][u] for u in range(k) if u != v) / 2.0
        self.allowed: set[Edge] = set()
        self.queue: list[int] = []

    # -- helpers ----------------------------------------------------------

    def slack(self, e: Edge) -> float:
        u, v = e
        return self.w[u][v] - self.dual[u] - self.dual[v]

    def allow(self, e: Edge):
        u, v = e
        self.allowed.add((u, v) if u < v else (v, u))

    def is_allowed(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.allowed

    def leaves(self, b: int):
        if b < self.k:
            yield b
            return
        stack = [b]
        while stack:
            t = stack.pop()
            if t < self.k:
                yield t
            else:
                stack.extend(reversed(self.children[t]))

    def step_edge(self, b: int, j: int, step: int) -> Edge:
        """Edge from child ``j`` to child ``j + step`` of ``b``, oriented that way."""
        if step == 1:
            return self.blossom_edges[b][j]
        x, y = self.blossom_edges[b][j - 1]
        return (y, x)

    # -- labelling --------------------------------------------------------

    def assign_label(self, v: int, t: int, e: Optional[Edge]):
        b = self.in_blossom[v]
        self.label[v] = self.label[b] = t
        self.label_edge[v] = self.label_edge[b] = e
        self.best_edge[v] = self.best_edge[b] = None
        if t == EVEN:
            self.queue.extend(self.leaves(b))
        else:
            base = self.base[b]
            m = self.mate[base]
            self.assign_label(m, EVEN, (base, m))

    def scan_blossom(self, v: int, w: int) -> int:
        """Walk up both trees from ``v`` and ``w``; return the common base or -1."""
        path = []
        base = -1
        while v != -1:
            b = self.in_blossom[v]
            if self.label[b] & BREADCRUMB:
                base = self.base[b]
                break
            path.append(b)
            self.label[b] = EVEN | BREADCRUMB
            if self.label_edge[b] is None:
                v = -1
            else:
                t = self.label_edge[b][0]
                v = self.label_edge[self.in_blossom[t]][0]
            if w != -1:
                v, w = w, v
        for b in path:
            self.label[b] = EVEN
        return base

    # -- blossom surgery --------------------------------------------------

    def add_blossom(self, base: int, v: int, w: int):
        in_b = self.in_blossom
        bb, bv, bw = in_b[base], in_b[v], in_b[w]
        b = self.unused.pop()
        self.base[b] = base
        self.parent[b] = -1
        self.parent[bb] = b
        path: list[int] = []
        edges: list[Edge] = []
        while bv != bb:
            self.parent[bv] = b
            path.append(bv)
            edges.append(self.label_edge[bv])
            bv = in_b[self.label_edge[bv][0]]
        path.append(bb)
        path.reverse()
        edges.reverse()
        edges.append((v, w))
        while bw != bb:
            self.parent[bw] = b
            path.append(bw)
            outer, inner = self.label_edge[bw]
            edges.append((inner, outer))
            bw = in_b[outer]
        self.children[b] = path
        self.blossom_edges[b] = edges
        self.label[b] = EVEN
        self.label_edge[b] = self.label_edge[bb]
        self.dual[b] = 0.0
        for x in self.leaves(b):
            if self.label[in_b[x]] == ODD:
                self.queue.append(x)
            in_b[x] = b

        # least-slack edges from the new blossom to every other even blossom
        best_to: dict[int, Edge] = {}
        k = self.k
        for c in path:
            if self.blossom_best_edges[c] is None:
                candidates = [(x, y) for x in self.leaves(c) for y in range(k) if y != x]
            else:
                candidates = self.blossom_best_edges[c]
            for x, y in candidates:
                if in_b[y] == b:
                    x, y = y, x
                by = in_b[y]
                if by != b and self.label[by] == EVEN:
                    cur = best_to.get(by)
                    if cur is None or self.slack((x, y)) < self.slack(cur):
                        best_to[by] = (x, y)
            self.blossom_best_edges[c] = None
            self.best_edge[c] = None
        self.blossom_best_edges[b] = [best_to[c] for c in sorted(best_to)]
        best = None
        for e in self.blossom_best_edges[b]:
            if best is None or self.slack(e) < self.slack(best):
                best = e
        self.best_edge[b] = best

    def expand_blossom(self, b: int, end_of_stage: bool):
        k = self.k
        in_b = self.in_blossom
        for c in self.children[b]:
            self.parent[c] = -1
            if c < k:
                in_b[c] = c
            elif end_of_stage and self.dual[c] == 0.0:
                self.expand_blossom(c, end_of_stage)
            else:
                for x in self.leaves(c):
                    in_b[x] = c

        if not end_of_stage and self.label[b] == ODD:
            # Relabel the even-length side from the entry child to the base.
            kids = self.children[b]
            entry = in_b[self.label_edge[b][1]]
            j = kids.index(entry)
            if j & 1:
                j -= len(kids)
                step = 1
            else:
                step = -1
            e = self.label_edge[b]
            while j != 0:
                fwd = self.step_edge(b, j, step)
                self.label[e[1]] = FREE
                self.label[fwd[1]] = FREE
                self.assign_label(e[1], ODD, e)
                self.allow(fwd)
                j += step
                e = self.step_edge(b, j, step)
                self.allow(e)
                j += step
            bv = kids[j]
            self.label[e[1]] = self.label[bv] = ODD
            self.label_edge[e[1]] = self.label_edge[bv] = e
            self.best_edge[bv] = None
            j += step
            # Odd side: children reached from outside keep an odd label.
            while kids[j] != entry:
                bv = kids[j]
                if self.label[bv] == EVEN:
                    j += step
                    continue
                reached = next((x for x in self.leaves(bv) if self.label[x] != FREE), None)
                if reached is not None:
                    self.label[reached] = FREE
                    self.label[self.mate[self.base[bv]]] = FREE
                    self.assign_label(reached, ODD, self.label_edge[reached])
                j += step

        self.label[b] = FREE
        self.label_edge[b] = None
        self.children[b] = None
        self.blossom_edges[b] = None
        self.base[b] = -1
        self.blossom_best_edges[b] = None
        self.best_edge[b] = None
        self.dual[b] = 0.0
        self.unused.append(b)

    def augment_blossom(self, b: int, v: int):
        """Rotate ``b`` so that ``v`` becomes its base, flipping inner matches."""
        t = v
        while self.parent[t] != b:
            t = self.parent[t]
        if t >= self.k:
            self.augment_blossom(t, v)
        kids = self.children[b]
        i = j = kids.index(t)
        if i & 1:
            j -= len(kids)
            step = 1
        else:
            step = -1
        while j != 0:
            j += step
            x, y = self.step_edge(b, j, step)
            if kids[j] >= self.k:
                self.augment_blossom(kids[j], x)
            j += step
            if kids[j] >= self.k:
                self.augment_blossom(kids[j], y)
            self.mate[x] = y
            self.mate[y] = x
        self.children[b] = kids[i:] + kids[:i]
        self.blossom_edges[b] = self.blossom_edges[b][i:] + self.blossom_edges[b][:i]
        self.base[b] = self.base[self.children[b][0]]

    def augment(self, v: int, w: int):
        for s, partner in ((v, w), (w, v)):
            while True:
                bs = self.in_blossom[s]
                if bs >= self.k:
                    self.augment_blossom(bs, s)
                self.mate[s] = partner
                if self.label_edge[bs] is None:
                    break
                t = self.label_edge[bs][0]
                bt = self.in_blossom[t]
                s, j = self.label_edge[bt]
                if bt >= self.k:
                    self.augment_blossom(bt, j)
                self.mate[j] = s
                partner = j

    # -- main loop --------------------------------------------------------

    def solve(self) -> list[int]:
        k = self.k
        in_b = self.in_blossom
        label = self.label
        w = self.w
        dual = self.dual
        for _stage in range(k // 2):
            label[:] = [FREE] * (2 * k)
            self.best_edge[:] = [None] * (2 * k)
            self.blossom_best_edges[k:] = [None] * k
            self.allowed.clear()
            self.queue.clear()
            for v in range(k):
                if self.mate[v] == -1 and label[in_b[v]] == FREE:
                    self.assign_label(v, EVEN, None)

            augmented = False
            while not augmented:
                while self.queue and not augmented:
                    v = self.queue.pop()
                    bv = in_b[v]
                    wv = w[v]
                    dv = dual[v]
                    for u in range(k):
                        bu = in_b[u]
                        if bu == bv:
                            continue
                        tight = self.is_allowed(v, u)
                        if not tight:
                            s = wv[u] - dv - dual[u]
                            if s <= 0.0:
                                self.allow((v, u))
                                tight = True
                        if tight:
                            if label[bu] == FREE:
                                self.assign_label(u, ODD, (v, u))
                            elif label[bu] == EVEN:
                                base = self.scan_blossom(v, u)
                                if base >= 0:
                                    self.add_blossom(base, v, u)
                                    bv = in_b[v]
                                else:
                                    self.augment(v, u)
                                    augmented = True
                                    break
                            elif label[u] == FREE:
                                # u sits in an odd blossom but was not reached yet
                                label[u] = ODD
                                self.label_edge[u] = (v, u)
                        elif label[bu] == EVEN:
                            cur = self.best_edge[bv]
                            if cur is None or s < self.slack(cur):
                                self.best_edge[bv] = (v, u)
                        elif label[u] == FREE:
                            cur = self.best_edge[u]
                            if cur is None or s < self.slack(cur):
                                self.best_edge[u] = (v, u)
                if augmented:
                    break
                self._dual_step()
            if not augmented:
                raise DefectError("blossom stage ended without augmentation")
            for b in range(k, 2 * k):
                if (self.parent[b] == -1 and self.base[b] >= 0
                        and label[b] == EVEN and dual[b] == 0.0):
                    self.expand_blossom(b, True)
        if -1 in self.mate:
            raise DefectError("matching is not perfect")
        return list(self.mate)

    def _dual_step(self):
        k = self.k
        in_b = self.in_blossom
        label = self.label
        kind = None
        delta = 0.0
        edge = None
        blossom = -1
        # even vertex to a vertex outside every tree
        for v in range(k):
            e = self.best_edge[v]
            if label[in_b[v]] == FREE and e is not None:
                d = self.slack(e)
                if kind is None or d < delta:
                    kind, delta, edge = 2, d, e
        # even blossom to a different even blossom
        for b in range(2 * k):
            e = self.best_edge[b]
            if self.parent[b] == -1 and label[b] == EVEN and e is not None:
                d = self.slack(e) / 2.0
                if kind is None or d < delta:
                    kind, delta, edge = 3, d, e
        # odd blossom whose dual reaches zero
        for b in range(k, 2 * k):
            if (self.base[b] >= 0 and self.parent[b] == -1 and label[b] == ODD
                    and (kind is None or self.dual[b] / 2.0 < delta)):
                kind, delta, blossom = 4, self.dual[b] / 2.0, b
        if kind is None:
            raise DefectError("no dual adjustment available")

        dual = self.dual
        for v in range(k):
            lb = label[in_b[v]]
            if lb == EVEN:
                dual[v] += delta
            elif lb == ODD:
                dual[v] -= delta
        for b in range(k, 2 * k):
            if self.base[b] >= 0 and self.parent[b] == -1:
                if label[b] == EVEN:
                    dual[b] += 2.0 * delta
                elif label[b] == ODD:
                    dual[b] -= 2.0 * delta

        if kind == 2:
            i, j = edge
            if label[in_b[i]] == FREE:
                i, j = j, i
            self.allow(edge)
            self.queue.append(i)
        elif kind == 3:
            self.allow(edge)
            self.queue.append(edge[0])
        else:
            self.expand_blossom(blossom, False)

    # -- certificate ------------------------------------------------------

    def verify_certificate(self):
        """Check dual feasibility, complementary slackness and zero duality gap."""
        k = self.k
        w = np.array(self.w)
        y = np.array(self.dual[:k])
        tol = fp_tol(float(np.abs(w).max()) * k)
        reduced = w - y[:, None] - y[None, :]
        gap_dual = float(y.sum())
        for b in range(k, 2 * k):
            if self.base[b] < 0:
                continue
            z = self.dual[b]
            if z < -tol:
                raise DefectError(f"blossom dual {z!r} is negative")
            members = np.zeros(k, dtype=bool)
            members[list(self.leaves(b))] = True
            reduced[np.ix_(members, members)] += z
            size = int(members.sum())
            gap_dual -= z * (size - 1) / 2
            if z > tol:
                inside = sum(1 for v in range(k) if members[v] and members[self.mate[v]])
                if inside != size - 1:
                    raise DefectError("blossom with positive dual is not full")
        np.fill_diagonal(reduced, 0.0)
        if reduced.min() < -tol:
            raise DefectError(f"dual infeasible: reduced cost {reduced.min()!r}")
        primal = 0.0
        for v in range(k):
            u = self.mate[v]
            if v < u:
                primal += self.w[v][u]
                if abs(reduced[v, u]) > tol:
                    raise DefectError(f"matched edge ({v}, {u}) has slack {reduced[v, u]!r}")
        if abs(primal - gap_dual) > tol:
            raise DefectError(f"duality gap {primal - gap_dual!r}")


def oracle_perfect_matching(s: SubInstance) -> Matching:
    """Exact minimum perfect matching by DP over vertex subsets.

    The lowest unmatched vertex is always paired next, so only reachable
    subsets are visited; ties keep the smallest partner.
    """
    k = s.k
    if k > ORACLE_MAX_VERTICES:
        raise CapacityError(f"matching oracle handles at most {ORACLE_MAX_VERTICES} vertices, got {k}")
    w = s.weights.tolist()
    full = (1 << k) - 1
    best: dict[int, tuple[float, int]] = {0: (0.0, -1)}

    def solve(mask: int) -> float:
        if mask in best:
            return best[mask][0]
        low = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << low)
        val, pick = float("inf"), -1
        r = rest
        while r:
            bit = r & -r
            j = bit.bit_length() - 1
            cand = w[low][j] + solve(rest & ~bit)
            if cand < val:
                val, pick = cand, j
            r &= r - 1
        best[mask] = (val, pick)
        return val

    solve(full)
    pairs = []
    mask = full
    while mask:
        low = (mask & -mask).bit_length() - 1
        j = best[mask][1]
        pairs.append((low, j))
        mask &= ~((1 << low) | (1 << j))
    return _to_matching(s, pairs)
