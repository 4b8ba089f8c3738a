"""End-to-end 3/2-approximation for metric TSP and for covering walks.

Problem A: a Hamiltonian cycle of a complete metric graph at most 3/2 times
the optimum. Problem B: a closed walk through every vertex of a connected
graph, edge repetitions counted, at most 3/2 times the optimum.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .errors import DefectError, InputError, MetricViolationError
from .euler import Multigraph, circuit_weight, eulerian_circuit, union_multigraph
from .instance import (
    TAU_METRIC,
    GeneralInstance,
    MetricClosure,
    MetricInstance,
    Tour,
    Walk,
    expand_walk,
    fp_tol,
    metric_closure,
    tour_weight,
    validate_metric,
    walk_weight,
)
from .matching import Matching, SubInstance, induce_subgraph, min_weight_perfect_matching
from .mst import OddSet, SpanningTree, minimum_spanning_tree, odd_degree_vertices

__all__ = [
    "APPROX_FACTOR",
    "PipelineTrace",
    "SolveReport",
    "run_pipeline",
    "shortcut",
    "solve_problem_a",
    "solve_problem_b",
    "tour_weight",
    "walk_weight",
]

APPROX_FACTOR = 1.5


def shortcut(walk: Sequence[int], m: MetricInstance) -> Tour:
    """Keep the first occurrence of every vertex of a closed covering walk."""
    seq = list(walk)
    if len(seq) < 2 or seq[0] != seq[-1]:
        raise InputError("shortcut needs a closed walk")
    seen = set()
    order = []
    for v in seq:
        if v not in seen:
            seen.add(v)
            order.append(v)
    if len(order) != m.n or seen != set(range(m.n)):
        missing = sorted(set(range(m.n)) - seen)
        raise InputError(f"walk does not visit vertices {missing}")
    return Tour(tuple(order), tour_weight(order, m))


@dataclass(frozen=True)
class PipelineTrace:
    """Every intermediate object of one Problem A run."""

    instance: MetricInstance
    tree: SpanningTree
    odd: OddSet
    sub: SubInstance
    matching: Matching
    multigraph: Multigraph
    circuit: tuple[int, ...]
    circuit_weight: float
    tour: Tour
    timings_ms: dict[str, float]


def run_pipeline(m: MetricInstance, allow_nonmetric: bool = False) -> PipelineTrace:
    clock = time.perf_counter
    t0 = clock()
    tree = minimum_spanning_tree(m)
    odd = odd_degree_vertices(tree, m.n)
    t1 = clock()
    sub = induce_subgraph(m, odd)
    matching = min_weight_perfect_matching(sub)
    t2 = clock()
    multi = union_multigraph(tree, matching, m)
    circuit = eulerian_circuit(multi)
    c_weight = circuit_weight(circuit, m)
    t3 = clock()
    tour = shortcut(circuit, m)
    t4 = clock()

    tol = fp_tol(c_weight)
    if abs(c_weight - (tree.weight + matching.weight)) > tol:
        raise DefectError(
            f"circuit weight {c_weight!r} != tree {tree.weight!r} + matching {matching.weight!r}"
        )
    if not allow_nonmetric and tour.weight > c_weight + tol:
        raise DefectError(f"shortcutting raised the weight from {c_weight!r} to {tour.weight!r}")

    ms = lambda a, b: round((b - a) * 1000.0, 3)
    timings = {"mst": ms(t0, t1), "matching": ms(t1, t2), "euler": ms(t2, t3), "shortcut": ms(t3, t4)}
    return PipelineTrace(m, tree, odd, sub, matching, multi, tuple(circuit), c_weight, tour, timings)


@dataclass
class SolveReport:
    problem: str
    n: int
    solution: Union[Tour, Walk]
    weight: float
    stage_weights: dict[str, float]
    timings_ms: dict[str, float] = field(default_factory=dict)
    k_guarantee: float = APPROX_FACTOR
    metric_waived: bool = False
    oracle_weight: Optional[float] = None

    @property
    def ratio(self) -> Optional[float]:
        if self.oracle_weight is None:
            return None
        return self.weight / self.oracle_weight

    @property
    def sequence(self) -> list[int]:
        if isinstance(self.solution, Tour):
            return list(self.solution.order)
        return list(self.solution.sequence)

    def to_json(self, include_timings: bool = False) -> dict:
        doc = {
            "problem": self.problem.lower(),
            "n": self.n,
            "weight": self.weight,
            "k": self.k_guarantee,
        }
        if self.oracle_weight is not None:
            doc["oracle_weight"] = self.oracle_weight
            doc["ratio"] = self.ratio
        doc["stages"] = dict(self.stage_weights)
        doc["solution"] = self.sequence
        if self.metric_waived:
            doc["metric_waived"] = True
        if include_timings:
            doc["timings_ms"] = dict(self.timings_ms)
        return doc


def solve_problem_a(
    m: MetricInstance,
    allow_nonmetric: bool = False,
    tau_metric: float = TAU_METRIC,
) -> SolveReport:
    """Tour of weight below 3/2 of the optimum on a metric instance.

    The triangle inequality is checked first unless ``allow_nonmetric`` is
    set; without it the factor is not guaranteed.
    """
    if not allow_nonmetric:
        violations = validate_metric(m.weights, tau_metric)
        if violations:
            raise MetricViolationError(violations)
    trace = run_pipeline(m, allow_nonmetric=allow_nonmetric)
    return _report("A", trace, trace.tour, trace.tour.weight, allow_nonmetric)


def solve_problem_b(g: GeneralInstance) -> SolveReport:
    """Covering closed walk of a connected graph via its metric closure."""
    clock = time.perf_counter
    t0 = clock()
    closure: MetricClosure = metric_closure(g)
    t1 = clock()
    trace = run_pipeline(closure.metric)
    walk = expand_walk(trace.tour, closure)
    t2 = clock()
    if not walk.covers(g.n):
        raise DefectError("expanded walk misses a vertex")
    report = _report("B", trace, walk, walk.weight, False)
    report.timings_ms["closure"] = round((t1 - t0) * 1000.0, 3)
    report.timings_ms["expand"] = round((t2 - t1) * 1000.0 - sum(trace.timings_ms.values()), 3)
    return report


def _report(problem: str, trace: PipelineTrace, solution, weight: float, waived: bool) -> SolveReport:
    return SolveReport(
        problem=problem,
        n=trace.instance.n,
        solution=solution,
        weight=weight,
        stage_weights={
            "mst": trace.tree.weight,
            "matching": trace.matching.weight,
            "euler": trace.circuit_weight,
        },
        timings_ms=dict(trace.timings_ms),
        metric_waived=waived,
    )
