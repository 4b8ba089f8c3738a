import math

import pytest
from hypothesis import given, settings

from conftest import closed_walks_min, metric_instances
from tspapprox.errors import CapacityError
from tspapprox.generate import euclidean_unit_square, random_connected_graph
from tspapprox.instance import GeneralInstance, MetricInstance, fp_tol
from tspapprox.mst import minimum_spanning_tree
from tspapprox.oracle import exact_tsp, exact_tsp_brute, problem_b_lower_bound, shortest_covering_walk

UNIT_CYCLE = MetricInstance([
    [0, 1, 2, 1],
    [1, 0, 1, 2],
    [2, 1, 0, 1],
    [1, 2, 1, 0],
])


def test_triangle(triangle_ones):
    assert exact_tsp(triangle_ones).weight == 3.0
    assert exact_tsp_brute(triangle_ones).weight == 3.0


def test_unit_cycle():
    t = exact_tsp(UNIT_CYCLE)
    assert t.weight == 4.0 and t.order == (0, 1, 2, 3)
    assert exact_tsp_brute(UNIT_CYCLE).weight == 4.0


def test_euclidean_seed_3_n9():
    m = euclidean_unit_square(9, 3)
    assert abs(exact_tsp(m).weight - exact_tsp_brute(m).weight) <= fp_tol(1.0)


def test_canonical_orientation():
    m = euclidean_unit_square(8, 4)
    t = exact_tsp(m)
    assert t.order[0] == 0 and t.order[1] < t.order[-1]


def test_capacity():
    with pytest.raises(CapacityError):
        exact_tsp(euclidean_unit_square(17, 0))
    with pytest.raises(CapacityError):
        exact_tsp_brute(euclidean_unit_square(10, 0))


def test_sixteen_vertices_feasible():
    m = euclidean_unit_square(16, 0)
    assert exact_tsp(m).weight >= minimum_spanning_tree(m).weight


def test_problem_b_path(path3):
    assert problem_b_lower_bound(path3) == 4.0
    assert closed_walks_min(path3, 6) == 4.0
    assert shortest_covering_walk(path3) == 4.0


def test_problem_b_triangle():
    g = GeneralInstance(3, ((0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)))
    assert problem_b_lower_bound(g) == 3.0


def test_problem_b_seed_11_n7():
    g = random_connected_graph(7, 11)
    lb = problem_b_lower_bound(g)
    assert abs(shortest_covering_walk(g, bound=lb) - lb) <= fp_tol(lb)
    assert abs(shortest_covering_walk(g) - lb) <= fp_tol(lb)


def test_bound_too_small_finds_nothing(path3):
    assert math.isinf(shortest_covering_walk(path3, bound=3.0))


@settings(max_examples=60, deadline=None)
@given(metric_instances(5, 9))
def test_dp_matches_brute(m):
    assert abs(exact_tsp(m).weight - exact_tsp_brute(m).weight) <= fp_tol(1.0)


@settings(max_examples=40, deadline=None)
@given(metric_instances(3, 8))
def test_hamiltonian_equals_covering_walk_on_metric(m):
    # on a metric instance the shortest covering walk is a Hamiltonian cycle
    opt = exact_tsp(m).weight
    assert abs(shortest_covering_walk(m) - opt) <= fp_tol(opt)
    assert opt >= minimum_spanning_tree(m).weight
