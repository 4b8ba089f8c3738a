import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import matching_enumeration, random_symmetric
from tspapprox.errors import CapacityError, DefectError, InputError
from tspapprox.generate import euclidean_unit_square
from tspapprox.instance import MetricInstance, fp_tol
from tspapprox.matching import (
    SubInstance,
    induce_subgraph,
    max_weight_transform,
    min_weight_perfect_matching,
    oracle_perfect_matching,
)
from tspapprox.mst import OddSet


def all_perfect_matchings(k):
    if k == 0:
        yield []
        return
    rest = list(range(k))

    def rec(items):
        if not items:
            yield []
            return
        a = items[0]
        for i in range(1, len(items)):
            for tail in rec(items[1:i] + items[i + 1:]):
                yield [(a, items[i])] + tail

    yield from rec(rest)


class TestInduce:
    def test_pair_projection(self):
        m = euclidean_unit_square(4, 0)
        s = induce_subgraph(m, OddSet((0, 3)))
        assert s.weights.shape == (2, 2)
        assert s.weights[0, 1] == m.weight(0, 3)

    def test_all_vertices_is_identity(self):
        m = euclidean_unit_square(6, 0)
        s = induce_subgraph(m, OddSet(tuple(range(6))))
        assert np.array_equal(s.weights, m.weights)

    def test_seeded_lookup(self):
        m = euclidean_unit_square(6, 11)
        ids = (1, 2, 4, 5)
        s = induce_subgraph(m, OddSet(ids))
        for a, b in itertools.product(range(4), repeat=2):
            assert s.weights[a, b] == m.weight(ids[a], ids[b])

    def test_odd_cardinality_is_a_defect(self):
        with pytest.raises(DefectError):
            induce_subgraph(euclidean_unit_square(5, 0), OddSet((0, 1, 2)))

    def test_subinstance_needs_even_order(self):
        with pytest.raises(InputError):
            SubInstance((0, 1, 2), np.ones((3, 3)))


class TestTransform:
    def test_two_values(self):
        w = np.array([[0, 3, 5, 5], [3, 0, 5, 5], [5, 5, 0, 3], [5, 5, 3, 0]], dtype=float)
        out, a = max_weight_transform(SubInstance.from_matrix(w))
        assert a == 5
        assert out[0, 1] == 7 and out[0, 2] == 5

    def test_constant(self):
        w = np.full((4, 4), 2.5)
        np.fill_diagonal(w, 0)
        out, a = max_weight_transform(SubInstance.from_matrix(w))
        off = ~np.eye(4, dtype=bool)
        assert np.all(out[off] == 2.5)

    def test_argmin_equals_argmax_on_seeded_instance(self):
        rng = np.random.default_rng(6)
        s = SubInstance.from_matrix(random_symmetric(rng, 6))
        out, a = max_weight_transform(s)
        assert np.all(out[~np.eye(6, dtype=bool)] > 0)
        pms = list(all_perfect_matchings(6))
        by_w = [sum(s.weights[i, j] for i, j in p) for p in pms]
        by_t = [sum(out[i, j] for i, j in p) for p in pms]
        assert int(np.argmin(by_w)) == int(np.argmax(by_t))
        # both DP oracles agree: minimum under w, maximum (as min of negated) under the transform
        best_t = oracle_perfect_matching(SubInstance.from_matrix(-out))
        assert set(best_t.pairs) == set(oracle_perfect_matching(s).pairs)
        for p, x, y in zip(pms, by_w, by_t):
            assert abs(y - (6 * a - x)) <= 1e-12


class TestOracle:
    def test_two_vertices(self):
        s = SubInstance((3, 7), np.array([[0, 2.5], [2.5, 0]]))
        assert oracle_perfect_matching(s).pairs == ((3, 7),)
        assert oracle_perfect_matching(s).weight == 2.5

    def test_all_ones_tie_break(self):
        w = np.ones((4, 4))
        np.fill_diagonal(w, 0)
        mt = oracle_perfect_matching(SubInstance.from_matrix(w))
        assert mt.pairs == ((0, 1), (2, 3))
        assert mt.weight == 2.0

    def test_capacity(self):
        w = np.ones((22, 22))
        with pytest.raises(CapacityError):
            oracle_perfect_matching(SubInstance.from_matrix(w))

    @pytest.mark.parametrize("k", [2, 4, 6, 8])
    def test_agrees_with_enumeration(self, k):
        rng = np.random.default_rng(k)
        for _ in range(20):
            w = random_symmetric(rng, k)
            assert abs(oracle_perfect_matching(SubInstance.from_matrix(w)).weight - matching_enumeration(w)) <= 1e-12


class TestBlossom:
    def test_two_vertices(self):
        s = SubInstance((2, 5), np.array([[0, 4.0], [4.0, 0]]))
        mt = min_weight_perfect_matching(s)
        assert mt.pairs == ((2, 5),) and mt.weight == 4.0

    def test_dominant_gap(self):
        w = np.full((4, 4), 10.0)
        np.fill_diagonal(w, 0)
        w[0, 1] = w[1, 0] = w[2, 3] = w[3, 2] = 1
        mt = min_weight_perfect_matching(SubInstance.from_matrix(w))
        assert mt.pairs == ((0, 1), (2, 3))
        assert mt.weight == 2.0

    def test_pairs_use_original_ids_sorted(self):
        m = euclidean_unit_square(10, 2)
        s = induce_subgraph(m, OddSet((1, 4, 6, 9)))
        mt = min_weight_perfect_matching(s)
        assert list(mt.pairs) == sorted(mt.pairs)
        assert all(a < b for a, b in mt.pairs)
        assert sorted(itertools.chain(*mt.pairs)) == [1, 4, 6, 9]

    def test_random_against_dp(self):
        rng = np.random.default_rng(2024)
        for trial in range(200):
            k = 2 * int(rng.integers(2, 7))
            w = random_symmetric(rng, k)
            s = SubInstance.from_matrix(w)
            assert abs(min_weight_perfect_matching(s).weight - oracle_perfect_matching(s).weight) <= fp_tol(k)

    @pytest.mark.parametrize("levels", [2, 3, 5])
    def test_integer_ties_against_dp(self, levels):
        # many equal weights force blossom creation, expansion and relabelling
        rng = np.random.default_rng(levels)
        for trial in range(150):
            k = 2 * int(rng.integers(2, 8))
            w = rng.integers(1, levels + 1, (k, k)).astype(float)
            w = np.triu(w, 1)
            w = w + w.T
            s = SubInstance.from_matrix(w)
            assert min_weight_perfect_matching(s).weight == oracle_perfect_matching(s).weight

    def test_near_ties(self):
        rng = np.random.default_rng(77)
        for trial in range(100):
            k = 2 * int(rng.integers(2, 7))
            w = 1.0 + rng.integers(0, 3, (k, k)) * 1e-12
            w = np.triu(w, 1)
            w = w + w.T
            s = SubInstance.from_matrix(w)
            assert abs(min_weight_perfect_matching(s).weight - oracle_perfect_matching(s).weight) <= fp_tol(k)

    def test_large_against_networkx(self):
        nx = pytest.importorskip("networkx")
        rng = np.random.default_rng(31)
        for trial in range(5):
            k = 60
            w = rng.integers(1, 6, (k, k)).astype(float)
            w = np.triu(w, 1)
            w = w + w.T
            g = nx.Graph()
            g.add_weighted_edges_from((i, j, w[i, j]) for i in range(k) for j in range(i + 1, k))
            ref = sum(w[i, j] for i, j in nx.min_weight_matching(g))
            assert min_weight_perfect_matching(SubInstance.from_matrix(w)).weight == ref

    @settings(max_examples=150, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 2**32 - 1), st.sampled_from(["uniform", "euclid", "ints"]))
    def test_property_matches_oracle(self, half, seed, kind):
        k = 2 * half
        rng = np.random.default_rng(seed)
        if kind == "uniform":
            w = random_symmetric(rng, k)
        elif kind == "euclid":
            w = euclidean_unit_square(max(k, 3), seed).weights[:k, :k] + 1e-6
        else:
            w = rng.integers(1, 4, (k, k)).astype(float)
            w = np.triu(w, 1) + np.triu(w, 1).T
        s = SubInstance.from_matrix(w)
        mt = min_weight_perfect_matching(s)
        covered = sorted(itertools.chain(*mt.pairs))
        assert covered == list(range(k))
        assert abs(mt.weight - sum(w[a, b] for a, b in mt.pairs)) <= fp_tol(mt.weight)
        assert abs(mt.weight - oracle_perfect_matching(s).weight) <= fp_tol(mt.weight)
