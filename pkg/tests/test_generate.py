import numpy as np
import pytest

from conftest import simple_path_distances
from tspapprox.errors import InputError
from tspapprox.generate import (
    FAMILIES,
    generate,
    random_connected_graph,
    trial_seed,
)
from tspapprox.instance import TAU_FP, GeneralInstance, MetricInstance, metric_closure, validate_metric


def test_euclidean_deterministic():
    a = generate("euclidean-unit-square", 5, 0)
    b = generate("euclidean-unit-square", 5, 0)
    assert a.weights.tobytes() == b.weights.tobytes()


@pytest.mark.parametrize("family", ["euclidean-unit-square", "random-metric-closure"])
def test_corpus_is_metric(family):
    for n in range(3, 15):
        for seed in range(5):
            m = generate(family, n, seed)
            assert isinstance(m, MetricInstance)
            assert validate_metric(m.weights, tau_metric=TAU_FP) == []


def test_closure_family_matches_source_graph():
    g = random_connected_graph(6, 1)
    m = generate("random-metric-closure", 6, 1)
    assert np.array_equal(m.weights, metric_closure(g).metric.weights)
    np.testing.assert_allclose(m.weights, simple_path_distances(g), rtol=0, atol=1e-12)


def test_random_connected_weights_in_unit_interval():
    for seed in range(20):
        g = generate("random-connected", 9, seed)
        assert isinstance(g, GeneralInstance)
        assert all(0 < w <= 1 for _, _, w in g.edges)


def test_unknown_family():
    with pytest.raises(InputError):
        generate("hexagonal", 5, 0)


def test_too_small():
    with pytest.raises(InputError):
        generate(FAMILIES[0], 2, 0)


def test_trial_seed_is_stable_and_distinct():
    seeds = {trial_seed(7, n, t) for n in range(4, 8) for t in range(10)}
    assert len(seeds) == 40
    assert trial_seed(7, 4, 0) == trial_seed(7, 4, 0)
    assert all(0 <= s < 2**64 for s in seeds)
