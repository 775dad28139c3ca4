import numpy as np
import pytest

from art1web.baselines import KMeansParams, SomParams, kmeans_train, som_train
from art1web.quality import rand_index
from art1web.synth import gen_planted

from conftest import make_matrix, random_rows


@pytest.fixture(scope="module")
def planted3():
    return gen_planted(64, 3, 40, 0.25, 0.02, seed=0)


class TestKMeans:
    def test_k1_is_mean(self, rng):
        m = make_matrix(random_rows(rng, 10, 25))
        c = kmeans_train(m, KMeansParams(1))
        np.testing.assert_allclose(c.prototypes, [m.bits.mean(axis=0)])

    def test_identical_patterns(self):
        m = make_matrix([[1, 0, 1]] * 6)
        c = kmeans_train(m, KMeansParams(3, seed=1))
        assert c.n_clusters == 1
        np.testing.assert_array_equal(c.prototypes, [[1, 0, 1]])

    def test_k_too_large(self):
        with pytest.raises(ValueError):
            kmeans_train(make_matrix([[1, 0]]), KMeansParams(2))

    def test_k_equals_n_singletons(self, rng):
        m = make_matrix(np.eye(6, dtype=np.uint8))
        c = kmeans_train(m, KMeansParams(6))
        assert c.n_clusters == 6
        np.testing.assert_array_equal(c.prototypes[c.labels(m.hosts)], m.bits)

    @pytest.mark.parametrize("seed", range(10))
    def test_objective_non_increasing(self, seed):
        m = make_matrix(random_rows(np.random.default_rng(seed), 16, 60))
        hist = []
        kmeans_train(m, KMeansParams(5, seed=seed), history=hist)
        assert all(b <= a + 1e-9 for a, b in zip(hist, hist[1:]))

    @pytest.mark.parametrize("seed", range(10))
    def test_assignment_optimal_at_termination(self, seed):
        m = make_matrix(random_rows(np.random.default_rng(seed), 16, 60))
        c = kmeans_train(m, KMeansParams(4, seed=seed))
        X = m.bits.astype(float)
        d = ((X[:, None, :] - c.prototypes[None]) ** 2).sum(-1)
        own = d[np.arange(len(X)), c.labels(m.hosts)]
        assert (own <= d.min(axis=1) + 1e-9).all()

    def test_deterministic(self, planted3):
        a = kmeans_train(planted3, KMeansParams(3, seed=7))
        b = kmeans_train(planted3, KMeansParams(3, seed=7))
        assert a.assignments == b.assignments
        np.testing.assert_array_equal(a.prototypes, b.prototypes)

    def test_planted_recovery(self, planted3):
        scores = [rand_index(kmeans_train(planted3, KMeansParams(3, seed=s)).assignments,
                             planted3.ground_truth) for s in range(20)]
        assert np.median(scores) >= 0.95


class TestSom:
    def test_single_node(self, rng):
        m = make_matrix(random_rows(rng, 8, 30))
        c = som_train(m, SomParams(1, 1, iters=3000, seed=2))
        assert c.n_clusters == 1
        np.testing.assert_allclose(c.prototypes[0], m.bits.mean(axis=0), atol=0.15)

    def test_no_training(self, rng):
        m = make_matrix(random_rows(rng, 8, 30))
        a = som_train(m, SomParams(2, 2, iters=0, seed=4))
        b = som_train(m, SomParams(2, 2, iters=0, seed=4))
        assert a.assignments == b.assignments
        W = np.random.default_rng(4).random((4, 8))
        # the surviving prototypes are rows of the untouched random init
        assert all(any(np.array_equal(p, w) for w in W) for p in a.prototypes)

    def test_prototypes_in_unit_cube(self, planted3):
        c = som_train(planted3, SomParams(3, 2, seed=1))
        assert c.prototypes.min() >= 0.0 and c.prototypes.max() <= 1.0

    def test_planted_recovery(self, planted3):
        runs = [som_train(planted3, SomParams(2, 2, seed=s)) for s in range(20)]
        assert all(c.n_clusters >= 3 for c in runs)
        assert np.median([rand_index(c.assignments, planted3.ground_truth) for c in runs]) >= 0.9

    def test_bad_lr(self):
        with pytest.raises(ValueError):
            SomParams(initial_lr=1.5)
