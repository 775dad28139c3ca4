import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from art1web import art1
from art1web.art1 import (
    Art1Model, Art1Params, assign, match_scores, present_pattern, resonate,
    uncommitted_weights, vigilance_test,
)
from art1web.errors import ClusterBudgetError

from conftest import make_matrix, random_rows
from reference_art1 import reference_train


def model_with(n, *prototypes, rho=0.5):
    m = Art1Model(n, Art1Params(rho))
    for v in prototypes:
        resonate(m, m.n_clusters, v)
    return m


class TestUncommittedWeights:
    def test_n4(self):
        w, v = uncommitted_weights(4)
        np.testing.assert_array_equal(w, [0.4] * 4)
        np.testing.assert_array_equal(v, [1, 1, 1, 1])

    def test_n1(self):
        assert uncommitted_weights(1)[0].tolist() == [1.0]

    def test_n9(self):
        np.testing.assert_allclose(uncommitted_weights(9)[0], 0.2, rtol=0, atol=1e-15)

    def test_n0_rejected(self):
        with pytest.raises(ValueError):
            uncommitted_weights(0)


class TestMatchScores:
    def test_fresh_model(self):
        s = match_scores(Art1Model(4), [1, 0, 1, 0])
        assert s.shape == (1,)
        assert s[0] == pytest.approx(0.8, abs=1e-15)

    def test_committed_cluster(self):
        m = model_with(4, [1, 0, 1, 0])
        np.testing.assert_allclose(m.bottom_up[0], [0.4, 0, 0.4, 0], atol=1e-15)
        s = match_scores(m, [1, 0, 1, 0])
        np.testing.assert_allclose(s, [0.8, 0.8], atol=1e-15)

    def test_zero_pattern_rejected(self):
        with pytest.raises(ValueError):
            match_scores(Art1Model(4), [0, 0, 0, 0])


class TestVigilance:
    def test_uncommitted_always_passes(self):
        for rho in (0.0, 0.5, 1.0):
            ok, ratio = vigilance_test([1, 1, 1, 1], [0, 1, 1, 0], rho)
            assert ok and ratio == 1.0

    def test_one_third_fails_half(self):
        ok, ratio = vigilance_test([1, 0, 0, 0], [1, 1, 1, 0], 0.5)
        assert not ok and ratio == pytest.approx(1 / 3)

    def test_identity(self):
        assert vigilance_test([0, 1, 1], [0, 1, 1], 1.0) == (True, 1.0)

    def test_ratio_equal_to_rho_passes(self):
        # >= rho, not the strict inequality: ratio 1/2 at rho 0.5 resonates
        assert vigilance_test([1, 0, 0, 0], [1, 1, 0, 0], 0.5)[0]


class TestResonate:
    def test_commit_fresh(self):
        m = Art1Model(4)
        assert resonate(m, 0, [1, 0, 1, 0]) == 0
        np.testing.assert_array_equal(m.top_down, [[1, 0, 1, 0]])
        np.testing.assert_allclose(m.bottom_up, [[0.4, 0, 0.4, 0]], atol=1e-15)

    def test_idempotent(self):
        m = model_with(4, [1, 0, 1, 0])
        before = m.bottom_up.copy()
        resonate(m, 0, [1, 0, 1, 0])
        np.testing.assert_array_equal(m.bottom_up, before)
        np.testing.assert_array_equal(m.top_down, [[1, 0, 1, 0]])

    def test_intersection(self):
        m = model_with(4, [1, 1, 1, 0])
        resonate(m, 0, [1, 0, 1, 1])
        np.testing.assert_array_equal(m.top_down, [[1, 0, 1, 0]])
        np.testing.assert_allclose(m.bottom_up, [[0.4, 0, 0.4, 0]], atol=1e-15)


class TestPresentPattern:
    def test_fresh_model_creates_cluster(self):
        m = Art1Model(4, Art1Params(0.5))
        assert present_pattern(m, [1, 0, 1, 0]) == 0
        assert m.n_clusters == 1

    def test_tie_goes_to_committed(self):
        m = model_with(4, [1, 0, 1, 0])
        assert present_pattern(m, [1, 0, 1, 0]) == 0
        assert m.n_clusters == 1
        np.testing.assert_allclose(m.bottom_up, [[0.4, 0, 0.4, 0]], atol=1e-15)

    def test_mismatch_founds_new_cluster(self):
        m = model_with(4, [1, 0, 0, 0], rho=0.9)
        assert present_pattern(m, [0, 1, 1, 1]) == 1
        np.testing.assert_array_equal(m.top_down, [[1, 0, 0, 0], [0, 1, 1, 1]])

    def test_reset_moves_to_next_node(self):
        # cluster 0 wins on score but fails vigilance; cluster 1 passes
        z = [0] * 11
        m = model_with(16, [1, 1, 0, 0, 0] + z, [1, 1, 1, 0, 1] + z, rho=0.75)
        p = [1, 1, 1, 1, 0] + z
        s = match_scores(m, p)
        # 2/2.5 > 3/4.5 > 8/17; ratios 2/4 (fail) and 3/4 (pass)
        np.testing.assert_allclose(s, [0.8, 3 / 4.5, 8 / 17])
        assert present_pattern(m, p) == 1
        np.testing.assert_array_equal(m.top_down[1], [1, 1, 1, 0, 0] + z)

    def test_budget(self):
        m = Art1Model(4, Art1Params(0.9, max_clusters=1))
        present_pattern(m, [1, 0, 0, 0])
        with pytest.raises(ClusterBudgetError, match="cluster budget exhausted"):
            present_pattern(m, [0, 1, 1, 0])


class TestTrain:
    def test_single_pattern(self):
        model, c = art1.train(make_matrix([[0, 1, 1, 0]]))
        assert c.n_clusters == 1
        np.testing.assert_array_equal(c.prototypes, [[0, 1, 1, 0]])

    def test_duplicates(self):
        model, c = art1.train(make_matrix([[1, 1, 0, 0, 0]] * 3), Art1Params(0.9))
        assert c.n_clusters == 1 and model.converged and model.epochs == 2
        np.testing.assert_array_equal(model.top_down, [[1, 1, 0, 0, 0]])

    def test_dense_duplicates_never_settle(self):
        # the fresh node outbids an exact match when |p| > n/2
        model, c = art1.train(make_matrix([[1, 1, 0]] * 2), Art1Params(0.9, max_epochs=7))
        assert not model.converged and model.epochs == 7
        assert c.n_clusters == 2

    def test_empty_clusters_removed(self):
        # pattern 0 founds cluster 0, pattern 1 founds cluster 1; in epoch 2
        # pattern 0 prefers the more specific cluster 1, leaving 0 empty
        rows = [[1, 1, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0]]
        model, c = art1.train(make_matrix(rows), Art1Params(0.0))
        labels, V, _, _ = reference_train(rows, 0.0)
        assert c.labels(make_matrix(rows).hosts).tolist() == labels
        np.testing.assert_array_equal(model.top_down, V)
        assert set(c.assignments.values()) == set(range(c.n_clusters))

    def test_planted_noise_free(self):
        from art1web.synth import gen_planted
        from art1web.quality import rand_index

        m = gen_planted(40, 3, 10, 0.25, 0.0, seed=3)
        _, c = art1.train(m, Art1Params(0.5))
        assert c.n_clusters == 3
        assert rand_index(c.assignments, m.ground_truth) == 1.0

    def test_deterministic(self, rng):
        m = make_matrix(random_rows(rng, 12, 30))
        a, ca = art1.train(m, Art1Params(0.4))
        b, cb = art1.train(m, Art1Params(0.4))
        assert ca.assignments == cb.assignments
        np.testing.assert_array_equal(a.bottom_up, b.bottom_up)

    def test_rho_out_of_range(self):
        with pytest.raises(ValueError):
            Art1Params(1.5)


class TestAssign:
    def test_equal_to_prototype(self):
        m = model_with(4, [1, 0, 0, 0], [0, 1, 1, 0])
        assert assign(m, [0, 1, 1, 0]) == 1

    def test_orthogonal_no_match(self):
        m = model_with(4, [1, 0, 0, 0], [0, 1, 0, 0])
        assert assign(m, [0, 0, 1, 1]) is None

    def test_covered_by_two(self):
        # p covers both prototypes fully (ratio 1/2 each at rho 0.5); scores
        # 1/1.5 for [1,0,0,0] vs 1/1.5 for [0,1,0,0] -> tie -> lowest id;
        # a two-bit prototype scores 2/2.5 = 0.8 and wins outright
        m = model_with(4, [1, 0, 0, 0], [0, 1, 0, 0])
        assert assign(m, [1, 1, 0, 0]) == 0
        m2 = model_with(4, [1, 0, 0, 0], [1, 1, 0, 0])
        assert assign(m2, [1, 1, 0, 0]) == 1

    def test_no_learning(self):
        m = model_with(4, [1, 1, 0, 0])
        before = m.top_down.copy()
        assign(m, [1, 0, 0, 0])
        np.testing.assert_array_equal(m.top_down, before)


class TestModelFile:
    def test_round_trip(self, tmp_path, rng):
        model, _ = art1.train(make_matrix(random_rows(rng, 20, 40)), Art1Params(0.6))
        art1.save_model(model, tmp_path / "m.json")
        back = art1.load_model(tmp_path / "m.json")
        np.testing.assert_array_equal(back.top_down, model.top_down)
        np.testing.assert_allclose(back.bottom_up, model.bottom_up, rtol=0, atol=1e-15)
        assert back.params == model.params

    def test_bottom_up_full_precision(self, tmp_path):
        model = model_with(3, [1, 1, 1])
        art1.save_model(model, tmp_path / "m.json")
        doc = json.loads((tmp_path / "m.json").read_text())
        assert doc["clusters"][0]["bottom_up"][0] == 1 / 3.5


def _small_instance():
    return st.integers(1, 8).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(0, 1), min_size=n, max_size=n).filter(any),
            min_size=1, max_size=10,
        )
    )


@settings(max_examples=300, deadline=None)
@given(rows=_small_instance(), rho=st.sampled_from([0.0, 0.3, 0.5, 0.9, 1.0]),
       max_epochs=st.sampled_from([1, 2, 5, 20]))
def test_matches_reference_trace(rows, rho, max_epochs):
    matrix = make_matrix(rows)
    model, c = art1.train(matrix, Art1Params(rho, max_epochs))
    labels, V, W, epochs = reference_train(rows, rho, max_epochs)
    assert c.labels(matrix.hosts).tolist() == labels
    assert model.epochs == epochs
    np.testing.assert_array_equal(model.top_down, np.array(V).reshape(-1, len(rows[0])))
    np.testing.assert_allclose(model.bottom_up, np.array(W, dtype=float).reshape(-1, len(rows[0])),
                               rtol=0, atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(rows=_small_instance())
def test_rho_zero_first_winner_resonates(rows):
    # with rho = 0 no reset ever happens: the winner of the score competition learns
    n = len(rows[0])
    model = Art1Model(n, Art1Params(0.0))
    for r in rows:
        exact = [Fraction(int(v @ r), 1) / (Fraction(1, 2) + int(v.sum())) for v in model.top_down]
        exact.append(Fraction(2 * sum(r), 1 + n))
        expected = exact.index(max(exact))
        assert present_pattern(model, r) == expected
