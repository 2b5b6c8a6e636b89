"""Datasets, hypotheses, voters, losses, and the CSV/JSON formats."""

import json
import math

import numpy as np
import pytest

from w2s.core import (ConstantHypothesis, Dataset, MajorityOfMajorities,
                      SampleDistribution, Stump, TableHypothesis, VotingClassifier,
                      ZeroVoter, hard_label, hard_labels, hypothesis_from_json,
                      load_dataset_csv, margin, margins, min_margin,
                      save_dataset_csv, zero_one_loss)
from w2s.errors import InputError


def _toy_features():
    X = np.array([[0.0, 1.0], [2.0, -1.0], [-3.0, 0.5], [1.0, 1.0]])
    y = np.array([1, -1, 1, -1])
    return Dataset.from_features(X, y)


class TestDataset:
    def test_feature_dataset_basics(self):
        ds = _toy_features()
        assert len(ds) == 4
        assert ds.feature_count == 2
        x, y = ds[1]
        assert y == -1
        np.testing.assert_array_equal(x, [2.0, -1.0])

    def test_arrays_are_read_only(self):
        ds = _toy_features()
        with pytest.raises(ValueError):
            ds.points[0, 0] = 9.0
        with pytest.raises(ValueError):
            ds.labels[0] = -1

    def test_labels_must_be_signs(self):
        with pytest.raises(InputError):
            Dataset.from_features(np.zeros((2, 1)), np.array([1, 0]))

    def test_domain_dataset(self):
        ds = Dataset.from_domain(np.array([0, 2, 2]), np.array([1, -1, -1]), 3)
        assert len(ds) == 3
        assert ds.domain_size == 3
        with pytest.raises(InputError):
            Dataset.from_domain(np.array([3]), np.array([1]), 3)

    def test_subset_keeps_kind_and_order(self):
        ds = _toy_features()
        sub = ds.subset([2, 0])
        np.testing.assert_array_equal(sub.labels, [1, 1])
        np.testing.assert_array_equal(sub.points[0], [-3.0, 0.5])

    def test_length_mismatch_rejected(self):
        with pytest.raises(InputError):
            Dataset.from_features(np.zeros((3, 1)), np.array([1, -1]))


class TestHypotheses:
    def test_stump_threshold_is_strict(self):
        h = Stump(0, 1.5, 1)
        assert h.evaluate(np.array([2.0])) == 1
        assert h.evaluate(np.array([1.5])) == -1  # ties go below
        assert Stump(0, 1.5, -1).evaluate(np.array([2.0])) == -1

    def test_stump_batch_matches_pointwise(self):
        rng = np.random.default_rng(7)
        X = rng.normal(size=(40, 3))
        ds = Dataset.from_features(X, np.ones(40, dtype=np.int64))
        for f in range(3):
            for thr in (-0.5, 0.0, X[5, f]):
                for pol in (1, -1):
                    h = Stump(f, thr, pol)
                    got = h.evaluate_batch(ds)
                    want = [h.evaluate(x) for x in X]
                    np.testing.assert_array_equal(got, want)

    def test_table_hypothesis(self):
        h = TableHypothesis(np.array([1, -1, 1], dtype=np.int8))
        ds = Dataset.from_domain(np.array([1, 0]), np.array([1, 1]), 3)
        np.testing.assert_array_equal(h.evaluate_batch(ds), [-1, 1])
        assert h.evaluate(2) == 1

    def test_constant_hypothesis(self):
        h = ConstantHypothesis(-1)
        ds = _toy_features()
        np.testing.assert_array_equal(h.evaluate_batch(ds), [-1, -1, -1, -1])

    def test_json_round_trip(self):
        for h in (Stump(1, 0.25, -1), Stump(0, math.inf, 1),
                  TableHypothesis(np.array([1, -1], dtype=np.int8)),
                  ConstantHypothesis(1)):
            assert hypothesis_from_json(h.to_json()) == h


class TestSampleDistribution:
    def test_uniform(self):
        d = SampleDistribution.uniform(4)
        np.testing.assert_allclose(d.w, 0.25)

    def test_sum_checked(self):
        with pytest.raises(InputError):
            SampleDistribution([0.5, 0.6])
        with pytest.raises(InputError):
            SampleDistribution([1.5, -0.5])


class TestVotingClassifier:
    def test_convexity_enforced(self):
        h = ConstantHypothesis(1)
        with pytest.raises(InputError):
            VotingClassifier([0.5, 0.4], [h, h])
        with pytest.raises(InputError):
            VotingClassifier([1.5, -0.5], [h, h])

    def test_unnormalized_weights_rescaled(self):
        # boosting hands in raw alphas scaled by their sum upstream; the
        # constructor still renormalizes so weights sum to exactly-ish 1
        v = VotingClassifier([0.3, 0.7 + 1e-12], [ConstantHypothesis(1),
                                                  ConstantHypothesis(-1)])
        assert abs(v.weights.sum() - 1.0) < 1e-15

    def test_evaluate_is_convex_combination(self):
        v = VotingClassifier([0.25, 0.75],
                             [Stump(0, 0.0, 1), ConstantHypothesis(1)])
        assert v.evaluate(np.array([1.0])) == pytest.approx(1.0)
        assert v.evaluate(np.array([-1.0])) == pytest.approx(0.5)

    def test_batch_matches_pointwise_stumps(self):
        rng = np.random.default_rng(11)
        X = rng.normal(size=(60, 2))
        ds = Dataset.from_features(X, np.ones(60, dtype=np.int64))
        hyps = [Stump(int(rng.integers(2)), float(rng.normal()),
                      int(rng.choice([-1, 1]))) for _ in range(9)]
        w = rng.dirichlet(np.ones(9))
        v = VotingClassifier(w, hyps)
        got = v.evaluate_batch(ds)
        want = np.array([v.evaluate(x) for x in X])
        np.testing.assert_allclose(got, want, atol=1e-12)

    def test_columnar_stump_block_matches_objects(self):
        rng = np.random.default_rng(12)
        X = rng.normal(size=(50, 3))
        ds = Dataset.from_features(X, np.ones(50, dtype=np.int64))
        feats = rng.integers(0, 3, size=7)
        thrs = rng.normal(size=7)
        pols = rng.choice([-1, 1], size=7)
        w = rng.dirichlet(np.ones(7))
        block = VotingClassifier.from_stump_arrays(w, feats, thrs, pols)
        plain = VotingClassifier(w, [Stump(int(f), float(t), int(p))
                                     for f, t, p in zip(feats, thrs, pols)])
        np.testing.assert_allclose(block.evaluate_batch(ds),
                                   plain.evaluate_batch(ds), atol=1e-12)
        assert block.hypotheses == plain.hypotheses

    def test_columnar_table_block_matches_objects(self):
        rng = np.random.default_rng(13)
        table = (rng.integers(0, 2, size=(5, 8)) * 2 - 1).astype(np.int8)
        rows = rng.integers(0, 5, size=6)
        w = rng.dirichlet(np.ones(6))
        ds = Dataset.from_domain(rng.integers(0, 8, size=30),
                                 np.ones(30, dtype=np.int64), 8)
        block = VotingClassifier.from_table_rows(w, table, rows)
        plain = VotingClassifier(w, [TableHypothesis(table[r]) for r in rows])
        np.testing.assert_allclose(block.evaluate_batch(ds),
                                   plain.evaluate_batch(ds), atol=1e-12)

    def test_json_round_trip(self):
        v = VotingClassifier([0.5, 0.5], [Stump(0, -math.inf, 1),
                                          ConstantHypothesis(-1)])
        d = json.loads(json.dumps(v.to_json()))
        back = VotingClassifier.from_json(d)
        assert back.hypotheses == v.hypotheses
        np.testing.assert_allclose(back.weights, v.weights)

    def test_empty_json_gives_zero_voter(self):
        assert isinstance(VotingClassifier.from_json({"terms": []}), ZeroVoter)


class TestZeroAndMajority:
    def test_zero_voter(self):
        z = ZeroVoter()
        ds = _toy_features()
        assert z.evaluate(ds.points[0]) == 0.0
        np.testing.assert_array_equal(z.evaluate_batch(ds), np.zeros(4))
        assert zero_one_loss(z, ds) == 1.0  # zero output is always an error

    def test_majority_ties_go_positive(self):
        up = VotingClassifier([1.0], [ConstantHypothesis(1)])
        down = VotingClassifier([1.0], [ConstantHypothesis(-1)])
        maj = MajorityOfMajorities([up, down])
        assert maj.predict(np.array([0.0])) == 1

    def test_majority_counts_signs_not_magnitudes(self):
        # two weak +1 voters out-vote one confident -1 voter
        lean_up = VotingClassifier([0.5 + 1e-9, 0.5 - 1e-9],
                                   [ConstantHypothesis(1), ConstantHypothesis(-1)])
        sure_down = VotingClassifier([1.0], [ConstantHypothesis(-1)])
        maj = MajorityOfMajorities([lean_up, lean_up, sure_down])
        ds = _toy_features()
        np.testing.assert_array_equal(maj.evaluate_batch(ds), [1, 1, 1, 1])

    def test_majority_json_round_trip(self):
        maj = MajorityOfMajorities([
            VotingClassifier([1.0], [Stump(0, 0.5, 1)]),
            VotingClassifier([0.25, 0.75], [ConstantHypothesis(1),
                                            Stump(1, -0.5, -1)]),
        ])
        back = MajorityOfMajorities.from_json(json.loads(json.dumps(maj.to_json())))
        assert len(back) == 2
        ds = _toy_features()
        np.testing.assert_array_equal(back.evaluate_batch(ds),
                                      maj.evaluate_batch(ds))


class TestLosses:
    def test_hard_label_tie_positive(self):
        assert hard_label(0.0) == 1
        assert hard_label(-1e-300) == -1
        np.testing.assert_array_equal(hard_labels(np.array([0.0, -0.5, 0.5])),
                                      [1, -1, 1])

    def test_margin_and_loss(self):
        v = VotingClassifier([0.75, 0.25], [ConstantHypothesis(1),
                                            ConstantHypothesis(-1)])
        ds = _toy_features()  # labels 1,-1,1,-1
        np.testing.assert_allclose(margins(v, ds), [0.5, -0.5, 0.5, -0.5])
        assert min_margin(v, ds) == -0.5
        assert zero_one_loss(v, ds) == 0.5
        assert margin(v, ds.points[0], 1) == pytest.approx(0.5)

    def test_loss_counts_zero_score_as_error(self):
        v = VotingClassifier([0.5, 0.5], [ConstantHypothesis(1),
                                          ConstantHypothesis(-1)])
        ds = _toy_features()
        assert zero_one_loss(v, ds) == 1.0

    def test_weighted_loss(self):
        v = VotingClassifier([1.0], [ConstantHypothesis(1)])
        ds = _toy_features()
        w = np.array([0.1, 0.2, 0.3, 0.4])
        assert zero_one_loss(v, ds, w) == pytest.approx(0.6)


class TestCsv:
    def test_feature_round_trip(self, tmp_path):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(20, 3))
        y = rng.choice([-1, 1], size=20)
        ds = Dataset.from_features(X, y)
        path = tmp_path / "data.csv"
        save_dataset_csv(ds, path)
        back = load_dataset_csv(path)
        assert back.kind == "features"
        np.testing.assert_array_equal(back.points, X)  # repr round-trips floats
        np.testing.assert_array_equal(back.labels, y)

    def test_domain_round_trip(self, tmp_path):
        ds = Dataset.from_domain(np.array([4, 0, 4]), np.array([1, -1, 1]), 5)
        path = tmp_path / "data.csv"
        save_dataset_csv(ds, path)
        back = load_dataset_csv(path)
        assert back.kind == "domain"
        assert back.domain_size == 5
        np.testing.assert_array_equal(back.points, ds.points)
        np.testing.assert_array_equal(back.labels, ds.labels)

    def test_header_validated(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("f0,f1,target\n0.0,1.0,1\n")
        with pytest.raises(InputError):
            load_dataset_csv(path)
