"""Skewed-distribution lower-bound construction and its exact floor."""

import warnings

import numpy as np
import pytest

from w2s.core import TableHypothesis, VotingClassifier
from w2s.errors import InputError
from w2s.hardness import (Certificate, HardInstance, bayes_floor, build_domain,
                          build_instance, certify_concept,
                          default_hypothesis_count, hard_distribution,
                          hard_weak_learner, sample_hard_points,
                          sample_hypotheses)
from w2s.rng import derive_rng

pytestmark = pytest.mark.filterwarnings(
    "ignore:gamma >= 1/80 is outside the floor's proven range")


def _small_instance():
    return build_instance(gamma=0.1, m=6, u=5, n_hyps=64, seed=0)


class TestDistribution:
    def test_frozen_masses(self):
        masses = hard_distribution(9, 18)
        assert masses[0] == pytest.approx(8 / 9, abs=0)
        np.testing.assert_allclose(masses[1:], 1 / 72, rtol=0)
        assert masses.sum() == pytest.approx(1.0, abs=1e-15)

    def test_validation(self):
        with pytest.raises(InputError):
            hard_distribution(1, 10)
        with pytest.raises(InputError):
            hard_distribution(9, 1)  # 4m < u - 1

    def test_sampling_frequency(self):
        rng = derive_rng(0, "test.points")
        draws = sample_hard_points(9, 18, 50000, rng)
        freq = np.mean(draws == 0)
        assert abs(freq - 8 / 9) <= 4 * np.sqrt((8 / 9) * (1 / 9) / 50000)


class TestSizing:
    def test_domain_size(self):
        assert build_domain(1, 0.1) == 100
        assert build_domain(2, 0.1) == 200
        assert build_domain(1, 0.25) == 16  # exact division stays exact
        assert build_domain(1, 0.45) == 5
        with pytest.raises(InputError):
            build_domain(0, 0.1)

    def test_pool_size(self):
        assert default_hypothesis_count(9, 0.1) == 1464
        assert default_hypothesis_count(100, 0.05) == 19424

    def test_random_pool_is_signs(self):
        H = sample_hypotheses(7, 20, derive_rng(0, "test.pool"))
        assert H.shape == (20, 7)
        assert set(np.unique(H)) <= {-1, 1}


class TestCertification:
    def test_full_pool_certifies_everything(self):
        rows = [np.array([(code >> i & 1) * 2 - 1 for i in range(3)],
                         dtype=np.int8) for code in range(8)]
        pool = [TableHypothesis(r) for r in rows]
        for code in range(8):
            cert = certify_concept(pool, rows[code], gamma=0.1)
            assert cert is not None
            assert cert.min_margin >= 0.2

    def test_hopeless_pool_returns_none(self):
        pool = [TableHypothesis(np.array([1, 1, 1, 1], dtype=np.int8))]
        labeling = np.array([1, -1, -1, -1], dtype=np.int8)
        assert certify_concept(pool, labeling, gamma=0.1) is None

    def test_instance_certificates_meet_double_margin(self):
        inst = _small_instance()
        assert len(inst.concepts) > 0
        assert all(c.min_margin >= 2 * inst.gamma for c in inst.certificates)
        assert inst.hyp_matrix.shape == (64, 5)
        assert inst.x1_mass == 1 - 4 / 24

    def test_instance_from_d(self):
        # u = ceil(c_u d / gamma^2) = ceil(0.05 / 0.01) = 5
        inst = build_instance(gamma=0.1, m=6, d=1, c_u=0.05, n_hyps=64, seed=1)
        assert inst.u == 5

    def test_enumeration_guard(self):
        with pytest.raises(InputError):
            build_instance(gamma=0.1, m=100, u=40, n_hyps=8, seed=0)


class TestWeakLearner:
    def test_edge_meets_double_gamma_on_random_weights(self):
        inst = _small_instance()
        rng = derive_rng(0, "test.weights")
        for _ in range(40):
            w = rng.dirichlet(np.ones(inst.u))
            ci = int(rng.integers(len(inst.concepts)))
            h, edge = hard_weak_learner(inst, ci, w)
            concept = inst.concepts[ci]
            assert edge >= 2 * inst.gamma
            assert edge == pytest.approx(float(np.sum(w * concept * h.signs)),
                                         abs=1e-12)

    def test_weight_validation(self):
        inst = _small_instance()
        with pytest.raises(InputError):
            hard_weak_learner(inst, 0, np.full(3, 1 / 3))
        with pytest.raises(InputError):
            hard_weak_learner(inst, 0, np.full(5, 0.3))
        bad = np.array([0.5, 0.7, -0.2, 0.0, 0.0])
        with pytest.raises(InputError):
            hard_weak_learner(inst, 0, bad)


class TestBayesFloor:
    def test_rows_schema_and_determinism(self):
        inst = _small_instance()
        res = bayes_floor(inst, m=6, trials=50, seed=3)
        again = bayes_floor(inst, m=6, trials=50, seed=3)
        assert res.rows == again.rows
        assert res.m == 6
        assert len(res.rows) == 50
        for trial, m, err, post, seen in res.rows:
            assert m == 6
            assert 0.0 <= err <= 1.0
            assert post >= 1  # the target is always consistent with itself
            assert 1 <= seen <= 5
        assert res.mean_error == pytest.approx(
            np.mean([r[2] for r in res.rows]))
        assert res.q23_error == pytest.approx(
            np.quantile([r[2] for r in res.rows], 2 / 3))

    def test_floor_shrinks_with_more_data(self):
        inst = _small_instance()
        small = bayes_floor(inst, m=6, trials=120, seed=0)
        big = bayes_floor(inst, m=120, trials=120, seed=0)
        assert big.mean_error < small.mean_error

    def test_errors_are_exact_point_masses(self):
        # every point mass is a multiple of 1/(4m), so the exact error is too
        inst = _small_instance()
        for m in (6, 30):
            res = bayes_floor(inst, m=m, trials=60, seed=1)
            for _, _, err, _, _ in res.rows:
                scaled = err * 4 * m
                assert abs(scaled - round(scaled)) < 1e-9
                assert 0 <= round(scaled) <= 4 * m


def test_gamma_range_warning():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        with pytest.raises(UserWarning):
            build_domain(1, 0.25)
