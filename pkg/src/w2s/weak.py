"""Weak learners: threshold stumps, exhaustive search, and the calling contract."""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernel
from .core import SampleDistribution, Stump
from .errors import InputError, WeakLearnerError


@dataclass(frozen=True)
class WeakLearnerContract:
    """Promise a learner makes: edge >= gamma with failure probability delta0,
    given at least m0 samples. max_retries bounds the delta0 retry loop."""

    gamma: float
    delta0: float = 0.0
    m0: int = 1
    max_retries: int = 64

    def __post_init__(self):
        if not 0.0 < self.gamma < 0.5:
            raise InputError("gamma must be in (0, 1/2)")
        if not 0.0 <= self.delta0 < 1.0:
            raise InputError("delta0 must be in [0, 1)")
        if self.m0 < 1 or self.max_retries < 1:
            raise InputError("m0 and max_retries must be positive")


def _weight_vector(weights, m):
    w = weights.w if isinstance(weights, SampleDistribution) else np.asarray(weights, dtype=np.float64)
    if w.shape != (m,):
        raise InputError("need one weight per sample")
    return w


def weighted_edge(h, dataset, weights):
    """E_w[y * h(x)], summed in index order."""
    w = _weight_vector(weights, len(dataset))
    hv = h.evaluate_batch(dataset)
    return float(np.cumsum(w * dataset.labels * hv)[-1])


def _threshold_from_cut(xs_sorted, cut):
    n = len(xs_sorted)
    if cut == 0:
        return -math.inf
    if cut == n:
        return math.inf
    return (xs_sorted[cut - 1] + xs_sorted[cut]) * 0.5


def train_stump(dataset, weights):
    """Best decision stump under the weighted edge; deterministic.

    Ties break toward the lowest feature index, then the lowest threshold,
    then polarity +1. Returns (Stump, edge).
    """
    if dataset.kind != "features":
        raise InputError("stump training needs feature vectors")
    w = _weight_vector(weights, len(dataset))
    order, newval = _kernel.stump_precompute(dataset.points)
    sw = w * dataset.labels
    edge, j, cut, pol = _kernel.best_stump(sw, order, newval)
    xs = dataset.points[order[j], j]
    return Stump(j, _threshold_from_cut(xs, cut), pol), float(edge)


def train_exhaustive(hypotheses, dataset, weights):
    """Best hypothesis from an explicit finite class; first index wins ties."""
    hypotheses = list(hypotheses)
    if not hypotheses:
        raise InputError("empty hypothesis class")
    w = _weight_vector(weights, len(dataset))
    V = np.stack([h.evaluate_batch(dataset) for h in hypotheses])
    edges = np.cumsum(V * (w * dataset.labels), axis=1)[:, -1]
    i = int(np.argmax(edges))
    return hypotheses[i], float(edges[i])


class StumpLearner:
    """Deterministic weak learner over all decision stumps."""

    kind = "stump"

    def __call__(self, dataset, weights, rng=None):
        return train_stump(dataset, weights)


class ExhaustiveLearner:
    """Deterministic weak learner over an explicit hypothesis list."""

    kind = "exhaustive"

    def __init__(self, hypotheses):
        self.hypotheses = tuple(hypotheses)
        if not self.hypotheses:
            raise InputError("empty hypothesis class")
        self._matrix_cache = {}

    def prediction_matrix(self, dataset):
        key = id(dataset)
        if key not in self._matrix_cache:
            V = np.stack([h.evaluate_batch(dataset) for h in self.hypotheses])
            self._matrix_cache = {key: V}  # single entry; datasets are immutable
        return self._matrix_cache[key]

    def __call__(self, dataset, weights, rng=None):
        w = _weight_vector(weights, len(dataset))
        V = self.prediction_matrix(dataset)
        edges = np.cumsum(V * (w * dataset.labels), axis=1)[:, -1]
        i = int(np.argmax(edges))
        return self.hypotheses[i], float(edges[i])


def call_weak_learner(learner, dataset, weights, contract, rng=None):
    """Invoke learner until its measured edge meets the contract.

    A learner may return a hypothesis or a (hypothesis, edge) pair; the edge is
    always re-measured here. Returns (hypothesis, edge, attempts). Raises
    WeakLearnerError after max_retries misses.
    """
    if len(dataset) < contract.m0:
        raise InputError(f"contract needs m0={contract.m0} samples, got {len(dataset)}")
    best_edge = -math.inf
    attempts = 0
    for _ in range(contract.max_retries):
        out = learner(dataset, weights, rng)
        h = out[0] if isinstance(out, tuple) else out
        edge = weighted_edge(h, dataset, weights)
        attempts += 1
        if edge >= contract.gamma:
            return h, edge, attempts
        best_edge = max(best_edge, edge)
    raise WeakLearnerError(
        f"no edge >= {contract.gamma} after {attempts} calls (best {best_edge})",
        best_edge=best_edge, attempts=attempts)
