"""Shared types: datasets, hypotheses, voting classifiers, margins, losses.

Sign conventions used throughout: labels and hypothesis outputs live in
{-1, +1}; real-valued scores are error-on-zero under the 0/1 loss (a score of
exactly 0 counts as a mistake), while exported hard labels map 0 to +1.
"""

import csv
from typing import NamedTuple

import numpy as np

from .errors import InputError

WEIGHT_TOL = 1e-9


def _check_labels(y):
    y = np.asarray(y)
    if y.ndim != 1 or y.size == 0:
        raise InputError("labels must be a nonempty 1-d array")
    if not np.all(np.isin(y, (-1, 1))):
        raise InputError("labels must be -1 or +1")
    return y.astype(np.int8)


class LabeledSample(NamedTuple):
    point: object
    label: int


class Dataset:
    """Labeled sample, either feature vectors or indices into a finite domain."""

    def __init__(self, kind, points, labels, domain_size=None):
        if kind not in ("features", "domain"):
            raise InputError(f"unknown dataset kind {kind!r}")
        self.kind = kind
        self.labels = _check_labels(labels)
        if kind == "features":
            X = np.asarray(points, dtype=np.float64)
            if X.ndim != 2 or X.shape[0] != len(self.labels):
                raise InputError("points must be (m, F) with one row per label")
            if not np.all(np.isfinite(X)):
                raise InputError("points must be finite")
            self.points = X
            self.domain_size = None
        else:
            idx = np.asarray(points)
            if idx.ndim != 1 or idx.shape[0] != len(self.labels):
                raise InputError("indices must be 1-d with one entry per label")
            if domain_size is None or domain_size < 1:
                raise InputError("finite-domain datasets need a positive domain_size")
            if idx.min() < 0 or idx.max() >= domain_size:
                raise InputError("domain indices out of range")
            self.points = idx.astype(np.int64)
            self.domain_size = int(domain_size)
        self.points.setflags(write=False)
        self.labels.setflags(write=False)

    @classmethod
    def from_features(cls, X, y):
        return cls("features", X, y)

    @classmethod
    def from_domain(cls, indices, y, domain_size):
        return cls("domain", indices, y, domain_size=domain_size)

    @property
    def feature_count(self):
        if self.kind != "features":
            raise InputError("feature_count is only defined for feature datasets")
        return self.points.shape[1]

    def __len__(self):
        return len(self.labels)

    def __getitem__(self, i):
        return LabeledSample(self.points[i], int(self.labels[i]))

    def subset(self, indices):
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(self.kind, self.points[indices], self.labels[indices],
                       domain_size=self.domain_size)


class Stump:
    """Threshold hypothesis on one feature: polarity if x[feature] > threshold."""

    __slots__ = ("feature", "threshold", "polarity")

    def __init__(self, feature, threshold, polarity):
        if polarity not in (-1, 1):
            raise InputError("polarity must be -1 or +1")
        self.feature = int(feature)
        self.threshold = float(threshold)
        self.polarity = int(polarity)

    def evaluate(self, x):
        return self.polarity if x[self.feature] > self.threshold else -self.polarity

    def evaluate_batch(self, dataset):
        if dataset.kind != "features":
            raise InputError("stumps need feature vectors")
        col = dataset.points[:, self.feature]
        return np.where(col > self.threshold, self.polarity, -self.polarity).astype(np.int8)

    def to_json(self):
        return {"kind": "stump", "feature": self.feature,
                "threshold": self.threshold, "polarity": self.polarity}

    def __eq__(self, other):
        return (isinstance(other, Stump) and self.feature == other.feature
                and self.threshold == other.threshold and self.polarity == other.polarity)

    def __repr__(self):
        return f"Stump({self.feature}, {self.threshold!r}, {self.polarity:+d})"


class TableHypothesis:
    """Explicit sign table over a finite domain."""

    __slots__ = ("signs",)

    def __init__(self, signs):
        signs = np.asarray(signs)
        if signs.ndim != 1 or not np.all(np.isin(signs, (-1, 1))):
            raise InputError("a sign table must be a 1-d array over {-1, +1}")
        self.signs = signs.astype(np.int8)
        self.signs.setflags(write=False)

    def evaluate(self, x):
        return int(self.signs[int(x)])

    def evaluate_batch(self, dataset):
        if dataset.kind != "domain":
            raise InputError("sign tables need finite-domain indices")
        if dataset.domain_size > len(self.signs):
            raise InputError("sign table smaller than the dataset's domain")
        return self.signs[dataset.points]

    def to_json(self):
        return {"kind": "table", "signs": [int(s) for s in self.signs]}

    def __eq__(self, other):
        return isinstance(other, TableHypothesis) and np.array_equal(self.signs, other.signs)

    def __repr__(self):
        return f"TableHypothesis({self.signs.tolist()})"


class ConstantHypothesis:
    """Always predicts the same sign."""

    __slots__ = ("sign",)

    def __init__(self, sign):
        if sign not in (-1, 1):
            raise InputError("sign must be -1 or +1")
        self.sign = int(sign)

    def evaluate(self, x):
        return self.sign

    def evaluate_batch(self, dataset):
        return np.full(len(dataset), self.sign, dtype=np.int8)

    def to_json(self):
        return {"kind": "constant", "sign": self.sign}

    def __eq__(self, other):
        return isinstance(other, ConstantHypothesis) and self.sign == other.sign

    def __repr__(self):
        return f"ConstantHypothesis({self.sign:+d})"


def hypothesis_from_json(d):
    kind = d.get("kind")
    if kind == "stump":
        return Stump(d["feature"], d["threshold"], d["polarity"])
    if kind == "table":
        return TableHypothesis(d["signs"])
    if kind == "constant":
        return ConstantHypothesis(d["sign"])
    raise InputError(f"unknown hypothesis kind {kind!r}")


class SampleDistribution:
    """Probability weights over the indices of a sample."""

    def __init__(self, weights):
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or w.size == 0:
            raise InputError("weights must be a nonempty 1-d array")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise InputError("weights must be finite and nonnegative")
        total = w.sum()
        if abs(total - 1.0) > WEIGHT_TOL:
            raise InputError(f"weights must sum to 1 within {WEIGHT_TOL}, got {total!r}")
        self.w = w / total
        self.w.setflags(write=False)

    @classmethod
    def uniform(cls, m):
        if m < 1:
            raise InputError("need at least one sample")
        return cls(np.full(m, 1.0 / m))

    def __len__(self):
        return len(self.w)


class VotingClassifier:
    """Convex combination of hypotheses; evaluates into [-1, 1].

    Large voters produced by boosting keep their terms in columnar arrays
    (one entry per round) instead of per-term objects; `hypotheses` then
    materializes objects on demand.
    """

    def __init__(self, weights, hypotheses, _block=None):
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or w.size == 0:
            raise InputError("a voter needs at least one term")
        if np.any(w <= 0) or not np.all(np.isfinite(w)):
            raise InputError("term weights must be positive and finite")
        total = w.sum()
        if abs(total - 1.0) > WEIGHT_TOL:
            raise InputError(f"term weights must sum to 1 within {WEIGHT_TOL}, got {total!r}")
        self.weights = w / total
        self.weights.setflags(write=False)
        self._block = _block
        if _block is None:
            hyps = tuple(hypotheses)
            if len(hyps) != len(w):
                raise InputError("one hypothesis per weight")
            self._hypotheses = hyps
        else:
            self._hypotheses = None

    # --- columnar constructors -------------------------------------------

    @classmethod
    def from_stump_arrays(cls, weights, features, thresholds, polarities):
        features = np.asarray(features, dtype=np.int64)
        thresholds = np.asarray(thresholds, dtype=np.float64)
        polarities = np.asarray(polarities, dtype=np.int8)
        if not (len(features) == len(thresholds) == len(polarities) == len(weights)):
            raise InputError("stump arrays must share one length")
        return cls(weights, None, _block=("stumps", features, thresholds, polarities))

    @classmethod
    def from_table_rows(cls, weights, table, rows):
        table = np.asarray(table, dtype=np.int8)
        rows = np.asarray(rows, dtype=np.int64)
        if len(rows) != len(weights):
            raise InputError("one table row per weight")
        return cls(weights, None, _block=("table", table, rows))

    # --- term access -------------------------------------------------------

    def __len__(self):
        return len(self.weights)

    def hypothesis_at(self, i):
        if self._block is None:
            return self._hypotheses[i]
        if self._block[0] == "stumps":
            _, feats, thrs, pols = self._block
            return Stump(feats[i], thrs[i], pols[i])
        _, table, rows = self._block
        return TableHypothesis(table[rows[i]])

    @property
    def hypotheses(self):
        if self._hypotheses is None:
            return tuple(self.hypothesis_at(i) for i in range(len(self)))
        return self._hypotheses

    def terms(self):
        for i in range(len(self)):
            yield float(self.weights[i]), self.hypothesis_at(i)

    # --- evaluation ----------------------------------------------------------

    def evaluate(self, x):
        return sum(w * h.evaluate(x) for w, h in self.terms())

    def evaluate_batch(self, dataset):
        if self._block is not None and self._block[0] == "stumps":
            return self._stump_block_eval(dataset)
        if self._block is not None and self._block[0] == "table":
            return self._table_block_eval(dataset)
        score = np.zeros(len(dataset))
        for i in range(len(self)):
            score += self.weights[i] * self._hypotheses[i].evaluate_batch(dataset)
        return score

    def _stump_block_eval(self, dataset):
        if dataset.kind != "features":
            raise InputError("stumps need feature vectors")
        _, feats, thrs, pols = self._block
        X = dataset.points
        score = np.zeros(len(dataset))
        # per feature: sort terms by threshold, prefix-sum the signed weights,
        # then one searchsorted per feature instead of one pass per term
        for f in np.unique(feats):
            sel = feats == f
            signed = self.weights[sel] * pols[sel]
            order = np.argsort(thrs[sel], kind="stable")
            t_sorted = thrs[sel][order]
            prefix = np.concatenate(([0.0], np.cumsum(signed[order])))
            pos = np.searchsorted(t_sorted, X[:, f], side="left")
            score += 2.0 * prefix[pos] - prefix[-1]
        return score

    def _table_block_eval(self, dataset):
        if dataset.kind != "domain":
            raise InputError("sign tables need finite-domain indices")
        _, table, rows = self._block
        row_weight = np.zeros(table.shape[0])
        np.add.at(row_weight, rows, self.weights)
        domain_score = (row_weight[:, None] * table).sum(axis=0)
        return domain_score[dataset.points]

    # --- serialization ---------------------------------------------------------

    def to_json(self):
        return {"terms": [{"weight": w, "hypothesis": h.to_json()} for w, h in self.terms()]}

    @classmethod
    def from_json(cls, d):
        terms = d["terms"]
        if not terms:
            return ZeroVoter()
        return cls([t["weight"] for t in terms],
                   [hypothesis_from_json(t["hypothesis"]) for t in terms])


class ZeroVoter:
    """The empty voter: evaluates to 0 everywhere, so it is always an error."""

    def evaluate(self, x):
        return 0.0

    def evaluate_batch(self, dataset):
        return np.zeros(len(dataset))

    def __len__(self):
        return 0

    def to_json(self):
        return {"terms": []}


class MajorityOfMajorities:
    """Unweighted sign-majority over a list of voters."""

    def __init__(self, voters):
        self.voters = tuple(voters)
        if not self.voters:
            raise InputError("need at least one voter")

    def __len__(self):
        return len(self.voters)

    def evaluate(self, x):
        return sum(int(np.sign(v.evaluate(x))) for v in self.voters)

    def evaluate_batch(self, dataset):
        raw = np.zeros(len(dataset), dtype=np.int64)
        for v in self.voters:
            raw += np.sign(v.evaluate_batch(dataset)).astype(np.int64)
        return raw

    def predict(self, x):
        return hard_label(self.evaluate(x))

    def to_json(self):
        return {"voters": [v.to_json() for v in self.voters]}

    @classmethod
    def from_json(cls, d):
        return cls([VotingClassifier.from_json(v) for v in d["voters"]])


# --- margins and loss ---------------------------------------------------------


def hard_label(score):
    """Exported hard prediction: -1 below zero, +1 otherwise."""
    return -1 if score < 0 else 1


def hard_labels(scores):
    return np.where(np.asarray(scores) < 0, -1, 1).astype(np.int8)


def margin(predictor, x, y):
    return y * predictor.evaluate(x)


def margins(predictor, dataset):
    return dataset.labels * predictor.evaluate_batch(dataset)


def min_margin(predictor, dataset):
    return float(margins(predictor, dataset).min())


def zero_one_loss(predictor, dataset, weights=None):
    """Fraction (or weight) of samples with y * score <= 0."""
    wrong = margins(predictor, dataset) <= 0
    if weights is None:
        return np.count_nonzero(wrong) / len(dataset)
    w = weights.w if isinstance(weights, SampleDistribution) else np.asarray(weights)
    return float(w[wrong].sum())


# --- dataset CSV ---------------------------------------------------------------


def save_dataset_csv(dataset, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if dataset.kind == "features":
            writer.writerow([f"f{j}" for j in range(dataset.feature_count)] + ["label"])
            for row, y in zip(dataset.points, dataset.labels):
                writer.writerow([repr(float(v)) for v in row] + [int(y)])
        else:
            writer.writerow(["index", "label"])
            for ix, y in zip(dataset.points, dataset.labels):
                writer.writerow([int(ix), int(y)])


def load_dataset_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty file") from None
        rows = list(reader)
    if not rows:
        raise InputError(f"{path}: no data rows")
    if header[-1] != "label":
        raise InputError(f"{path}: last column must be 'label'")
    if header[0] == "index" and len(header) == 2:
        idx = np.array([int(r[0]) for r in rows], dtype=np.int64)
        y = np.array([int(r[1]) for r in rows])
        return Dataset.from_domain(idx, y, domain_size=int(idx.max()) + 1)
    X = np.array([[float(v) for v in r[:-1]] for r in rows])
    y = np.array([int(r[-1]) for r in rows])
    return Dataset.from_features(X, y)
