"""Experiment harness: synthetic concepts, learning curves, spot checks.

The synthetic family plants a stump voter f* and rejection-samples points
with |f*(x)| >= margin_floor, labeling by sign(f*). With floor 2*gamma the
best stump then has weighted edge at least 2*gamma under any reweighting, so
the planted concept is a genuine gamma-weak-learnable target with slack.
"""

import csv
import math
import os
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from .boost import adaboost, adaboost_star_nu
from .core import (Dataset, MajorityOfMajorities, TableHypothesis,
                   VotingClassifier, min_margin, zero_one_loss)
from .errors import GeneratorInfeasibleError, InputError, W2SError
from .hardness import sample_hypotheses
from .optimal import OptimalLearnerConfig, train_optimal
from .rng import derive_rng

PROBE_MIN_RATE = 1e-3
GEN_CHUNK = 10000


def _score_points(voter, X):
    dummy = Dataset.from_features(X, np.ones(len(X), dtype=np.int8))
    return voter.evaluate_batch(dummy)


@dataclass(frozen=True)
class SyntheticConcept:
    """Planted stump voter with a guaranteed margin floor on accepted points."""

    voter: VotingClassifier
    margin_floor: float
    feature_count: int

    def __post_init__(self):
        if not 0.0 < self.margin_floor <= 1.0:
            raise InputError("margin_floor must be in (0, 1]")


def _axis_flip_counts(X, labels):
    """Sign changes of the labels along each feature's sorted order."""
    out = []
    for f in range(X.shape[1]):
        o = np.argsort(X[:, f], kind="stable")
        ys = labels[o]
        out.append(int(np.count_nonzero(ys[1:] != ys[:-1])))
    return out


def random_concept(rng, feature_count=2, stump_count=5, margin_floor=0.2,
                   balance=0.2, min_flips=0, max_attempts=400):
    """Random planted concept whose accepted region is balanced and genuinely
    multi-dimensional.

    The margin band |f*| < floor that rejection removes can leave a label
    pattern a single threshold separates (one tall step swallows the rest),
    which a learner nails from two samples. Such draws are discarded: the
    accepted probe labels must flip at least min_flips times along every
    feature axis.
    """
    # spikier weights as the count grows, else sum-of-many-small-steps scores
    # concentrate near zero and nothing clears the floor
    alpha = min(1.0, 24.0 / stump_count)
    for _ in range(max_attempts):
        feats = rng.integers(0, feature_count, size=stump_count)
        thrs = rng.uniform(0.0, 1.0, size=stump_count)
        pols = rng.integers(0, 2, size=stump_count) * 2 - 1
        wts = rng.dirichlet(np.full(stump_count, alpha))
        voter = VotingClassifier.from_stump_arrays(wts, feats, thrs, pols)
        probe = rng.uniform(0.0, 1.0, size=(4096, feature_count))
        s = _score_points(voter, probe)
        ok = np.abs(s) >= margin_floor
        rate = np.mean(ok)
        if rate < 0.05:
            continue
        frac_plus = np.mean(s[ok] > 0)
        if min(frac_plus, 1.0 - frac_plus) < balance:
            continue
        if min_flips > 0:
            labels = np.where(s[ok] > 0, 1, -1)
            if min(_axis_flip_counts(probe[ok], labels)) < min_flips:
                continue
        return SyntheticConcept(voter, float(margin_floor), int(feature_count))
    raise GeneratorInfeasibleError(
        f"no balanced concept with floor {margin_floor} in {max_attempts} attempts")


def gen_dataset(concept, m, rng):
    """m points of the planted concept; rejection keeps |f*(x)| >= floor.

    Raises GeneratorInfeasibleError when the first 10^4 draws accept
    less than 0.1%.
    """
    if m < 1:
        raise InputError("m must be positive")
    xs, ys = [], []
    got = 0
    first = True
    while got < m:
        X = rng.uniform(0.0, 1.0, size=(GEN_CHUNK, concept.feature_count))
        s = _score_points(concept.voter, X)
        keep = np.abs(s) >= concept.margin_floor
        if first and np.count_nonzero(keep) < GEN_CHUNK * PROBE_MIN_RATE:
            raise GeneratorInfeasibleError(
                f"acceptance below {PROBE_MIN_RATE:%} on a {GEN_CHUNK}-draw probe")
        first = False
        xs.append(X[keep])
        ys.append(np.where(s[keep] > 0, 1, -1).astype(np.int8))
        got += len(xs[-1])
    X = np.concatenate(xs)[:m]
    y = np.concatenate(ys)[:m]
    return Dataset.from_features(X, y)


# --- experiment configuration ---------------------------------------------------

_KNOWN_ALGOS = ("optimal", "adaboost", "abstar")


@dataclass(frozen=True)
class ExperimentConfig:
    gamma: float
    nu: float = None
    m_grid: tuple = (64, 256, 1024, 4096)
    trials_per_m: int = 20
    algos: tuple = ("optimal",)
    seed: int = 0
    epsilon: float = None  # recorded targets, echoed into reports
    delta: float = None
    feature_count: int = 2
    # enough boundary steps that finite samples keep missing some cells;
    # a handful of stumps often collapses to one separating threshold
    stump_count: int = 96
    test_floor: int = 10000
    out_csv: str = "curve.csv"
    out_plot: str = None
    out_svg: str = None

    def __post_init__(self):
        if not 0.0 < self.gamma < 0.5:
            raise InputError("gamma must be in (0, 1/2)")
        if self.nu is not None and not 0.0 < self.nu <= self.gamma:
            raise InputError("nu must be in (0, gamma]")
        if not self.m_grid or any(m < 1 for m in self.m_grid):
            raise InputError("m_grid must be nonempty and positive")
        if list(self.m_grid) != sorted(self.m_grid):
            raise InputError("m_grid must be ascending")
        if self.trials_per_m < 1:
            raise InputError("trials_per_m must be positive")
        for a in self.algos:
            if a not in _KNOWN_ALGOS:
                raise InputError(f"unknown algo {a!r}; known: {_KNOWN_ALGOS}")
        object.__setattr__(self, "m_grid", tuple(int(m) for m in self.m_grid))
        object.__setattr__(self, "algos", tuple(self.algos))

    def to_json(self):
        return asdict(self)

    @classmethod
    def from_json(cls, d):
        d = dict(d)
        for key in ("m_grid", "algos"):
            if key in d and d[key] is not None:
                d[key] = tuple(d[key])
        return cls(**d)


# --- curve runner ---------------------------------------------------------------

CURVE_COLUMNS = ("algo", "m", "trial", "seed", "train_error", "test_error",
                 "min_margin", "k_subsamples", "wall_ms", "status")

# concepts a single threshold separates flatten the curve to zero error;
# the curve runner insists on multi-step structure along every axis
CURVE_MIN_FLIPS = 8


def _fit_one(algo, cfg, train, run_seed):
    if algo == "optimal":
        ocfg = OptimalLearnerConfig(gamma=cfg.gamma, nu=cfg.nu, seed=run_seed)
        model, info = train_optimal(train, ocfg, return_info=True)
        return model, info["min_margin"], info["plan"].k
    if algo == "abstar":
        voter, info = adaboost_star_nu(train, "stump", cfg.gamma, cfg.nu,
                                       return_info=True)
        return voter, info["min_margin"], ""
    voter, info = adaboost(train, "stump", gamma=cfg.gamma, return_info=True)
    return voter, info["min_margin"], ""


def run_curve(cfg, log=None):
    """All (algo, m, trial) cells of the experiment; returns the CSV rows.

    wall_ms is 0 unless W2S_TIMING=1, keeping same-seed reruns byte-identical;
    timings always go to the log stream (stderr by default).
    """
    log = sys.stderr if log is None else log
    timing = os.environ.get("W2S_TIMING") == "1"
    rows = []
    for mi, m in enumerate(cfg.m_grid):
        for trial in range(cfg.trials_per_m):
            concept = random_concept(
                derive_rng(cfg.seed, "curve.concept", trial),
                cfg.feature_count, cfg.stump_count, 2.0 * cfg.gamma,
                min_flips=CURVE_MIN_FLIPS)
            train = gen_dataset(concept, m,
                                derive_rng(cfg.seed, "curve.train", mi, trial))
            test = gen_dataset(concept, max(10 * m, cfg.test_floor),
                               derive_rng(cfg.seed, "curve.test", mi, trial))
            run_seed = int(derive_rng(cfg.seed, "curve.fit", mi, trial)
                           .integers(2 ** 62))
            for algo in cfg.algos:
                t0 = time.perf_counter()
                train_err = test_err = mm = ksub = ""
                try:
                    model, mm, ksub = _fit_one(algo, cfg, train, run_seed)
                    train_err = zero_one_loss(model, train)
                    test_err = zero_one_loss(model, test)
                    status = "ok"
                except W2SError as exc:
                    status = type(exc).__name__
                elapsed = (time.perf_counter() - t0) * 1000.0
                print(f"curve: algo={algo} m={m} trial={trial} "
                      f"test_error={test_err} [{elapsed:.0f} ms]", file=log)
                rows.append({"algo": algo, "m": m, "trial": trial,
                             "seed": cfg.seed, "train_error": train_err,
                             "test_error": test_err, "min_margin": mm,
                             "k_subsamples": ksub,
                             "wall_ms": elapsed if timing else 0,
                             "status": status})
    return rows


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_curve_csv(rows, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CURVE_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in CURVE_COLUMNS])


def aggregate_curve(rows):
    """Per (algo, m) mean/stderr of test error over ok trials, in stable order."""
    cells = {}
    order = []
    for row in rows:
        if row["status"] != "ok":
            continue
        key = (row["algo"], row["m"])
        if key not in cells:
            cells[key] = []
            order.append(key)
        cells[key].append(float(row["test_error"]))
    out = []
    for algo, m in order:
        errs = np.array(cells[(algo, m)])
        stderr = float(errs.std(ddof=1) / math.sqrt(len(errs))) if len(errs) > 1 else 0.0
        out.append({"algo": algo, "m": m, "mean_test_error": float(errs.mean()),
                    "stderr": stderr, "trials": len(errs)})
    return out


def write_plot_csv(aggregates, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["algo", "m", "mean_test_error", "stderr", "trials"])
        for a in aggregates:
            writer.writerow([a["algo"], a["m"], _fmt(a["mean_test_error"]),
                             _fmt(a["stderr"]), a["trials"]])


def fit_loglog_slope(ms, means):
    """Least-squares slope of log(mean error) against log(m)."""
    ms = np.asarray(ms, dtype=np.float64)
    means = np.asarray(means, dtype=np.float64)
    if np.any(means <= 0):
        raise InputError("slope needs positive mean errors")
    return float(np.polyfit(np.log(ms), np.log(means), 1)[0])


_SVG_COLORS = ("#1f77b4", "#d62728", "#2ca02c")


def write_curve_svg(aggregates, path):
    """Log-log mean test error against m, one polyline per algorithm."""
    width, height, pad = 640, 440, 60
    algos = []
    for a in aggregates:
        if a["algo"] not in algos:
            algos.append(a["algo"])
    ms = sorted({a["m"] for a in aggregates})
    errs = [max(a["mean_test_error"], 1e-5) for a in aggregates]
    lo_x, hi_x = math.log(min(ms)), math.log(max(ms))
    lo_y, hi_y = math.log(min(errs)), math.log(max(errs))
    if hi_x == lo_x:
        hi_x += 1.0
    if hi_y == lo_y:
        hi_y += 1.0

    def sx(m):
        return pad + (math.log(m) - lo_x) / (hi_x - lo_x) * (width - 2 * pad)

    def sy(e):
        e = max(e, 1e-5)
        return height - pad - (math.log(e) - lo_y) / (hi_y - lo_y) * (height - 2 * pad)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" viewBox="0 0 {width} {height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>',
             f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" '
             f'y2="{height - pad}" stroke="black"/>',
             f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" '
             f'stroke="black"/>']
    for m in ms:
        parts.append(f'<text x="{sx(m):.1f}" y="{height - pad + 18}" '
                     f'font-size="11" text-anchor="middle">m={m}</text>')
    parts.append(f'<text x="{width / 2:.1f}" y="{height - 12}" font-size="12" '
                 f'text-anchor="middle">training set size (log)</text>')
    parts.append(f'<text x="16" y="{height / 2:.1f}" font-size="12" '
                 f'text-anchor="middle" transform="rotate(-90 16 {height / 2:.1f})">'
                 f'mean test error (log)</text>')
    for ai, algo in enumerate(algos):
        pts = [(a["m"], a["mean_test_error"]) for a in aggregates if a["algo"] == algo]
        pts.sort()
        color = _SVG_COLORS[ai % len(_SVG_COLORS)]
        coords = " ".join(f"{sx(m):.1f},{sy(e):.1f}" for m, e in pts)
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                     f'stroke-width="2"/>')
        for m, e in pts:
            parts.append(f'<circle cx="{sx(m):.1f}" cy="{sy(e):.1f}" r="3" '
                         f'fill="{color}"/>')
        parts.append(f'<text x="{width - pad - 120}" y="{pad + 16 * (ai + 1)}" '
                     f'font-size="12" fill="{color}">{algo}</text>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


# --- spot check of the strong-learning bound -------------------------------------

ERROR_TARGET = 1.0 / 200.0


def spot_check_strong_bound(gamma, d_proxy, m_values, trials, seed,
                            feature_count=2, threshold_multiple=1.0, log=None):
    """Per-trial test error of a margin-gamma voter against the 1/200 target.

    Trains with gamma_param = min(2*gamma, 0.49), nu = gamma_param/2; a trial
    whose measured min margin misses gamma is marked invalid rather than
    failed, since margins >= 1/2 cannot be manufactured by boosting.
    """
    log = sys.stderr if log is None else log
    if not 0.0 < gamma <= 1.0:
        raise InputError("gamma must be in (0, 1]")
    gamma_param = min(2.0 * gamma, 0.49)
    nu = gamma_param / 2.0
    floor = min(max(gamma_param, gamma), 1.0)
    results = []
    for m in m_values:
        valid = invalid = passed = 0
        errs = []
        for trial in range(trials):
            concept = random_concept(
                derive_rng(seed, "t6.concept", m, trial), feature_count,
                max(1, d_proxy), floor)
            train = gen_dataset(concept, m, derive_rng(seed, "t6.train", m, trial))
            test = gen_dataset(concept, 100000, derive_rng(seed, "t6.test", m, trial))
            voter, info = adaboost_star_nu(train, "stump", gamma_param, nu,
                                           return_info=True)
            if info["min_margin"] < gamma:
                invalid += 1
                print(f"t6: m={m} trial={trial} invalid "
                      f"(margin {info['min_margin']:.4f} < {gamma})", file=log)
                continue
            err = zero_one_loss(voter, test)
            errs.append(err)
            valid += 1
            passed += err <= ERROR_TARGET
        results.append({
            "m": m, "valid_trials": valid, "invalid_trials": invalid,
            "pass_fraction": passed / valid if valid else None,
            "mean_test_error": float(np.mean(errs)) if errs else None,
            "below_threshold": m < threshold_multiple * d_proxy / (gamma * gamma)})
    return {"gamma": gamma, "d_proxy": d_proxy, "trials": trials, "seed": seed,
            "error_target": ERROR_TARGET, "threshold_multiple": threshold_multiple,
            "results": results}


# --- scenarios for the lemma verifier -------------------------------------------


def lemma_scenario_voter(seed, n_hyps=16, domain=32):
    """A mixed table voter and a probe point for the tail verifiers."""
    rng = derive_rng(seed, "lemma.voter")
    H = sample_hypotheses(domain, n_hyps, rng)
    f = VotingClassifier(np.full(n_hyps, 1.0 / n_hyps),
                         [TableHypothesis(row) for row in H])
    x = int(rng.integers(domain))
    return f, x


def lemma_scenario_distribution(seed, n_hyps=16, domain=32):
    """(f, D) pair for the loss sandwich: random voter, random labels."""
    f, _ = lemma_scenario_voter(seed, n_hyps, domain)
    rng = derive_rng(seed, "lemma.labels")
    labels = (rng.integers(0, 2, size=domain) * 2 - 1).astype(np.int8)
    ds = Dataset.from_domain(np.arange(domain), labels, domain)
    return f, ds


def lemma_scenario_margin(seed, gamma, m=200, stump_count=8):
    """(f, S) with min margin >= gamma by construction, for the margin-loss check.

    Boosting cannot guarantee margins at gamma >= 1/2, so f is the planted
    voter itself; the floor is re-verified by direct scan.
    """
    concept = random_concept(derive_rng(seed, "lemma.concept"), 2, stump_count,
                             gamma)
    ds = gen_dataset(concept, m, derive_rng(seed, "lemma.sample"))
    f = concept.voter
    lo = min_margin(f, ds)
    if lo < gamma:
        raise InputError(f"scenario produced margin {lo} < {gamma}")
    return f, ds


# --- model serialization ----------------------------------------------------------


def model_to_json(config, model):
    if isinstance(model, MajorityOfMajorities):
        voters = [v.to_json() for v in model.voters]
    else:
        voters = [model.to_json()]
    return {"config": config, "voters": voters}


def model_from_json(d):
    voters = [VotingClassifier.from_json(v) for v in d["voters"]]
    if len(voters) == 1:
        return voters[0]
    return MajorityOfMajorities(voters)
