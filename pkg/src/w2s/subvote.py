"""Sub-voter distributions and their tail bounds.

A sub-voter g of a voting classifier f with budget t draws t hypotheses
i.i.d. by f's weights, discards each independently with probability 1/2, and
averages the survivors uniformly. Zero survivors give the canonical zero
voter, which always counts as an error and as "small".

At one fixed point x the randomness collapses to counts: with
p = (1 + f(x))/2, draw n_plus ~ Bin(t, p), then sp ~ Bin(n_plus, 1/2) and
sm ~ Bin(t - n_plus, 1/2); g(x) = (sp - sm)/(sp + sm). Every estimator here
evaluates each fresh g at exactly one point, so sampling (sp, sm) directly is
distribution-exact and turns 10^6-trial runs into a handful of vector draws.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import VotingClassifier, ZeroVoter, zero_one_loss, min_margin
from .errors import InputError
from .rng import derive_rng


@dataclass(frozen=True)
class SubVoteParams:
    t: int
    mu: float = 0.0
    trials: int = 100000
    seed: int = 0

    def __post_init__(self):
        if self.t < 1:
            raise InputError("t must be positive")
        if self.trials < 1:
            raise InputError("trials must be positive")
        if self.mu < 0:
            raise InputError("mu must be nonnegative")


def sample_g(f, t, rng):
    """One literal sub-voter of f with budget t."""
    if t < 1:
        raise InputError("t must be positive")
    picks = rng.choice(len(f.weights), size=t, p=f.weights)
    kept = picks[rng.random(t) < 0.5]
    if len(kept) == 0:
        return ZeroVoter()
    return VotingClassifier(np.full(len(kept), 1.0 / len(kept)),
                            [f.hypothesis_at(int(i)) for i in kept])


def plus_probability(fx):
    """P[a single weighted draw from f outputs +1 at x], from f(x)."""
    return (1.0 + fx) / 2.0


def signed_survivor_counts(p_plus, t, trials, rng):
    """(sp, sm) arrays: surviving +1 and -1 counts of `trials` fresh sub-voters."""
    n_plus = rng.binomial(t, p_plus, size=trials)
    sp = rng.binomial(n_plus, 0.5)
    sm = rng.binomial(t - n_plus, 0.5)
    return sp, sm


def g_values(sp, sm):
    """Sub-voter outputs from survivor counts; zero voter evaluates to 0."""
    kept = sp + sm
    return np.where(kept > 0, (sp - sm) / np.maximum(kept, 1), 0.0)


@dataclass(frozen=True)
class LtEstimate:
    estimate: float
    stderr: float
    trials: int
    errors: int


def estimate_Lt(f, dataset, t, trials, rng, weights=None):
    """Monte-Carlo estimate of L^t_D(f) = P_{x, g}[y g(x) <= 0] under D."""
    if trials < 1:
        raise InputError("trials must be positive")
    fx = f.evaluate_batch(dataset)
    if weights is None:
        idx = rng.integers(len(dataset), size=trials)
    else:
        w = np.asarray(weights, dtype=np.float64)
        idx = rng.choice(len(dataset), size=trials, p=w / w.sum())
    p = plus_probability(fx[idx])
    y = dataset.labels[idx]
    sp, sm = signed_survivor_counts(p, t, trials, rng)
    wrong = y * (sp.astype(np.int64) - sm) <= 0
    errors = int(np.count_nonzero(wrong))
    est = errors / trials
    return LtEstimate(est, math.sqrt(est * (1.0 - est) / trials), trials, errors)


# --- exact small-t reference -----------------------------------------------------


def exact_count_distribution(p_plus, t):
    """Exact law of (sp, sm) as Fractions; p_plus is taken exactly as given."""
    p = Fraction(p_plus)
    if not 0 <= p <= 1:
        raise InputError("p_plus must be in [0, 1]")
    q = 1 - p
    out = {}
    half_t = Fraction(1, 2 ** t)
    for n_plus in range(t + 1):
        pn = math.comb(t, n_plus) * p ** n_plus * q ** (t - n_plus)
        if pn == 0:
            continue
        for sp in range(n_plus + 1):
            c_sp = math.comb(n_plus, sp)
            for sm in range(t - n_plus + 1):
                prob = pn * c_sp * math.comb(t - n_plus, sm) * half_t
                out[(sp, sm)] = out.get((sp, sm), Fraction(0)) + prob
    return out


def exact_event_probability(p_plus, t, event):
    """Exact probability of event(sp, sm) under the sub-voter count law."""
    total = Fraction(0)
    for (sp, sm), prob in exact_count_distribution(p_plus, t).items():
        if event(sp, sm):
            total += prob
    return total


def exact_error_probability(p_plus, y, t):
    return exact_event_probability(p_plus, t, lambda sp, sm: y * (sp - sm) <= 0)


def central_collision_bound_holds(t):
    """Exact integer check that t * C(t, floor(t/2))^2 <= 4^t."""
    c = math.comb(t, t // 2)
    return t * c * c <= 4 ** t


# --- lemma-style verifications --------------------------------------------------


@dataclass(frozen=True)
class LemmaReport:
    lemma: int
    params: dict
    empirical: float
    bound: float
    stderr: float
    passed: bool
    vacuous: bool

    def to_json(self):
        return {"lemma": self.lemma, "params": self.params,
                "empirical": self.empirical, "bound": self.bound,
                "stderr": self.stderr, "pass": self.passed,
                "vacuous": self.vacuous}


def _mc_event_probability(fx, t, trials, rng, event):
    p = plus_probability(fx)
    sp, sm = signed_survivor_counts(p, t, trials, rng)
    hits = int(np.count_nonzero(event(sp.astype(np.int64), sm.astype(np.int64))))
    est = hits / trials
    return est, math.sqrt(est * (1.0 - est) / trials)


def verify_deviation_tail(f, x, t, mu, trials, seed):
    """P[|f(x) - g(x)| >= mu] against the 5 exp(-mu^2 t / 32) tail."""
    if t < 1 or trials < 1 or mu <= 0:
        raise InputError("need t >= 1, trials >= 1, mu > 0")
    fx = float(f.evaluate(x))
    rng = derive_rng(seed, "subvote.deviation")
    p = plus_probability(fx)
    sp, sm = signed_survivor_counts(p, t, trials, rng)
    est = float(np.mean(np.abs(fx - g_values(sp, sm)) >= mu))
    stderr = math.sqrt(est * (1.0 - est) / trials)
    bound = 5.0 * math.exp(-mu * mu * t / 32.0)
    return LemmaReport(7, {"t": t, "mu": mu, "trials": trials, "seed": seed,
                           "fx": fx},
                       est, bound, stderr,
                       passed=est <= bound + 3.0 * stderr, vacuous=bound >= 1.0)


def verify_smallness_tail(f, x, t, mu, trials, seed):
    """P[|g(x)| <= mu] against the 2 mu sqrt(t) anti-concentration bound."""
    if t < 1 or trials < 1:
        raise InputError("need t >= 1 and trials >= 1")
    if mu < 1.0 / t:
        raise InputError(f"bound needs mu >= 1/t = {1.0 / t}")
    fx = float(f.evaluate(x))
    rng = derive_rng(seed, "subvote.smallness")
    est, stderr = _mc_event_probability(
        np.float64(fx), t, trials, rng,
        lambda sp, sm: np.abs(sp - sm) <= mu * (sp + sm))
    bound = 2.0 * mu * math.sqrt(t)
    return LemmaReport(8, {"t": t, "mu": mu, "trials": trials, "seed": seed,
                           "fx": fx},
                       est, bound, stderr,
                       passed=est <= bound + 3.0 * stderr, vacuous=bound >= 1.0)


def verify_loss_sandwich(f, dataset, t, trials, seed, weights=None):
    """Exact L_D(f) against 3 * (estimated L^t_D(f) + 3 stderr); needs t >= 36."""
    if t < 36:
        raise InputError("the sandwich needs t >= 36")
    rng = derive_rng(seed, "subvote.sandwich")
    exact = zero_one_loss(f, dataset, weights)
    lt = estimate_Lt(f, dataset, t, trials, rng, weights=weights)
    bound = 3.0 * (lt.estimate + 3.0 * lt.stderr)
    return LemmaReport(9, {"t": t, "trials": trials, "seed": seed},
                       exact, bound, lt.stderr,
                       passed=exact <= bound, vacuous=bound >= 1.0)


def verify_margin_loss(f, dataset, gamma, t=None, trials=100000, seed=0):
    """L^t_S(f) <= 1/1200 when f has min margin gamma on S and t >= 1024/gamma^2."""
    if not 0.0 < gamma <= 1.0:
        raise InputError("gamma must be in (0, 1]")
    needed = 1024.0 / (gamma * gamma)
    if t is None:
        t = math.ceil(needed)
    if t < needed:
        raise InputError(f"need t >= 1024/gamma^2 = {needed}")
    lo = min_margin(f, dataset)
    if lo < gamma:
        raise InputError(f"f has min margin {lo} < gamma {gamma} on S")
    rng = derive_rng(seed, "subvote.marginloss")
    lt = estimate_Lt(f, dataset, t, trials, rng)
    bound = 1.0 / 1200.0
    return LemmaReport(10, {"t": t, "gamma": gamma, "trials": trials,
                            "seed": seed, "min_margin": lo},
                       lt.estimate, bound, lt.stderr,
                       passed=lt.estimate <= bound + 3.0 * lt.stderr, vacuous=False)
