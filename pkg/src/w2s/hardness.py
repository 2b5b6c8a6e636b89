"""The hard instance family behind the sample-complexity floor.

A domain of u points carries the skewed distribution D(x1) = 1 - (u-1)/(4m),
D(xi) = 1/(4m) for i >= 2. Concepts are labelings certified weakly learnable:
a labeling is kept only if boosting finds a voter over the random hypothesis
pool with minimum margin 2*gamma on the whole domain, which by convexity hands
any reweighting a single pool hypothesis with edge at least 2*gamma. The
Bayes floor then measures the best possible error of any learner that sees m
points from D, by exact posterior majority over the certified concepts.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .boost import adaboost_star_nu
from .core import Dataset, TableHypothesis, VotingClassifier, min_margin
from .errors import ContractViolationError, InputError
from .rng import derive_rng
from .weak import ExhaustiveLearner

ENUMERATION_LIMIT = 14  # 2^u labelings are enumerated; keep u desk-scale


def build_domain(d, gamma, c_u=1.0):
    """Domain size u = max(2, ceil(c_u * d / gamma^2)), guarded against float roundup."""
    if d < 1:
        raise InputError("d must be positive")
    _check_gamma(gamma)
    x = c_u * d / (gamma * gamma)
    return max(2, math.ceil(x - 1e-9))


def _check_gamma(gamma):
    if not 0.0 < gamma < 0.5:
        raise InputError("gamma must be in (0, 1/2)")
    if gamma >= 1.0 / 80.0:
        warnings.warn("gamma >= 1/80 is outside the floor's proven range; "
                      "fine for desk-scale runs", stacklevel=3)


def default_hypothesis_count(u, gamma, c_n=1.0, delta=0.5):
    """Pool size N = ceil(c_n * g^-2 ln(u) ln(g^-2 ln(u) / delta) e^(g^2 u))."""
    g2 = gamma * gamma
    inner = math.log(u) / g2
    return math.ceil(c_n * inner * math.log(inner / delta) * math.exp(g2 * u))


def sample_hypotheses(u, count, rng):
    """count uniform random sign tables over a u-point domain."""
    if count < 1 or u < 1:
        raise InputError("u and count must be positive")
    return (rng.integers(0, 2, size=(count, u)) * 2 - 1).astype(np.int8)


def hard_distribution(u, m):
    """Point masses: all but (u-1)/(4m) on x1, the rest uniform on x2..xu."""
    if u < 2:
        raise InputError("u must be at least 2")
    if 4 * m < u - 1:
        raise InputError(f"need m >= (u-1)/4 = {(u - 1) / 4}")
    masses = np.full(u, 1.0 / (4.0 * m))
    masses[0] = 1.0 - (u - 1) / (4.0 * m)
    return masses


@dataclass(frozen=True)
class Certificate:
    voter: object
    min_margin: float


def certify_concept(hypotheses, labeling, gamma, nu=None):
    """Certificate that `labeling` is weakly learnable over the pool, or None.

    Boosts toward margin 2*gamma + nu - nu = 2*gamma over the uniform domain
    and re-verifies the margin by direct scan; any shortfall rejects the
    labeling (rejection is a value, not an error).
    """
    _check_gamma(gamma)
    nu = gamma / 2.0 if nu is None else nu
    target = 2.0 * gamma + nu
    if not target < 0.5:
        raise InputError("certification needs 2*gamma + nu < 1/2")
    u = len(labeling)
    ds = Dataset.from_domain(np.arange(u), labeling, u)
    try:
        voter = adaboost_star_nu(ds, ExhaustiveLearner(hypotheses), target, nu)
    except ContractViolationError:
        return None
    lo = min_margin(voter, ds)
    if lo < 2.0 * gamma:
        return None
    return Certificate(voter=voter, min_margin=lo)


@dataclass(frozen=True)
class HardInstance:
    u: int
    gamma: float
    m: int
    hyp_matrix: np.ndarray
    hypotheses: tuple
    concepts: tuple
    certificates: tuple

    @property
    def x1_mass(self):
        return float(hard_distribution(self.u, self.m)[0])

    @property
    def concept_matrix(self):
        return np.stack(self.concepts)


def build_instance(gamma, m, u=None, d=None, c_u=1.0, n_hyps=None, seed=0,
                   nu=None):
    """Sample a hypothesis pool and certify every labeling of the domain."""
    if u is None:
        if d is None:
            raise InputError("give u directly or d (with c_u) to derive it")
        u = build_domain(d, gamma, c_u)
    else:
        _check_gamma(gamma)
    if u > ENUMERATION_LIMIT:
        raise InputError(f"u={u} too large to enumerate 2^u labelings "
                         f"(limit {ENUMERATION_LIMIT})")
    hard_distribution(u, m)  # validates m against u
    if n_hyps is None:
        n_hyps = default_hypothesis_count(u, gamma)
    H = sample_hypotheses(u, n_hyps, derive_rng(seed, "hardness.pool"))
    hypotheses = tuple(TableHypothesis(row) for row in H)

    # most labelings appear verbatim in the pool: certificate is that single
    # hypothesis with margin 1, no boosting needed
    row_index = {row.tobytes(): i for i, row in enumerate(H)}
    concepts, certificates = [], []
    for code in range(2 ** u):
        labeling = np.array([1 if code >> i & 1 else -1 for i in range(u)],
                            dtype=np.int8)
        hit = row_index.get(labeling.tobytes())
        if hit is not None:
            cert = Certificate(VotingClassifier([1.0], [hypotheses[hit]]), 1.0)
        else:
            cert = certify_concept(hypotheses, labeling, gamma, nu)
        if cert is not None:
            labeling.setflags(write=False)
            concepts.append(labeling)
            certificates.append(cert)
    if not concepts:
        raise InputError("no certifiable labelings; increase n_hyps or gamma")
    return HardInstance(u=u, gamma=gamma, m=int(m), hyp_matrix=H,
                        hypotheses=hypotheses, concepts=tuple(concepts),
                        certificates=tuple(certificates))


def sample_hard_points(u, m, count, rng):
    return rng.choice(u, size=count, p=hard_distribution(u, m))


def hard_weak_learner(instance, concept_index, weights):
    """Best hypothesis from the certificate's support; edge >= 2*gamma always.

    weights is a distribution over the domain points; the returned edge is
    sum_x w(x) c(x) h(x), and convexity of the certificate's margins >= 2*gamma
    guarantees the maximum meets 2*gamma.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (instance.u,) or np.any(w < 0):
        raise InputError("weights must be a nonnegative vector over the domain")
    total = np.cumsum(w)[-1]
    if abs(total - 1.0) > 1e-9:
        raise InputError("weights must sum to 1")
    cert = instance.certificates[concept_index]
    concept = instance.concepts[concept_index]
    support = cert.voter.hypotheses
    V = np.stack([h.signs for h in support])
    edges = np.cumsum(V * (w * concept), axis=1)[:, -1]
    i = int(np.argmax(edges))
    return support[i], float(edges[i])


@dataclass(frozen=True)
class FloorResult:
    m: int
    rows: tuple  # (trial, m, error_exact, posterior_size, seen_points)
    mean_error: float
    q23_error: float


def bayes_floor(instance, m, trials, seed):
    """Exact error of the posterior-majority predictor over `trials` draws.

    Each trial draws a certified concept uniformly, samples m points from the
    hard distribution (with this call's m), keeps the concepts consistent with
    the labeled sample, predicts the pointwise sign-majority of that posterior
    (ties to +1), and integrates the error exactly under D.
    """
    masses = hard_distribution(instance.u, m)
    C = instance.concept_matrix
    rows = []
    errors = np.empty(trials)
    for trial in range(trials):
        rng = derive_rng(seed, "hardness.trial", trial)
        target_i = int(rng.integers(len(C)))
        target = C[target_i]
        seen = np.unique(rng.choice(instance.u, size=m, p=masses))
        posterior = C[np.all(C[:, seen] == target[seen], axis=1)]
        pred = np.where(posterior.sum(axis=0) >= 0, 1, -1)
        err = float(masses[pred != target].sum())
        rows.append((trial, m, err, len(posterior), len(seen)))
        errors[trial] = err
    return FloorResult(m=int(m), rows=tuple(rows),
                       mean_error=float(errors.mean()),
                       q23_error=float(np.quantile(errors, 2.0 / 3.0)))
