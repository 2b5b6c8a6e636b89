"""Margin boosting.

adaboost_star_nu drives the weak learner toward a guaranteed minimum margin:
round t mixes in hypothesis h_t with

    alpha_t = atanh(edge_t) - atanh(rho_t),    rho_t = min_{r<=t} edge_r - nu,

and after T = ceil(2 ln(m) / nu^2) rounds every sample has margin at least
(min_t edge_t) - nu. adaboost is the classic exponential-weights baseline.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernel
from ._kernel import pure as _pure
from .core import SampleDistribution, VotingClassifier
from .errors import InputError, MarginShortfallError, WeakLearnerError
from .weak import (ExhaustiveLearner, StumpLearner, WeakLearnerContract,
                   call_weak_learner, weighted_edge)

EDGE_CLAMP = _pure.EDGE_CLAMP


def round_budget(m, nu):
    """Rounds needed to certify margins within nu of the worst edge."""
    if m < 1:
        raise InputError("m must be positive")
    if not 0.0 < nu < 1.0:
        raise InputError("nu must be in (0, 1)")
    return max(1, math.ceil(2.0 * math.log(m) / (nu * nu)))


@dataclass(frozen=True)
class BoostingState:
    """State after `rounds` boosting rounds."""

    rounds: int
    weights: SampleDistribution
    alphas: tuple
    edges: tuple
    gamma_min: float
    rho: float
    cum_margins: np.ndarray


def init_boosting(m):
    return BoostingState(rounds=0, weights=SampleDistribution.uniform(m),
                         alphas=(), edges=(), gamma_min=math.inf, rho=math.nan,
                         cum_margins=np.zeros(m))


def boosting_round(state, h, dataset, nu):
    """One update step; the kernels replay exactly this arithmetic."""
    edge = weighted_edge(h, dataset, state.weights)
    ecl = min(max(edge, -EDGE_CLAMP), EDGE_CLAMP)
    gamma_min = min(state.gamma_min, ecl)
    rho = gamma_min - nu
    if not -1.0 < rho < 1.0:
        raise InputError(f"margin target rho={rho} outside (-1, 1); check nu")
    alpha = _pure._atanh2(ecl) - _pure._atanh2(rho)
    hv = h.evaluate_batch(dataset).astype(np.float64)
    cum = state.cum_margins.copy()
    w = _pure._reweight(state.weights.w.copy(), hv,
                        dataset.labels.astype(np.float64), alpha, cum)
    cum.setflags(write=False)
    return BoostingState(rounds=state.rounds + 1, weights=SampleDistribution(w),
                         alphas=state.alphas + (alpha,), edges=state.edges + (edge,),
                         gamma_min=gamma_min, rho=rho, cum_margins=cum)


def _stump_thresholds(X, order, feats, cuts):
    n = X.shape[0]
    xs = np.take_along_axis(X.T, order, axis=1)
    lo = xs[feats, np.maximum(cuts - 1, 0)]
    hi = xs[feats, np.minimum(cuts, n - 1)]
    mid = (lo + hi) * 0.5
    return np.where(cuts == 0, -np.inf, np.where(cuts == n, np.inf, mid))


def _finalize(alphas, cum_margins, gamma, nu, make_voter, edges):
    alpha_sum = float(np.cumsum(alphas)[-1])
    margins = cum_margins / alpha_sum
    voter = make_voter(np.asarray(alphas) / alpha_sum)
    lo = float(margins.min())
    if lo < gamma - nu:
        raise MarginShortfallError(
            f"min margin {lo} below guarantee {gamma - nu} after {len(alphas)} rounds")
    info = {"rounds": len(alphas), "min_margin": lo, "margins": margins,
            "edges": np.asarray(edges)}
    return voter, info


def _shortfall(best_edge, gamma, rounds_done):
    return WeakLearnerError(
        f"round {rounds_done}: best edge {best_edge} < required gamma {gamma}",
        best_edge=best_edge, attempts=rounds_done + 1)


def adaboost_star_nu(dataset, learner, gamma, nu=None, max_rounds=None,
                     contract=None, rng=None, return_info=False):
    """Boost to a voter whose minimum margin is at least gamma - nu.

    learner may be "stump", a StumpLearner, an ExhaustiveLearner, or any
    callable (dataset, weights, rng) -> hypothesis; the built-ins run on the
    fast kernel. Raises WeakLearnerError if an edge ever falls below gamma and
    MarginShortfallError if the final margin misses the guarantee.
    """
    if not 0.0 < gamma < 0.5:
        raise InputError("gamma must be in (0, 1/2)")
    nu = gamma / 2.0 if nu is None else float(nu)
    if not 0.0 < nu <= gamma:
        raise InputError("nu must be in (0, gamma]")
    if learner == "stump":
        learner = StumpLearner()
    rounds = max_rounds if max_rounds is not None else round_budget(len(dataset), nu)
    if rounds < 1:
        raise InputError("max_rounds must be positive")
    y = dataset.labels.astype(np.float64)

    if isinstance(learner, StumpLearner) and dataset.kind == "features":
        X = dataset.points
        order, newval = _kernel.stump_precompute(X)
        status, feats, cuts, pols, alphas, edges, cum, best_edge = \
            _kernel.stump_boost_rounds(y, order, newval, gamma, nu, rounds)
        if status == _kernel.STATUS_SHORTFALL:
            raise _shortfall(best_edge, gamma, len(alphas))
        thr = _stump_thresholds(X, order, feats, cuts)
        voter, info = _finalize(
            alphas, cum, gamma, nu,
            lambda wts: VotingClassifier.from_stump_arrays(wts, feats, thr, pols),
            edges)
    elif isinstance(learner, ExhaustiveLearner):
        V = learner.prediction_matrix(dataset)
        status, rows, alphas, edges, cum, best_edge = \
            _kernel.table_boost_rounds(V, y, gamma, nu, rounds)
        if status == _kernel.STATUS_SHORTFALL:
            raise _shortfall(best_edge, gamma, len(alphas))
        hyps = [learner.hypotheses[int(r)] for r in rows]
        voter, info = _finalize(alphas, cum, gamma, nu,
                                lambda wts: VotingClassifier(wts, hyps), edges)
    else:
        voter, info = _abstar_generic(dataset, learner, gamma, nu, rounds,
                                      contract, rng)
    return (voter, info) if return_info else voter


def _abstar_generic(dataset, learner, gamma, nu, rounds, contract, rng):
    if contract is None:
        contract = WeakLearnerContract(gamma=gamma)
    elif contract.gamma != gamma:
        raise InputError("contract gamma must match the boosting gamma")
    state = init_boosting(len(dataset))
    hyps = []
    for _ in range(rounds):
        h, edge, _ = call_weak_learner(learner, dataset, state.weights, contract, rng)
        if edge >= EDGE_CLAMP and np.all(h.evaluate_batch(dataset) == dataset.labels):
            voter = VotingClassifier([1.0], [h])
            info = {"rounds": 1, "min_margin": 1.0,
                    "margins": np.ones(len(dataset)), "edges": np.array([edge])}
            return voter, info
        state = boosting_round(state, h, dataset, nu)
        hyps.append(h)
    return _finalize(np.array(state.alphas), state.cum_margins.copy(), gamma, nu,
                     lambda wts: VotingClassifier(wts, hyps), state.edges)


def adaboost(dataset, learner, rounds=None, gamma=None, rng=None, return_info=False):
    """Classic exponential-weights boosting baseline.

    Stops early on a perfect hypothesis (returned alone) or when the weak
    learner has no advantage (weighted error >= 1/2, i.e. edge <= 0).
    """
    if rounds is None:
        if gamma is None:
            raise InputError("need rounds or gamma to size the baseline budget")
        if not 0.0 < gamma < 0.5:
            raise InputError("gamma must be in (0, 1/2)")
        rounds = max(1, math.ceil(2.0 * math.log(len(dataset)) / (gamma * gamma)))
    if rounds < 1:
        raise InputError("rounds must be positive")
    if learner == "stump":
        learner = StumpLearner()
    use_kernel_scan = isinstance(learner, StumpLearner) and dataset.kind == "features"
    if use_kernel_scan:
        X = dataset.points
        order, newval = _kernel.stump_precompute(X)

    y = dataset.labels.astype(np.float64)
    eps_floor = (1.0 - EDGE_CLAMP) / 2.0
    n = len(dataset)
    w = np.full(n, 1.0 / n)
    cum = np.zeros(n)
    feats, cuts, pols, hyps, alphas, edge_log = [], [], [], [], [], []
    edge = -1.0
    for _ in range(rounds):
        if use_kernel_scan:
            sw = w * y
            edge, j, cut, pol = _kernel.best_stump(sw, order, newval)
            hv = _pure._stump_values(order[j], cut, pol, n)
        else:
            out = learner(dataset, w, rng)
            h = out[0] if isinstance(out, tuple) else out
            hv = h.evaluate_batch(dataset).astype(np.float64)
            edge = weighted_edge(h, dataset, w)
        if edge <= 0.0:
            break  # no advantage; the ensemble so far stands
        if edge >= EDGE_CLAMP and np.all(hv == y):
            if use_kernel_scan:
                thr = _stump_thresholds(X, order, np.array([j]), np.array([cut]))
                voter = VotingClassifier.from_stump_arrays([1.0], [j], thr, [pol])
            else:
                voter = VotingClassifier([1.0], [h])
            info = {"rounds": 1, "min_margin": 1.0,
                    "margins": np.ones(n), "edges": np.array([edge])}
            return (voter, info) if return_info else voter
        eps = max((1.0 - edge) / 2.0, eps_floor)
        alpha = 0.5 * math.log((1.0 - eps) / eps)
        alphas.append(alpha)
        edge_log.append(edge)
        if use_kernel_scan:
            feats.append(j)
            cuts.append(cut)
            pols.append(pol)
        else:
            hyps.append(h)
        w = _pure._reweight(w, hv, y, alpha, cum)
    if not alphas:
        raise WeakLearnerError("weak learner had no advantage on the first round",
                               best_edge=float(edge), attempts=1)
    alphas = np.array(alphas)
    alpha_sum = float(np.cumsum(alphas)[-1])
    wts = alphas / alpha_sum
    if use_kernel_scan:
        feats = np.array(feats, dtype=np.int64)
        cuts = np.array(cuts, dtype=np.int64)
        thr = _stump_thresholds(X, order, feats, cuts)
        voter = VotingClassifier.from_stump_arrays(wts, feats, thr, pols)
    else:
        voter = VotingClassifier(wts, hyps)
    margins = cum / alpha_sum
    info = {"rounds": len(alphas), "min_margin": float(margins.min()),
            "margins": margins, "edges": np.array(edge_log)}
    return (voter, info) if return_info else voter
