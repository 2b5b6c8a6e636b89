"""Numpy backend for the boosting inner loops.

The compiled backend must reproduce these floats bit for bit, so every
reduction here is a strict left fold (cumsum / running scalar), transcendental
functions are taken from libm via `math`, and candidate scans break ties the
same way a sequential C loop with strict `>` would.
"""

import math

import numpy as np

BACKEND_NAME = "pure"

STATUS_OK = 0
STATUS_PERFECT = 1
STATUS_SHORTFALL = 2

EDGE_CLAMP = 1.0 - 1e-12
RATIO_LIMIT = 1e300


def _atanh2(z):
    return 0.5 * math.log((1.0 + z) / (1.0 - z))


def stump_precompute(X):
    """Per-feature stable sort order and valid-cut mask, shared by both backends."""
    n, n_features = X.shape
    order = np.empty((n_features, n), dtype=np.int32)
    newval = np.zeros((n_features, n + 1), dtype=np.uint8)
    for j in range(n_features):
        o = np.argsort(X[:, j], kind="stable")
        order[j] = o
        xs = X[o, j]
        newval[j, 0] = 1
        newval[j, n] = 1
        if n > 1:
            newval[j, 1:n] = xs[1:] != xs[:-1]
    return order, newval


def best_stump(sw, order, newval):
    """Best threshold cut under signed weights sw = w * y.

    Candidates are scanned feature-ascending, cut-ascending, polarity +1
    before -1, keeping strictly better edges only. Returns
    (edge, feature, cut, polarity).
    """
    n_features, n = order.shape
    best = (-math.inf, -1, -1, 0)
    for j in range(n_features):
        prefix = np.empty(n + 1)
        prefix[0] = 0.0
        np.cumsum(sw[order[j]], out=prefix[1:])
        total = prefix[n]
        masked_lo = np.where(newval[j], prefix, math.inf)
        masked_hi = np.where(newval[j], prefix, -math.inf)
        cut_plus = int(np.argmin(masked_lo))
        cut_minus = int(np.argmax(masked_hi))
        e_plus = total - 2.0 * prefix[cut_plus]
        e_minus = 2.0 * prefix[cut_minus] - total
        if e_minus > e_plus or (e_minus == e_plus and cut_minus < cut_plus):
            cand = (e_minus, j, cut_minus, -1)
        else:
            cand = (e_plus, j, cut_plus, 1)
        if cand[0] > best[0]:
            best = cand
    return best


def _stump_values(order_j, cut, polarity, n):
    hv = np.empty(n)
    hv[order_j[:cut]] = -polarity
    hv[order_j[cut:]] = polarity
    return hv


def _rebuild_from_margins(cum_margins):
    # weights are exp(-cum_margin) up to normalization; recompute from scratch
    # when the running product degrades. Shifting by the smallest margin puts
    # the largest weight at exactly 1.
    shift = float(np.min(cum_margins))
    w = np.array([math.exp(shift - v) for v in cum_margins])
    z = np.cumsum(w)[-1]
    return w / z


def _reweight(w, hv, y, alpha, cum_margins):
    up = math.exp(alpha)
    down = math.exp(-alpha)
    agree = hv == y
    cum_margins += np.where(agree, alpha, -alpha)
    w = w * np.where(agree, down, up)
    z = np.cumsum(w)[-1]
    if not (z > 0.0 and math.isfinite(z)):
        return _rebuild_from_margins(cum_margins)
    w /= z
    wmin = w.min()
    wmax = w.max()
    if not (wmin > 0.0) or wmax > wmin * RATIO_LIMIT:
        return _rebuild_from_margins(cum_margins)
    return w


def stump_boost_rounds(y, order, newval, gamma_req, nu, max_rounds):
    """Margin-boosting rounds over threshold stumps.

    y: float64 labels in {-1, +1}; order/newval from stump_precompute.
    Returns (status, feats, cuts, pols, alphas, edges, cum_margins, best_edge).
    """
    n = y.shape[0]
    w = np.full(n, 1.0 / n)
    cum_margins = np.zeros(n)
    feats = np.empty(max_rounds, dtype=np.int64)
    cuts = np.empty(max_rounds, dtype=np.int64)
    pols = np.empty(max_rounds, dtype=np.int8)
    alphas = np.empty(max_rounds)
    edges = np.empty(max_rounds)
    gamma_min = math.inf
    rounds = 0
    status = STATUS_OK
    best_edge = -math.inf

    for _ in range(max_rounds):
        sw = w * y
        edge, j, cut, pol = best_stump(sw, order, newval)
        best_edge = max(best_edge, edge)
        if edge < gamma_req:
            status = STATUS_SHORTFALL
            break
        hv = _stump_values(order[j], cut, pol, n)
        if edge >= EDGE_CLAMP and np.all(hv == y):
            feats[0], cuts[0], pols[0] = j, cut, pol
            alphas[0], edges[0] = 1.0, edge
            rounds = 1
            cum_margins = np.ones(n)
            status = STATUS_PERFECT
            break
        ecl = min(edge, EDGE_CLAMP)
        gamma_min = min(gamma_min, ecl)
        rho = gamma_min - nu
        alpha = _atanh2(ecl) - _atanh2(rho)
        feats[rounds], cuts[rounds], pols[rounds] = j, cut, pol
        alphas[rounds], edges[rounds] = alpha, edge
        rounds += 1
        w = _reweight(w, hv, y, alpha, cum_margins)

    r = rounds
    return (status, feats[:r], cuts[:r], pols[:r], alphas[:r], edges[:r],
            cum_margins, best_edge)


def table_boost_rounds(V, y, gamma_req, nu, max_rounds):
    """Margin-boosting rounds over an explicit prediction matrix V (n_hyps, n)."""
    V = np.ascontiguousarray(V, dtype=np.int8)
    n = y.shape[0]
    w = np.full(n, 1.0 / n)
    cum_margins = np.zeros(n)
    rows = np.empty(max_rounds, dtype=np.int64)
    alphas = np.empty(max_rounds)
    edges = np.empty(max_rounds)
    gamma_min = math.inf
    rounds = 0
    status = STATUS_OK
    best_edge = -math.inf

    for _ in range(max_rounds):
        sw = w * y
        all_edges = np.cumsum(V * sw, axis=1)[:, -1]
        h = int(np.argmax(all_edges))
        edge = float(all_edges[h])
        best_edge = max(best_edge, edge)
        if edge < gamma_req:
            status = STATUS_SHORTFALL
            break
        hv = V[h].astype(np.float64)
        if edge >= EDGE_CLAMP and np.all(hv == y):
            rows[0], alphas[0], edges[0] = h, 1.0, edge
            rounds = 1
            cum_margins = np.ones(n)
            status = STATUS_PERFECT
            break
        ecl = min(edge, EDGE_CLAMP)
        gamma_min = min(gamma_min, ecl)
        rho = gamma_min - nu
        alpha = _atanh2(ecl) - _atanh2(rho)
        rows[rounds], alphas[rounds], edges[rounds] = h, alpha, edge
        rounds += 1
        w = _reweight(w, hv, y, alpha, cum_margins)

    r = rounds
    return status, rows[:r], alphas[:r], edges[:r], cum_margins, best_edge
