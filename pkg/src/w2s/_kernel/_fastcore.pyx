# cython: language_level=3, boundscheck=False, wraparound=False
# cython: initializedcheck=False, cdivision=True
"""Compiled boosting inner loops; bit-identical to the pure backend.

Every reduction is a strict left fold and all transcendentals come from libm,
matching pure.py term for term. The build disables fused multiply-adds so the
float sequences agree exactly.
"""

import numpy as np

from libc.math cimport INFINITY, exp, isfinite, log

BACKEND_NAME = "compiled"

cdef enum:
    _STATUS_OK = 0
    _STATUS_PERFECT = 1
    _STATUS_SHORTFALL = 2

STATUS_OK = _STATUS_OK
STATUS_PERFECT = _STATUS_PERFECT
STATUS_SHORTFALL = _STATUS_SHORTFALL

cdef double EDGE_CLAMP = 1.0 - 1e-12
cdef double RATIO_LIMIT = 1e300


cdef inline double _atanh2(double z) noexcept nogil:
    return 0.5 * log((1.0 + z) / (1.0 - z))


cdef inline void _rebuild(double[::1] w, double[::1] sw, double[::1] y,
                          double[::1] cum, Py_ssize_t n) noexcept nogil:
    cdef double shift = INFINITY
    cdef double z = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        if cum[i] < shift:
            shift = cum[i]
    for i in range(n):
        w[i] = exp(shift - cum[i])
        z += w[i]
    for i in range(n):
        w[i] /= z
        sw[i] = w[i] * y[i]


cdef inline int _reweight(double[::1] w, double[::1] sw, signed char[::1] hv,
                          double[::1] y, double alpha, double[::1] cum,
                          Py_ssize_t n) noexcept nogil:
    # keeps sw = w * y current so the round loop needs no extra pass
    cdef double up = exp(alpha)
    cdef double down = exp(-alpha)
    cdef double z = 0.0
    cdef double wmin = INFINITY
    cdef double wmax = -INFINITY
    cdef Py_ssize_t i
    cdef bint agree
    # selects instead of branches: agreement is data-random, so a branch here
    # mispredicts half the time. z folds left in index order with each w[i]
    # final before its add, so the bits match a separate cumsum pass.
    for i in range(n):
        agree = (<double> hv[i]) == y[i]
        cum[i] += alpha if agree else -alpha
        w[i] = w[i] * (down if agree else up)
        z += w[i]
    if not (z > 0.0 and isfinite(z)):
        _rebuild(w, sw, y, cum, n)
        return 0
    for i in range(n):
        w[i] /= z
        sw[i] = w[i] * y[i]
        wmin = w[i] if w[i] < wmin else wmin
        wmax = w[i] if w[i] > wmax else wmax
    if not (wmin > 0.0) or wmax > wmin * RATIO_LIMIT:
        _rebuild(w, sw, y, cum, n)
    return 0


def stump_boost_rounds(double[::1] y, int[:, ::1] order,
                       unsigned char[:, ::1] newval, double gamma_req,
                       double nu, Py_ssize_t max_rounds):
    """Margin-boosting rounds over threshold stumps; see pure.stump_boost_rounds."""
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t n_features = order.shape[0]

    w_arr = np.full(n, 1.0 / n)
    cum_arr = np.zeros(n)
    sw_arr = np.empty(n)
    hv_arr = np.empty(n, dtype=np.int8)
    feats_arr = np.empty(max_rounds, dtype=np.int64)
    cuts_arr = np.empty(max_rounds, dtype=np.int64)
    pols_arr = np.empty(max_rounds, dtype=np.int8)
    alphas_arr = np.empty(max_rounds)
    edges_arr = np.empty(max_rounds)

    cdef double[::1] w = w_arr
    cdef double[::1] cum = cum_arr
    cdef double[::1] sw = sw_arr
    cdef signed char[::1] hv = hv_arr
    cdef long[::1] feats = feats_arr
    cdef long[::1] cuts = cuts_arr
    cdef signed char[::1] pols = pols_arr
    cdef double[::1] alphas = alphas_arr
    cdef double[::1] edges = edges_arr

    cdef int status = _STATUS_OK
    cdef Py_ssize_t rounds = 0
    cdef double run_best = -INFINITY
    cdef double gamma_min = INFINITY
    cdef double prefix, minP, maxP, total, e_plus, e_minus, cand_e
    cdef double prefix2, minP2, maxP2
    cdef double best_e, ecl, rho, alpha
    cdef Py_ssize_t t, i, j, c, p, minc, maxc, cand_c, best_j, best_cut
    cdef Py_ssize_t minc2, maxc2
    cdef int cand_p, best_pol, perfect
    cdef bint lower, upper

    with nogil:
        for i in range(n):
            sw[i] = w[i] * y[i]
        for t in range(max_rounds):
            best_e = -INFINITY
            best_j = -1
            best_cut = -1
            best_pol = 0
            # features walk in pairs so the two independent prefix chains
            # overlap their add latency; each chain's float sequence is the
            # same as a lone walk
            j = 0
            while j < n_features:
                prefix = 0.0
                minP = INFINITY
                maxP = -INFINITY
                minc = -1
                maxc = -1
                if j + 1 < n_features:
                    prefix2 = 0.0
                    minP2 = INFINITY
                    maxP2 = -INFINITY
                    minc2 = -1
                    maxc2 = -1
                    for c in range(n + 1):
                        if c > 0:
                            prefix += sw[order[j, c - 1]]
                            prefix2 += sw[order[j + 1, c - 1]]
                        # running extrema of a random walk: selects, not branches
                        if newval[j, c]:
                            lower = prefix < minP
                            minP = prefix if lower else minP
                            minc = c if lower else minc
                            upper = prefix > maxP
                            maxP = prefix if upper else maxP
                            maxc = c if upper else maxc
                        if newval[j + 1, c]:
                            lower = prefix2 < minP2
                            minP2 = prefix2 if lower else minP2
                            minc2 = c if lower else minc2
                            upper = prefix2 > maxP2
                            maxP2 = prefix2 if upper else maxP2
                            maxc2 = c if upper else maxc2
                else:
                    for c in range(n + 1):
                        if c > 0:
                            prefix += sw[order[j, c - 1]]
                        if newval[j, c]:
                            lower = prefix < minP
                            minP = prefix if lower else minP
                            minc = c if lower else minc
                            upper = prefix > maxP
                            maxP = prefix if upper else maxP
                            maxc = c if upper else maxc
                total = prefix
                e_plus = total - 2.0 * minP
                e_minus = 2.0 * maxP - total
                if e_minus > e_plus or (e_minus == e_plus and maxc < minc):
                    cand_e = e_minus
                    cand_c = maxc
                    cand_p = -1
                else:
                    cand_e = e_plus
                    cand_c = minc
                    cand_p = 1
                if cand_e > best_e:
                    best_e = cand_e
                    best_j = j
                    best_cut = cand_c
                    best_pol = cand_p
                if j + 1 < n_features:
                    total = prefix2
                    e_plus = total - 2.0 * minP2
                    e_minus = 2.0 * maxP2 - total
                    if e_minus > e_plus or (e_minus == e_plus and maxc2 < minc2):
                        cand_e = e_minus
                        cand_c = maxc2
                        cand_p = -1
                    else:
                        cand_e = e_plus
                        cand_c = minc2
                        cand_p = 1
                    if cand_e > best_e:
                        best_e = cand_e
                        best_j = j + 1
                        best_cut = cand_c
                        best_pol = cand_p
                    j += 2
                else:
                    j += 1
            if best_e > run_best:
                run_best = best_e
            if best_e < gamma_req:
                status = _STATUS_SHORTFALL
                break
            for p in range(best_cut):
                hv[order[best_j, p]] = <signed char> (-best_pol)
            for p in range(best_cut, n):
                hv[order[best_j, p]] = <signed char> best_pol
            if best_e >= EDGE_CLAMP:
                perfect = 1
                for i in range(n):
                    if (<double> hv[i]) != y[i]:
                        perfect = 0
                        break
                if perfect:
                    feats[0] = best_j
                    cuts[0] = best_cut
                    pols[0] = <signed char> best_pol
                    alphas[0] = 1.0
                    edges[0] = best_e
                    rounds = 1
                    for i in range(n):
                        cum[i] = 1.0
                    status = _STATUS_PERFECT
                    break
            ecl = best_e if best_e < EDGE_CLAMP else EDGE_CLAMP
            if ecl < gamma_min:
                gamma_min = ecl
            rho = gamma_min - nu
            alpha = _atanh2(ecl) - _atanh2(rho)
            feats[rounds] = best_j
            cuts[rounds] = best_cut
            pols[rounds] = <signed char> best_pol
            alphas[rounds] = alpha
            edges[rounds] = best_e
            rounds += 1
            _reweight(w, sw, hv, y, alpha, cum, n)

    r = rounds
    return (status, feats_arr[:r], cuts_arr[:r], pols_arr[:r], alphas_arr[:r],
            edges_arr[:r], cum_arr, run_best)


def table_boost_rounds(V_in, double[::1] y, double gamma_req, double nu,
                       Py_ssize_t max_rounds):
    """Margin-boosting rounds over a prediction matrix; see pure.table_boost_rounds."""
    V_arr = np.ascontiguousarray(V_in, dtype=np.int8)
    cdef signed char[:, ::1] V = V_arr
    cdef Py_ssize_t n_hyps = V.shape[0]
    cdef Py_ssize_t n = V.shape[1]
    if y.shape[0] != n:
        raise ValueError("prediction matrix and labels disagree on n")

    w_arr = np.full(n, 1.0 / n)
    cum_arr = np.zeros(n)
    sw_arr = np.empty(n)
    hv_arr = np.empty(n, dtype=np.int8)
    rows_arr = np.empty(max_rounds, dtype=np.int64)
    alphas_arr = np.empty(max_rounds)
    edges_arr = np.empty(max_rounds)

    cdef double[::1] w = w_arr
    cdef double[::1] cum = cum_arr
    cdef double[::1] sw = sw_arr
    cdef signed char[::1] hv = hv_arr
    cdef long[::1] rows = rows_arr
    cdef double[::1] alphas = alphas_arr
    cdef double[::1] edges = edges_arr

    cdef int status = _STATUS_OK
    cdef Py_ssize_t rounds = 0
    cdef double run_best = -INFINITY
    cdef double gamma_min = INFINITY
    cdef double e, best_e, ecl, rho, alpha
    cdef Py_ssize_t t, i, h, best_h
    cdef int perfect

    with nogil:
        for i in range(n):
            sw[i] = w[i] * y[i]
        for t in range(max_rounds):
            best_e = -INFINITY
            best_h = -1
            for h in range(n_hyps):
                e = 0.0
                for i in range(n):
                    e += (<double> V[h, i]) * sw[i]
                if e > best_e:
                    best_e = e
                    best_h = h
            if best_e > run_best:
                run_best = best_e
            if best_e < gamma_req:
                status = _STATUS_SHORTFALL
                break
            for i in range(n):
                hv[i] = V[best_h, i]
            if best_e >= EDGE_CLAMP:
                perfect = 1
                for i in range(n):
                    if (<double> hv[i]) != y[i]:
                        perfect = 0
                        break
                if perfect:
                    rows[0] = best_h
                    alphas[0] = 1.0
                    edges[0] = best_e
                    rounds = 1
                    for i in range(n):
                        cum[i] = 1.0
                    status = _STATUS_PERFECT
                    break
            ecl = best_e if best_e < EDGE_CLAMP else EDGE_CLAMP
            if ecl < gamma_min:
                gamma_min = ecl
            rho = gamma_min - nu
            alpha = _atanh2(ecl) - _atanh2(rho)
            rows[rounds] = best_h
            alphas[rounds] = alpha
            edges[rounds] = best_e
            rounds += 1
            _reweight(w, sw, hv, y, alpha, cum, n)

    r = rounds
    return status, rows_arr[:r], alphas_arr[:r], edges_arr[:r], cum_arr, run_best
