"""Timing and parity comparison of the pure and compiled boosting kernels.

Runs the identical round sequence on both backends, asserts the outputs are
bit-for-bit equal, then reports per-round wall time. The compiled backend is
skipped with a note if the extension is not built.

    python3 benchmarks/bench_kernels.py --m 256 --m 2731 --rounds 2000
"""

import argparse
import time

import numpy as np

from w2s._kernel import available_backends
from w2s._kernel.pure import stump_precompute
from w2s.rng import derive_rng


def _stump_inputs(m, n_features, seed):
    rng = derive_rng(seed, "bench.stump", m)
    X = rng.uniform(0.0, 1.0, size=(m, n_features))
    y = (rng.integers(0, 2, size=m) * 2.0 - 1.0)
    order, newval = stump_precompute(X)
    return y, order, newval


def _table_inputs(m, n_hyps, seed):
    rng = derive_rng(seed, "bench.table", m)
    V = (rng.integers(0, 2, size=(n_hyps, m)) * 2 - 1).astype(np.int8)
    y = (rng.integers(0, 2, size=m) * 2.0 - 1.0)
    return V, y


def _time(fn, reps):
    best = np.inf
    out = None
    for _ in range(reps):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _assert_identical(a, b):
    assert a[0] == b[0], "status differs"
    for u, v in zip(a[1:], b[1:]):
        assert np.array_equal(np.asarray(u), np.asarray(v)), "outputs differ"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, action="append",
                    help="dataset sizes (repeatable; default 256, 1024, 2731)")
    ap.add_argument("--features", type=int, default=2)
    ap.add_argument("--hyps", type=int, default=64,
                    help="hypothesis rows for the table kernel")
    ap.add_argument("--rounds", type=int, default=2000)
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    sizes = args.m or [256, 1024, 2731]

    backends = available_backends()
    if "compiled" not in backends:
        print("compiled extension not built; timing pure only")
    names = [n for n in ("pure", "compiled") if n in backends]

    print(f"{'kernel':<8} {'m':>6} {'rounds':>7} "
          + " ".join(f"{n + ' us/rd':>15}" for n in names)
          + ("  speedup" if len(names) == 2 else ""))
    for m in sizes:
        y, order, newval = _stump_inputs(m, args.features, args.seed)
        per = {}
        outs = {}
        for n in names:
            fn = backends[n].stump_boost_rounds
            # gamma_req -1 so random-label edges never trip the shortfall exit
            best, outs[n] = _time(
                lambda: fn(y, order, newval, -1.0, 0.05, args.rounds),
                args.reps)
            per[n] = best / args.rounds * 1e6
        if len(names) == 2:
            _assert_identical(outs["pure"], outs["compiled"])
        row = f"{'stump':<8} {m:>6} {args.rounds:>7} "
        row += " ".join(f"{per[n]:>15.2f}" for n in names)
        if len(names) == 2:
            row += f"  {per['pure'] / per['compiled']:>6.1f}x"
        print(row)

        V, y2 = _table_inputs(m, args.hyps, args.seed)
        for n in names:
            fn = backends[n].table_boost_rounds
            best, outs[n] = _time(
                lambda: fn(V, y2, -1.0, 0.05, args.rounds), args.reps)
            per[n] = best / args.rounds * 1e6
        if len(names) == 2:
            _assert_identical(outs["pure"], outs["compiled"])
        row = f"{'table':<8} {m:>6} {args.rounds:>7} "
        row += " ".join(f"{per[n]:>15.2f}" for n in names)
        if len(names) == 2:
            row += f"  {per['pure'] / per['compiled']:>6.1f}x"
        print(row)


if __name__ == "__main__":
    main()
