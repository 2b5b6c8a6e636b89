"""Command line front end.

Exit codes: 0 success, 2 bad input, 3 contract violation during training,
4 a verification check ran and failed.
"""

import argparse
import json
import sys

from . import harness, subvote
from ._kernel import BACKEND
from .boost import adaboost, adaboost_star_nu
from .core import (VotingClassifier, load_dataset_csv, min_margin,
                   save_dataset_csv, zero_one_loss)
from .errors import CheckFailureError, InputError, W2SError
from .hardness import bayes_floor, build_instance
from .optimal import OptimalLearnerConfig, train_optimal
from .rng import derive_rng
from .subsample import plan_for


def _dump_json(obj, path=None):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    print(text)


# --- verbs -----------------------------------------------------------------------


def cmd_gen_data(args):
    concept = harness.random_concept(
        derive_rng(args.seed, "gen.concept"), args.features, args.stumps,
        2.0 * args.gamma)
    ds = harness.gen_dataset(concept, args.m, derive_rng(args.seed, "gen.sample"))
    save_dataset_csv(ds, args.out)
    print(f"wrote {args.m} points x {args.features} features to {args.out}")


def cmd_train(args):
    ds = load_dataset_csv(args.data)
    config = {"algo": args.algo, "gamma": args.gamma, "nu": args.nu,
              "seed": args.seed, "m": len(ds), "backend": BACKEND}
    if args.algo == "optimal":
        cfg = OptimalLearnerConfig(gamma=args.gamma, nu=args.nu, seed=args.seed,
                                   threads=args.threads)
        model, info = train_optimal(ds, cfg, return_info=True)
        config["nu"] = cfg.resolved_nu
        config["k_subsamples"] = info["plan"].k
        summary = {"k_subsamples": info["plan"].k,
                   "min_margin": info["min_margin"]}
    elif args.algo == "abstar":
        model, info = adaboost_star_nu(ds, "stump", args.gamma, args.nu,
                                       return_info=True)
        config["nu"] = args.nu if args.nu is not None else args.gamma / 2.0
        summary = {"rounds": info["rounds"], "min_margin": info["min_margin"]}
    else:
        model, info = adaboost(ds, "stump", rounds=args.rounds, gamma=args.gamma,
                               return_info=True)
        config["rounds"] = info["rounds"]
        summary = {"rounds": info["rounds"], "min_margin": info["min_margin"]}
    with open(args.out, "w") as fh:
        json.dump(harness.model_to_json(config, model), fh, indent=2,
                  sort_keys=True)
        fh.write("\n")
    summary["train_error"] = zero_one_loss(model, ds)
    print(json.dumps({"out": args.out, **summary}, sort_keys=True))


def cmd_eval(args):
    with open(args.model) as fh:
        model = harness.model_from_json(json.load(fh))
    ds = load_dataset_csv(args.data)
    report = {"m": len(ds), "error": zero_one_loss(model, ds)}
    if isinstance(model, VotingClassifier):
        report["min_margin"] = min_margin(model, ds)
    _dump_json(report, args.out)


def cmd_plan(args):
    plan = plan_for(args.m)
    d = plan.to_json()
    if not args.full:
        del d["index_sets"]
    _dump_json(d, args.out)


def cmd_curve(args):
    base = {}
    if args.config:
        with open(args.config) as fh:
            base = json.load(fh)
    overrides = {"gamma": args.gamma, "nu": args.nu, "trials_per_m": args.trials,
                 "seed": args.seed, "epsilon": args.epsilon, "delta": args.delta,
                 "feature_count": args.features, "stump_count": args.stumps,
                 "out_csv": args.out, "out_plot": args.plot_data,
                 "out_svg": args.svg}
    if args.m:
        overrides["m_grid"] = tuple(args.m)
    if args.algos:
        overrides["algos"] = tuple(args.algos.split(","))
    for key, val in overrides.items():
        if val is not None:
            base[key] = val
    if "gamma" not in base:
        raise InputError("gamma is required (flag or config file)")
    cfg = harness.ExperimentConfig.from_json(base)
    rows = harness.run_curve(cfg)
    harness.write_curve_csv(rows, cfg.out_csv)
    agg = harness.aggregate_curve(rows)
    if cfg.out_plot:
        harness.write_plot_csv(agg, cfg.out_plot)
    if cfg.out_svg:
        harness.write_curve_svg(agg, cfg.out_svg)
    print(f"wrote {len(rows)} rows to {cfg.out_csv}")


def cmd_verify_lemma(args):
    trials = args.trials
    if args.lemma in (7, 8):
        f, x = harness.lemma_scenario_voter(args.seed)
        if args.lemma == 7:
            t = args.t if args.t is not None else 3200
            mu = args.mu if args.mu is not None else 0.4
            report = subvote.verify_deviation_tail(f, x, t, mu, trials, args.seed)
        else:
            t = args.t if args.t is not None else 400
            mu = args.mu if args.mu is not None else 1.0 / t
            report = subvote.verify_smallness_tail(f, x, t, mu, trials, args.seed)
    elif args.lemma == 9:
        f, ds = harness.lemma_scenario_distribution(args.seed)
        t = args.t if args.t is not None else 100
        report = subvote.verify_loss_sandwich(f, ds, t, trials, args.seed)
    else:
        gamma = args.gamma if args.gamma is not None else 0.1
        f, ds = harness.lemma_scenario_margin(args.seed, gamma)
        report = subvote.verify_margin_loss(f, ds, gamma, t=args.t,
                                            trials=trials, seed=args.seed)
    _dump_json(report.to_json(), args.out)
    if not report.passed and not report.vacuous:
        raise CheckFailureError(
            f"lemma {args.lemma} bound violated: empirical {report.empirical} "
            f"> bound {report.bound} (+3 sigma)")


def cmd_hardness(args):
    inst = build_instance(args.gamma, min(args.m), u=args.u, d=args.d,
                          c_u=args.c_u, seed=args.seed)
    header = "trial,m,error_exact,posterior_size,seen_points"
    lines = [header]
    summary = []
    for m in args.m:
        res = bayes_floor(inst, m, args.trials, args.seed)
        for row in res.rows:
            lines.append(",".join(repr(v) if isinstance(v, float) else str(v)
                                  for v in row))
        summary.append({"m": m, "mean_error": res.mean_error,
                        "q23_error": res.q23_error})
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    print(json.dumps({"u": inst.u, "gamma": inst.gamma,
                      "concepts": len(inst.concepts), "floor": summary},
                     sort_keys=True))


def cmd_spot_check(args):
    report = harness.spot_check_strong_bound(
        args.gamma, args.d, args.m, args.trials, args.seed)
    _dump_json(report, args.out)


# --- parser ----------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="w2s",
                                description="majority-of-majorities boosting toolkit")
    sub = p.add_subparsers(dest="verb", required=True)

    g = sub.add_parser("gen-data", help="write a synthetic dataset CSV")
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--gamma", type=float, default=0.1)
    g.add_argument("--features", type=int, default=2)
    g.add_argument("--stumps", type=int, default=5)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen_data)

    t = sub.add_parser("train", help="fit a model and write it as JSON")
    t.add_argument("--algo", choices=("optimal", "abstar", "adaboost"),
                   default="optimal")
    t.add_argument("--data", required=True)
    t.add_argument("--gamma", type=float, required=True)
    t.add_argument("--nu", type=float)
    t.add_argument("--rounds", type=int)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--threads", type=int)
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_train)

    e = sub.add_parser("eval", help="zero-one error of a saved model on a CSV")
    e.add_argument("--model", required=True)
    e.add_argument("--data", required=True)
    e.add_argument("--out")
    e.set_defaults(func=cmd_eval)

    pl = sub.add_parser("plan", help="sub-sample plan summary for a sample size")
    pl.add_argument("--m", type=int, required=True)
    pl.add_argument("--full", action="store_true",
                    help="include the index sets themselves")
    pl.add_argument("--out")
    pl.set_defaults(func=cmd_plan)

    c = sub.add_parser("curve", help="train/test error against sample size")
    c.add_argument("--config", help="JSON experiment config; flags override")
    c.add_argument("--gamma", type=float)
    c.add_argument("--nu", type=float)
    c.add_argument("--m", type=int, action="append",
                   help="grid point, repeatable")
    c.add_argument("--trials", type=int)
    c.add_argument("--algos", help="comma separated: optimal,adaboost,abstar")
    c.add_argument("--seed", type=int)
    c.add_argument("--epsilon", type=float)
    c.add_argument("--delta", type=float)
    c.add_argument("--features", type=int)
    c.add_argument("--stumps", type=int)
    c.add_argument("--out")
    c.add_argument("--plot-data")
    c.add_argument("--svg")
    c.set_defaults(func=cmd_curve)

    v = sub.add_parser("verify-lemma", help="Monte Carlo check of a tail bound")
    v.add_argument("--lemma", type=int, choices=(7, 8, 9, 10), required=True)
    v.add_argument("--t", type=int)
    v.add_argument("--mu", type=float)
    v.add_argument("--gamma", type=float)
    v.add_argument("--trials", type=int, default=100000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify_lemma)

    h = sub.add_parser("hardness", help="exact Bayes-floor error on a hard instance")
    h.add_argument("--gamma", type=float, required=True)
    h.add_argument("--m", type=int, action="append", required=True)
    h.add_argument("--d", type=int)
    h.add_argument("--u", type=int)
    h.add_argument("--c-u", type=float, default=1.0)
    h.add_argument("--trials", type=int, default=200)
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--out")
    h.set_defaults(func=cmd_hardness)

    s = sub.add_parser("spot-check-t6",
                       help="test error of margin-gamma voters against 1/200")
    s.add_argument("--gamma", type=float, required=True)
    s.add_argument("--d", type=int, default=1)
    s.add_argument("--m", type=int, action="append", required=True)
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_spot_check)

    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except W2SError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        # unreadable/missing paths are caller mistakes, not crashes
        print(f"error: {exc}", file=sys.stderr)
        return InputError.exit_code
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
