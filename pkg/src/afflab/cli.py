"""Command-line front end: ``afflab <verb> [options]``.

Reports go to stdout as JSON; tabular data goes to CSV files under ``--out``.
Exit codes: 0 ok, 2 usage, 3 input, 4 precondition, 5 resource.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import equilibrium, harness, irreducibility, pressure
from .documents import RunConfig, jsonable, load_document, write_csv
from .errors import AfflabError, InputError
from .multilinear import exterior_power, operator_norm, trivector_identity_vector
from .symbolic import index_word

CHECKS = ("irred", "k-irred", "s-irred", "eigcond", "cs")


def _emit(report: dict) -> None:
    json.dump(jsonable(report), sys.stdout, indent=2)
    sys.stdout.write("\n")


def _config(args) -> RunConfig:
    kwargs = dict(n_max=args.n_max, tol=args.tol, e1_gap=args.e1_gap, e2_minor=args.e2_minor,
                  seed=args.seed, threads=args.threads, out=args.out)
    if args.budget is not None:
        kwargs["budget"] = args.budget
    return RunConfig.from_env(**kwargs)


def _tuple(args):
    if args.input is None:
        raise InputError("--input is required")
    return load_document(args.input).to_tuple()


def _map_index(args, tup) -> int:
    if not 1 <= args.map <= tup.N:
        raise InputError(f"--map must lie in 1..{tup.N}")
    return args.map - 1


def cmd_pressure(args, cfg: RunConfig) -> None:
    tup = _tuple(args)
    n_max = cfg.n_max or 8
    if args.norm:
        est = pressure.norm_pressure_estimate(tup, args.s, n_max, cfg.budget)
    else:
        est = pressure.pressure_estimate(tup, args.s, n_max, cfg.budget)
    write_csv(cfg.out, "pressure_samples.csv", ["n", "a_n_over_n"], est.samples)
    _emit({"command": "pressure", "potential": "norm" if args.norm else "svf", **jsonable(est)})


def cmd_affdim(args, cfg: RunConfig) -> None:
    tup = _tuple(args)
    res = pressure.affinity_dimension(tup, cfg.tol, cfg.n_max, cfg.budget)
    write_csv(cfg.out, "affdim.csv", ["dimension", "s_lo", "s_hi", "pressure_at_dimension", "depth"],
              [[res.dimension, *res.bracket, res.pressure_at_dimension, res.depth]])
    _emit({"command": "affdim", **jsonable(res)})


def cmd_exterior(args, cfg: RunConfig) -> None:
    tup = _tuple(args)
    A = tup[_map_index(args, tup)]
    if not 0 <= args.k <= tup.d:
        raise InputError(f"--k must lie in 0..{tup.d}")
    W = exterior_power(A, args.k)
    write_csv(cfg.out, "exterior.csv", [f"c{j}" for j in range(W.shape[1])], W.tolist())
    _emit({"command": "exterior", "map": args.map, "k": args.k, "matrix": W, "norm": operator_norm(W)})


def cmd_lift(args, cfg: RunConfig) -> None:
    tup = _tuple(args)
    chk = harness.rational_lift_check(tup, args.p, args.q, cfg.n_max or 8, cfg.budget)
    write_csv(cfg.out, "lift_samples.csv", ["n", "svf_pressure_sample", "lifted_norm_pressure_sample"],
              [[n, a, b] for (n, a), (_, b) in zip(chk.pressure_samples, chk.lifted_norm_samples)])
    _emit({"command": "lift", **jsonable(chk)})


def _witness_irred(rep: irreducibility.IrreducibilityReport) -> str:
    if rep.verdict is irreducibility.Verdict.IRREDUCIBLE:
        return f"generated algebra has full dimension {rep.algebra_dimension} = {rep.dimension}^2"
    if rep.verdict is irreducibility.Verdict.REDUCIBLE:
        return (f"invariant subspace of dimension {rep.certificate_dimension} in R^{rep.dimension}, "
                f"residual {rep.invariance_residual:.3g}")
    return (f"generated algebra has dimension {rep.algebra_dimension} < {rep.dimension ** 2}; "
            f"no invariant subspace found; every orbit probe spans R^{rep.dimension} (probably irreducible over R)")


def cmd_check(args, cfg: RunConfig) -> None:
    tup = _tuple(args)
    which = args.which
    if which == "eigcond":
        reports, ok = irreducibility.check_eigenvalue_condition(tup, cfg.e1_gap, cfg.e2_minor)
        lines = []
        for r in reports:
            status = "PASS" if r.satisfied else "FAIL"
            lines.append(f"pair {r.pair}: {status}; distinct={r.distinct_spectrum}, "
                         f"E1 min gap {r.e1_min_gap:.3g}, E2 min relative minor {r.e2_min_minor:.3g}")
        write_csv(cfg.out, "eigcond.csv", ["i", "j", "distinct", "E1", "min_gap", "E2", "min_minor"],
                  [[*r.pair, all(r.distinct_spectrum), r.e1, r.e1_min_gap, r.e2, r.e2_min_minor]
                   for r in reports])
        _emit({"command": "check", "which": which, "verdict": "PASS" if ok else "FAIL",
               "witness": lines, "pairs": reports})
        return
    if which == "cs":
        k = args.k if args.k is not None else 0
        res = irreducibility.check_condition_Cs_sampled(tup, k, args.trials, args.max_len, cfg.seed)
        _emit({"command": "check", "which": which, "verdict": res.verdict, "k": k, "trials": res.trials,
               "max_len": res.max_len, "words_checked": res.words_checked,
               "witness": ("no word of length <= %d pairs both components" % res.max_len
                           if res.counterexample is not None else "every sampled quadruple has a witness word"),
               "counterexample": res.counterexample})
        return
    if which == "irred":
        rep = irreducibility.check_irreducible(tup, cfg.seed)
        extra = {}
    elif which == "k-irred":
        k = args.k if args.k is not None else 1
        rep = irreducibility.check_k_irreducible(tup, k, cfg.seed)
        extra = {"k": k}
    else:
        k = args.k if args.k is not None else 0
        rep = irreducibility.check_s_irreducible_sufficient(tup, k, cfg.seed)
        extra = {"k": k, "space": f"wedge^{k} (x) wedge^{k + 1}"}
        if tup.d == 3 and k == 1 and rep.certificate is not None and rep.certificate.shape[1] == 1:
            v = trivector_identity_vector() / np.sqrt(3.0)
            extra["alignment_with_trivector_line"] = float(abs(v @ rep.certificate[:, 0]))
    _emit({"command": "check", "which": which, "verdict": rep.verdict.value, **extra,
           "witness": _witness_irred(rep), "report": rep})


def cmd_gibbs(args, cfg: RunConfig) -> None:
    tup = _tuple(args)
    n = args.depth
    mu = equilibrium.gibbs_approximation(tup, args.s, n, cfg.budget)
    diag = equilibrium.variational_check(tup, args.s, n, budget=cfg.budget)
    write_csv(cfg.out, "gibbs_weights.csv", ["word", "weight"],
              [["".join(map(str, index_word(i, tup.N, n))) if tup.N < 10 else
                " ".join(map(str, index_word(i, tup.N, n))), w] for i, w in enumerate(mu.weights)])
    _emit({"command": "gibbs", "s": args.s, "depth": n, "log_normalizer": mu.log_normalizer,
           "shift_defect": [mu.shift_defect(m) for m in range(n)], **jsonable(diag)})


def cmd_drop(args, cfg: RunConfig) -> None:
    tup = _tuple(args)
    rep = harness.drop_experiment(tup, cfg.tol, cfg.n_max, cfg.budget, cfg.e1_gap, cfg.e2_minor)
    write_csv(cfg.out, "drop_gaps.csv", ["removed", "base_dimension", "reduced_dimension", "gap", "tolerance"],
              [[r.index, rep.base.dimension, r.result.dimension, r.gap, r.tolerance] for r in rep.removed])
    _emit({"command": "drop", **jsonable(rep)})


def cmd_survey(args, cfg: RunConfig) -> None:
    if args.trials < 1:
        raise _UsageError("--trials must be >= 1")
    rep = harness.genericity_survey(args.d, args.N, args.trials, cfg.seed, args.cap, args.with_drop,
                                    cfg.n_max, cfg.tol, cfg.e1_gap, cfg.e2_minor, cfg.threads)
    write_csv(cfg.out, "survey.csv",
              ["trial", "sub_seed", "eigenvalue_condition", "min_e1_gap", "min_e2_minor", "strict_drop",
               "min_gap", "error"],
              [[r.trial, r.sub_seed, r.eigenvalue_condition, r.min_e1_gap, r.min_e2_minor, r.strict_drop,
                r.min_gap, r.error] for r in rep.rows])
    _emit({"command": "survey", "d": rep.d, "N": rep.N, "trials": rep.trials, "seed": rep.seed,
           "cap": rep.cap, "eigenvalue_pass_fraction": rep.eigenvalue_pass_fraction,
           "strict_drop_fraction": rep.strict_drop_fraction,
           "failures": [r for r in rep.rows if not r.eigenvalue_condition or r.error]})


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", type=Path, help="tuple document (JSON)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--n-max", type=int, default=None, help="enumeration depth")
    common.add_argument("--tol", type=float, default=1e-8, help="bisection bracket width")
    common.add_argument("--e1-gap", type=float, default=irreducibility.E1_GAP_TOL)
    common.add_argument("--e2-minor", type=float, default=irreducibility.E2_MINOR_TOL)
    common.add_argument("--budget", type=int, default=None, help="word budget (env AFFLAB_BUDGET)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", type=Path, default=None, help="directory for CSV output")

    parser = argparse.ArgumentParser(prog="afflab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("pressure", parents=[common], help="singular value (or norm) pressure")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--norm", action="store_true", help="use ||A||^s instead of phi^s")
    p.set_defaults(func=cmd_pressure)

    p = sub.add_parser("affdim", parents=[common], help="affinity dimension")
    p.set_defaults(func=cmd_affdim)

    p = sub.add_parser("exterior", parents=[common], help="exterior power of one map")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--map", type=int, default=1)
    p.set_defaults(func=cmd_exterior)

    p = sub.add_parser("lift", parents=[common], help="rational tensor lift consistency")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("check", parents=[common], help="irreducibility and eigenvalue-condition checks")
    p.add_argument("which", choices=CHECKS)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-len", type=int, default=irreducibility.CS_MAX_LEN)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gibbs", parents=[common], help="depth-n Gibbs approximation diagnostics")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--depth", type=int, default=6)
    p.set_defaults(func=cmd_gibbs)

    p = sub.add_parser("drop", parents=[common], help="dimension drop experiment")
    p.set_defaults(func=cmd_drop)

    p = sub.add_parser("survey", parents=[common], help="genericity survey of random tuples")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--cap", type=float, default=harness.DROP_CAP)
    p.add_argument("--with-drop", action="store_true")
    p.set_defaults(func=cmd_survey)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        args.func(args, cfg)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"afflab: error: {exc}", file=sys.stderr)
        return 2
    except AfflabError as exc:
        print(f"afflab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
