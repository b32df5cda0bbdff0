"""Eigenvalue-condition and strict-drop survey over random tuples.

    python scripts/run_survey.py --d 2 --N 3 --trials 50 --with-drop --out results/
"""
import argparse
import time
from pathlib import Path

from afflab.documents import write_csv
from afflab.harness import genericity_survey


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--N", type=int, default=3)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--cap", type=float, default=0.5)
    ap.add_argument("--with-drop", action="store_true")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, default=None)
    args = ap.parse_args()

    t0 = time.perf_counter()
    rep = genericity_survey(args.d, args.N, args.trials, args.seed, args.cap, args.with_drop,
                            workers=args.workers)
    print(f"d={rep.d} N={rep.N} trials={rep.trials} seed={rep.seed} cap={rep.cap}")
    print(f"eigenvalue condition pass fraction: {rep.eigenvalue_pass_fraction:.3f}")
    if args.with_drop:
        gaps = [r.min_gap for r in rep.rows if r.strict_drop != "skipped"]
        print(f"strict drop fraction: {rep.strict_drop_fraction:.3f}, smallest gap {min(gaps):.4f}")
    for r in rep.rows:
        if r.error:
            print(f"  trial {r.trial} (sub-seed {r.sub_seed}): {r.error}")
    print(f"{time.perf_counter() - t0:.1f} s")
    if args.out:
        write_csv(args.out, "survey.csv", ["trial", "sub_seed", "eigenvalue_condition", "min_e1_gap",
                                           "min_e2_minor", "strict_drop", "min_gap"],
                  [[r.trial, r.sub_seed, r.eigenvalue_condition, r.min_e1_gap, r.min_e2_minor,
                    r.strict_drop, r.min_gap] for r in rep.rows])


if __name__ == "__main__":
    main()
