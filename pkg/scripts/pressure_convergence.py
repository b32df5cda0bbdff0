"""Print a_n/n against n for a tuple document, with the extrapolated pressure."""
import argparse

from afflab.documents import load_document
from afflab.pressure import pressure_estimate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("input")
    ap.add_argument("--s", type=float, nargs="+", default=[0.5, 1.0, 1.5])
    ap.add_argument("--n-max", type=int, default=10)
    args = ap.parse_args()

    tup = load_document(args.input).to_tuple()
    for s in args.s:
        est = pressure_estimate(tup, s, args.n_max)
        print(f"s = {s}")
        for n, v in est.samples:
            print(f"  n = {n:3d}  a_n/n = {v:+.12f}")
        print(f"  extrapolated {est.value:+.12f} +- {est.uncertainty:.1e} (upper bound {est.upper_bound:+.12f})")


if __name__ == "__main__":
    main()
