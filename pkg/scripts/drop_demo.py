"""Dimension drop on the diagonal example and on one random tuple."""
import argparse

import numpy as np
from scipy.optimize import brentq

from afflab.harness import drop_experiment, sample_tuple
from afflab.symbolic import MatrixTuple


def show(name, rep, oracle=None):
    print(f"{name}: dim = {rep.base.dimension:.10f}  strict_drop = {rep.strict_drop}")
    for r in rep.removed:
        line = f"  without A_{r.index}: dim {r.result.dimension:.10f}  gap {r.gap:.6f}  tol {r.tolerance:.1e}"
        if oracle is not None:
            line += f"  oracle gap {oracle[r.index - 1]:.6f}"
        print(line)
    for note in rep.notes:
        print(f"  note: {note}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    lead = [0.4, 0.3, 0.25]
    mats = (np.diag([0.4, 0.2]), np.diag([0.3, 0.1]), np.diag([0.25, 0.15]))

    def root(a):
        return brentq(lambda s: sum(x**s for x in a) - 1, 0, 1, xtol=1e-14)

    base = root(lead)
    oracle = [base - root(lead[:i] + lead[i + 1:]) for i in range(3)]
    show("diagonal", drop_experiment(MatrixTuple(mats)), oracle)
    show(f"random (seed {args.seed})", drop_experiment(sample_tuple(2, 3, seed=args.seed)))


if __name__ == "__main__":
    main()
