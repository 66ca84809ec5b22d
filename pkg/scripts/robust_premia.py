"""Convergence reports for the robust, homothetic and variational premia."""

import argparse

from poolrisk import LatticeDistribution, Utility
from poolrisk.ambiguity import AmbiguityModel
from poolrisk.asymptotics import Problem, run_rates
from poolrisk.io import report_to_csv


def coin(scale, shift=0.0):
    return LatticeDistribution.from_atoms([shift - scale, shift + scale], [0.5, 0.5], step=0.1)


def problems():
    u = Utility.exponential(1.0)
    base = [coin(1.0), coin(1.3)]
    yield "robust-ce, fair coins 1 and 1.3", Problem("robust-ce", u, 0.0, ambiguity=AmbiguityModel.from_laws(base))
    yield "homothetic, beta = 1, 1.5", Problem("homothetic", u, 1.0, ambiguity=AmbiguityModel.from_laws(base, betas=[1.0, 1.5]))
    penalized = AmbiguityModel.from_laws([coin(1.0), coin(0.5, 0.2)], alphas=[0.1, 0.0])
    yield "variational, alpha = 0.1, 0", Problem("variational", u, 0.0, ambiguity=penalized)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--csv", action="store_true", help="print full CSV reports")
    args = ap.parse_args()
    for label, problem in problems():
        r = run_rates(problem)
        upper = "empirical" if r.bound_upper is None else f"{r.bound_upper:.6f}"
        print(f"\n{label}")
        print(f"  final n*gap {r.rows[-1].n_gap:.6f}  bounds [{r.bound_lower:.6f}, {upper}]  "
              f"premium limit {r.target_limit:.8f}  verdict {r.verdict}")
        if args.csv:
            print(report_to_csv(r))


if __name__ == "__main__":
    main()
