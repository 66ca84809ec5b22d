"""Print n * premium against the Pratt limit for a few utility/law pairs."""

import argparse
from dataclasses import dataclass

from poolrisk import LatticeDistribution, Utility
from poolrisk.asymptotics import Problem, run_rates


@dataclass(frozen=True)
class Case:
    label: str
    utility: Utility
    law: LatticeDistribution
    wealth: float


CASES = [
    Case("exponential gamma=2, Bernoulli", Utility.exponential(2.0), LatticeDistribution(0, 1, [0.5, 0.5]), 0.0),
    Case("log, Bernoulli, v=1", Utility.log(), LatticeDistribution(0, 1, [0.5, 0.5]), 1.0),
    Case("power chi=3, three-point, v=2", Utility.power(3.0), LatticeDistribution(-1, 1, [0.2, 0.5, 0.3]), 2.0),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max-exp", type=int, default=12, help="grid is 2^0 .. 2^N")
    args = ap.parse_args()
    grid = [2**k for k in range(args.n_max_exp + 1)]
    for case in CASES:
        r = run_rates(Problem("classical", case.utility, case.wealth, law=case.law), grid)
        print(f"\n{case.label}: Pratt limit {r.bound_lower:.8f}, sigma {r.sqrt_bound:.6f}, verdict {r.verdict}")
        print(f"{'n':>6} {'n*gap':>14} {'sqrt(n)*gap':>14}")
        for row in r.rows:
            print(f"{row.n:>6} {row.n_gap:>14.8f} {row.sqrtn_gap:>14.8f}")
        print(f"Aitken estimate {r.limit_estimate:.10f}")


if __name__ == "__main__":
    main()
