"""Acceptance suite: one PASS/FAIL line per criterion.

Run directly (``python3 -m tests.test_acceptance``) or through pytest, which
also repeats the lines in its terminal summary.
"""

import math
import time

import numpy as np
import pytest

from poolrisk import LatticeDistribution, Utility
from poolrisk import dist
from poolrisk.ambiguity import AmbiguityModel, robust_rate_bounds
from poolrisk.asymptotics import Problem, dependent_sequence_report, run_rates
from poolrisk.classical import Engine, certainty_equivalent, certainty_equivalent_estimate, entropic_risk, entropic_risk_of_sum, risk_premium, sqrt_n_bound
from poolrisk.dist import convolve_power, moments
from poolrisk.pooling import CRITERIA, Allocation, Criterion, SampleSpace, pareto_gap, pareto_search
from poolrisk.premia import exponential_variational_premium_limit, homothetic_premium, homothetic_rate_bounds, variational_premium, variational_premium_limit

from .oracles import dp_sum_law

RESULTS = []
N_BIG = 4096
POW2 = [2**k for k in range(13)]


def report(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def bernoulli():
    return LatticeDistribution(0.0, 1.0, [0.5, 0.5])


def coin(scale, step=0.1):
    return LatticeDistribution.from_atoms([-scale, scale], [0.5, 0.5], step=step)


def criterion_1():
    t0 = time.perf_counter()
    pi = risk_premium(Utility.exponential(2.0), bernoulli(), N_BIG, 0.0)
    elapsed = time.perf_counter() - t0
    err = abs(N_BIG * pi - 0.25)
    return report(1, err <= 0.01 and elapsed < 5.0,
                  f"exponential Pratt limit n*pi={N_BIG * pi:.8f}, |err|={err:.2e} <= 0.01, {elapsed:.3f}s < 5s")


def criterion_2():
    n_pi = N_BIG * risk_premium(Utility.log(), bernoulli(), N_BIG, 1.0)
    rel = abs(n_pi - 1 / 12) / (1 / 12)
    return report(2, rel <= 0.02, f"log Pratt limit n*pi={n_pi:.8f} vs 1/12, rel err {rel:.2e} <= 2%")


def _random_case(rng):
    size = int(rng.integers(1, 9))
    probs = rng.random(size) + 0.01
    probs /= probs.sum()
    d = LatticeDistribution(float(rng.uniform(-2, 2)), float(rng.choice([0.25, 0.5, 1.0])), probs)
    kind = int(rng.integers(3))
    if kind == 0:
        u = Utility.exponential(float(rng.uniform(0.1, 4.0)))
    elif kind == 1:
        u = Utility.power(float(rng.choice([0.3, 0.6, 2.0, 3.5])))
    else:
        u = Utility.log()
    v = max(0.0, -moments(d).essential_min) + float(rng.uniform(0.1, 2.0)) if u.bounded_domain else float(rng.uniform(0, 2))
    return u, d, v


def criterion_3():
    rng = np.random.default_rng(20240601)
    grid = [2**k for k in range(11)]
    worst_mono = worst_top = worst_sqrt = -math.inf
    for _ in range(100):
        u, d, v = _random_case(rng)
        ces = np.array([certainty_equivalent(u, d, n, v) for n in grid])
        top = v + moments(d).mean
        worst_mono = max(worst_mono, float(np.max(ces[:-1] - ces[1:])))
        worst_top = max(worst_top, float(np.max(ces - top)))
        sigma = sqrt_n_bound(d)
        for n in (64, 256, 1024):
            worst_sqrt = max(worst_sqrt, math.sqrt(n) * (top - certainty_equivalent(u, d, n, v)) - sigma)
    ok = worst_mono <= 1e-10 and worst_top <= 1e-10 and worst_sqrt <= 1e-6
    return report(3, ok, f"100 cases: max CE decrease {worst_mono:.1e}, max CE-(v+EX) {worst_top:.1e} (<=1e-10), "
                         f"max sqrt(n)*pi - sigma {worst_sqrt:.2e} (<=1e-6)")


def criterion_4():
    A = AmbiguityModel.from_laws([coin(1.0), coin(1.3)])
    r = run_rates(Problem("robust-ce", Utility.exponential(1.0), 0.0, ambiguity=A), POW2)
    lo = 0.5 * 1.0 * 1.0
    hi = 0.5 * 1.0 * max(1.0, 1.3**2)
    final = r.rows[-1].n_gap
    gaps = r.column("gap")
    mono = bool(np.all(np.diff(gaps) <= 1e-12))
    ok = lo - 0.02 <= final <= hi + 0.02 and mono
    return report(4, ok, f"robust sandwich n*gap={final:.6f} in [{lo - 0.02:.3f}, {hi + 0.02:.3f}], gap nonincreasing={mono}")


def criterion_5():
    A = AmbiguityModel.from_laws([coin(1.0, 1.0), LatticeDistribution(-1, 1, [1.0]), LatticeDistribution(1, 1, [1.0])])
    r = run_rates(Problem("robust-ce", Utility.exponential(1.0), 0.0, ambiguity=A), POW2)
    gap_max = float(np.max(np.abs(r.column("gap"))))
    upper_at_coin = robust_rate_bounds(AmbiguityModel.from_laws([coin(1.0, 1.0)]), Utility.exponential(1.0)).upper
    ok = gap_max == 0.0 and upper_at_coin > 0 and r.bound_upper > 0
    return report(5, ok, f"point-mass extremes: max |gap| over n=1..4096 is {gap_max}, upper formula at mean-0 member {upper_at_coin:.3f} > 0")


def criterion_6():
    laws = [bernoulli(), coin(1.0, 1.0), LatticeDistribution(-1.0, 0.5, [0.1, 0.2, 0.3, 0.15, 0.25])]
    worst = 0.0
    for d in laws:
        for gamma in (0.3, 1.0, 2.5):
            rho1 = entropic_risk(d, gamma, 1)
            for n in range(1, 65):
                a = abs(n * entropic_risk(d, gamma, n) - entropic_risk_of_sum(d, gamma / n, n))
                b = abs(entropic_risk_of_sum(d, gamma, n) / n - rho1)
                worst = max(worst, a, b)
    return report(6, worst <= 1e-10, f"entropic scaling identities for n=1..64: max abs err {worst:.2e} <= 1e-10")


def criterion_7():
    pm = [LatticeDistribution.from_atoms([0.0], [1.0], step=0.2), LatticeDistribution.from_atoms([0.2], [1.0], step=0.2)]
    A = AmbiguityModel.from_laws(pm, alphas=[0.1, 0.0])
    u = Utility.exponential(1.0)
    lim = variational_premium_limit(A, u, 0.0)
    closed = exponential_variational_premium_limit(A, 1.0, 0.0)
    hand = min(0.0 + 0.1, 0.2 + 0.0) - (-math.log(1 - 0.1))
    pi_n = variational_premium(A, u, N_BIG, 0.0)
    zero = AmbiguityModel.from_laws(pm)
    lim0 = variational_premium_limit(zero, u, 0.0)
    pi0 = variational_premium(zero, u, N_BIG, 0.0)
    ok = (abs(lim - hand) <= 1e-9 and abs(closed - hand) <= 1e-9 and abs(pi_n - hand) <= 1e-9
          and abs(lim - (-0.005361)) <= 5e-7 and abs(lim0) <= 1e-9 and abs(pi0) <= 1e-9)
    return report(7, ok, f"variational limit {lim:.10f} (hand value {hand:.10f}, printed -0.005361 to 6 dp), "
                         f"alpha=0 premium {pi0:.1e}")


def criterion_8():
    A = AmbiguityModel.from_laws([coin(1.0), coin(1.3)], betas=[1.0, 1.5])
    u, v = Utility.exponential(1.0), 1.0
    prem = np.array([homothetic_premium(A, u, n, v) for n in POW2])
    b = homothetic_rate_bounds(A, u, v)
    final = N_BIG * prem[-1]
    mono = bool(np.all(np.diff(prem) <= 1e-12))
    ok = mono and prem[-1] < 1e-3 and b.lower - 0.02 <= final <= b.upper + 0.02
    return report(8, ok, f"homothetic beta={{1,1.5}}: nonincreasing={mono}, pi(4096)={prem[-1]:.2e}, "
                         f"n*pi={final:.6f} in [{b.lower - 0.02:.4f}, {b.upper + 0.02:.4f}]")


def criterion_9():
    spaces = [
        SampleSpace(("a", "b"), [2.0, 0.5], [[0.5, 0.5], [0.2, 0.8]], alphas=[0.0, 0.05], betas=[1.0, 1.3]),
        SampleSpace(("a", "b", "c"), [3.0, 1.0, 0.4], [[0.2, 0.5, 0.3], [0.4, 0.4, 0.2]], alphas=[0.1, 0.0], betas=[1.0, 1.2]),
        SampleSpace(("a", "b", "c", "d"), [4.0, 2.0, 1.0, 0.25], [[0.25] * 4, [0.1, 0.2, 0.3, 0.4]], alphas=[0.03, 0.0], betas=[1.0, 1.1]),
    ]
    u = Utility.exponential(1.0)
    worst = math.inf
    runs = 0
    for si, s in enumerate(spaces):
        for kind in CRITERIA:
            for n in (2, 3):
                for ui, w in enumerate((u, Utility.log())):
                    worst = min(worst, pareto_search(s, Criterion(kind, w), n, 10_000, seed=100 * si + 10 * ui + n).min_gap)
                    runs += 1
    two = SampleSpace(("up", "down"), [2.0, 0.0], [[0.5, 0.5]])
    gap = pareto_gap(two, Criterion("expected-utility", u), Allocation([[2.0, 0.0], [0.0, 0.0]]))
    hand = 2 * 0.5 * (1 - math.exp(-1)) - 0.5 * (1 - math.exp(-2))
    ok = worst >= -1e-10 and abs(gap - hand) <= 1e-9 and abs(gap - 0.199789) <= 1e-6
    return report(9, ok, f"{runs} searches (exp and log) x 1e4 trials: min gap {worst:.2e} >= -1e-10; two-atom gap {gap:.10f} "
                         f"(hand value {hand:.10f}; printed 0.199789 to 6 dp)")


def criterion_10():
    rng = np.random.default_rng(7)
    worst = 0.0
    old = dist._DIRECT_CONV_LIMIT
    try:
        for limit in (old, 0):
            dist._DIRECT_CONV_LIMIT = limit
            for size in range(1, 9):
                for n in range(1, 17):
                    p = rng.random(size) + 0.01
                    p /= p.sum()
                    d = LatticeDistribution(0.0, 1.0, p)
                    got = convolve_power(d, n).probs
                    worst = max(worst, float(np.max(np.abs(got - np.array(dp_sum_law(p.tolist(), n))))))
    finally:
        dist._DIRECT_CONV_LIMIT = old
    within = 0
    for case in range(20):
        u, d, v = _random_case(np.random.default_rng(1000 + case))
        n = [1, 4, 16, 64][case % 4]
        est = certainty_equivalent_estimate(u, d, n, v, Engine.monte_carlo(20_000, case))
        exact = certainty_equivalent(u, d, n, v)
        within += abs(est.value - exact) <= 4 * est.stderr + 1e-12
    ok = worst <= 1e-10 and within == 20
    return report(10, ok, f"direct and FFT power vs DP oracle max abs {worst:.1e} <= 1e-10; MC within 4 SE on {within}/20 cases")


def criterion_11():
    gamma = 1.0
    rep = dependent_sequence_report(gamma)
    odd_tail = [r.n_gap for r in rep.rows if r.n % 2][-1]
    even_tail = [r.n_gap for r in rep.rows if not r.n % 2][-1]
    ok = rep.verdict == "fail" and abs(odd_tail) < gamma / 2 and even_tail == 0.0
    return report(11, ok, f"dependent sequence: n*gap odd tail {odd_tail:.4f}, even tail {even_tail}, i.i.d. constant {gamma / 2}; "
                          f"verdict {rep.verdict}")


ALL = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
       criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("check", ALL, ids=lambda f: f.__name__)
def test_acceptance(check):
    assert check()


if __name__ == "__main__":
    results = [check() for check in ALL]
    raise SystemExit(0 if all(results) else 1)
