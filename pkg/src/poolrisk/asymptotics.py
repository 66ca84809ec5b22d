"""Expanding-pool convergence reports.

:func:`run_rates` evaluates one of four functionals over a grid of pool sizes
and records the gap to its limit, scaled by ``n`` and ``sqrt(n)``.
:func:`check_bounds` turns a report into a verdict against the theoretical
rate bounds.

Gap per kind:

* ``classical``: risk premium ``v + E[X_1] - U(v + S_n/n)``
* ``robust-ce``: ``U(v + X_1) - U_P(v + S_n/n)``
* ``homothetic``: premium ``W(v + X_1) - W_P(v + S_n/n)``
* ``variational``: ``V(v + X_1) - V_P(v + S_n/n)``; the premium itself tends
  to ``U(v + X_1) - V(v + X_1)``, reported as ``target_limit``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import classical, premia
from .ambiguity import AmbiguityModel, robust_certainty_equivalent, robust_expectation, robust_rate_bounds
from .classical import EXACT, Engine
from .dist import LatticeDistribution
from .errors import InvariantError
from .utility import Utility

KINDS = ("classical", "robust-ce", "homothetic", "variational")
DEFAULT_GRID = tuple(2**k for k in range(13))

DEFAULT_TOL_REL = 0.02
DEFAULT_TOL_ABS = 0.01
MONOTONE_TOL = 1e-12
SQRT_BOUND_SLACK = 1e-6
SQRT_BOUND_FROM_N = 64
AITKEN_FLOOR = 1e-14


@dataclass(frozen=True)
class Problem:
    kind: str
    utility: Utility
    wealth: float = 0.0
    law: LatticeDistribution | None = None
    ambiguity: AmbiguityModel | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvariantError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "classical" and self.law is None:
            raise InvariantError("classical problems need a law")
        if self.kind != "classical" and self.ambiguity is None:
            raise InvariantError(f"{self.kind} problems need an ambiguity set")


@dataclass(frozen=True)
class Row:
    n: int
    value: float
    gap: float
    n_gap: float
    sqrtn_gap: float
    stderr: float = 0.0


@dataclass
class ConvergenceReport:
    kind: str
    rows: list[Row]
    limit_estimate: float
    target_limit: float
    bound_lower: float
    bound_upper: float | None
    sqrt_bound: float | None = None
    verdict: str = "inconclusive"
    notes: list[str] = field(default_factory=list)

    @property
    def upper_is_empirical(self) -> bool:
        return self.bound_upper is None

    @property
    def empirical_ceiling(self) -> float:
        return max(r.n_gap for r in self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])


def aitken_limit(values) -> float:
    """Aitken delta-squared extrapolation from the last three entries.

    Falls back to the last entry when the second difference is below 1e-14
    in magnitude.
    """
    values = list(values)
    if len(values) < 3:
        raise InvariantError(f"aitken_limit needs at least 3 values, got {len(values)}")
    x0, x1, x2 = (float(v) for v in values[-3:])
    denom = x2 - 2.0 * x1 + x0
    if not math.isfinite(denom) or abs(denom) < AITKEN_FLOOR:
        return x2
    return x2 - (x2 - x1) ** 2 / denom


def _validate_grid(n_grid) -> list[int]:
    grid = [int(n) for n in n_grid]
    if not grid:
        raise InvariantError("n_grid must be nonempty")
    if grid[0] < 1 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvariantError("n_grid must be strictly increasing positive integers")
    return grid


def _make_row(n: int, value: float, gap: float, stderr: float = 0.0) -> Row:
    return Row(n, value, gap, n * gap, math.sqrt(n) * gap, stderr)


def run_rates(problem: Problem, n_grid=DEFAULT_GRID, engine: Engine = EXACT) -> ConvergenceReport:
    """Evaluate ``problem`` over ``n_grid`` and attach limits and bounds."""
    grid = _validate_grid(n_grid)
    u, v = problem.utility, problem.wealth
    rows: list[Row] = []
    sqrt_bound = None
    target = 0.0
    if problem.kind != "classical" and not engine.exact:
        raise InvariantError("the Monte-Carlo engine is only available for classical problems")

    if problem.kind == "classical":
        d = problem.law
        mean = classical.moments(d).mean
        for n in grid:
            est = classical.certainty_equivalent_estimate(u, d, n, v, engine)
            gap = math.inf if est.value == -math.inf else v + mean - est.value
            rows.append(_make_row(n, est.value, gap, est.stderr))
        pratt = classical.pratt_limit(u, d, v)
        lower, upper = pratt, pratt
        sqrt_bound = classical.sqrt_n_bound(d)
    elif problem.kind == "robust-ce":
        A = problem.ambiguity
        top = robust_expectation(A, v).value
        for n in grid:
            val = robust_certainty_equivalent(A, u, n, v).value
            rows.append(_make_row(n, val, top - val))
        b = robust_rate_bounds(A, u, v)
        lower, upper = b.lower, b.upper
    elif problem.kind == "homothetic":
        A = problem.ambiguity
        top = premia.homothetic_expectation(A, v).value
        for n in grid:
            val = premia.homothetic_certainty_equivalent(A, u, n, v).value
            rows.append(_make_row(n, val, top - val))
        b = premia.homothetic_rate_bounds(A, u, v)
        lower, upper = b.lower, b.upper
    else:
        A = problem.ambiguity
        top = premia.variational_limit(A, u, v).value
        for n in grid:
            val = premia.variational_certainty_equivalent(A, u, n, v).value
            rows.append(_make_row(n, val, top - val))
        b = premia.variational_rate_bounds(A, u, v)
        lower, upper = b.lower, None
        target = premia.variational_premium_limit(A, u, v)

    n_gaps = [r.n_gap for r in rows]
    limit = aitken_limit(n_gaps) if len(n_gaps) >= 3 else n_gaps[-1]
    report = ConvergenceReport(problem.kind, rows, limit, target, lower, upper, sqrt_bound)
    report.verdict = check_bounds(report)
    return report


def _increments_not_shrinking(values: np.ndarray) -> bool:
    """Heuristic unboundedness flag over the last four grid points.

    True when the last three increments are all positive and none is less
    than 0.9 times its predecessor, i.e. the sequence is not settling.
    """
    if values.size < 4:
        return False
    inc = np.diff(values[-4:])
    if np.any(inc <= 0):
        return False
    return bool(np.all(inc[1:] >= 0.9 * inc[:-1]))


def check_bounds(report: ConvergenceReport, tol_rel: float = DEFAULT_TOL_REL, tol_abs: float = DEFAULT_TOL_ABS) -> str:
    """Verdict ``pass``/``fail``/``inconclusive`` for a report.

    Passing needs (i) the gap column nonincreasing in ``n``, (ii) the final
    ``n * gap`` inside ``[lower (1 - tol_rel) - tol_abs, upper (1 + tol_rel) + tol_abs]``
    (only the lower side when the upper bound is empirical), and (iii) for
    classical reports ``sqrt(n) * gap <= sigma(X_1) + 1e-6`` once ``n >= 64``.
    Monte-Carlo reports whose final ``n * stderr`` exceeds ``tol_abs`` are
    inconclusive.
    """
    notes = report.notes
    notes.clear()
    rows = report.rows
    gaps = report.column("gap")
    n_gaps = report.column("n_gap")
    final = rows[-1]
    noisy = any(r.stderr > 0 for r in rows)

    if noisy and final.n * final.stderr > tol_abs:
        notes.append(f"final n*stderr {final.n * final.stderr:.3g} exceeds tol_abs {tol_abs}")
        return "inconclusive"

    ok = True
    if not np.all(np.isfinite(gaps)):
        notes.append("gap column has non-finite entries")
        return "fail"
    if not noisy:
        slack = MONOTONE_TOL * (1.0 + np.abs(gaps[:-1]))
        if np.any(np.diff(gaps) > slack):
            k = int(np.argmax(np.diff(gaps) > slack))
            notes.append(f"gap increases from n={rows[k].n} to n={rows[k + 1].n}")
            ok = False

    lo = report.bound_lower * (1.0 - tol_rel) - tol_abs
    noise = 4.0 * final.n * final.stderr
    if final.n_gap < lo - noise:
        notes.append(f"final n*gap {final.n_gap:.6g} below lower bound {report.bound_lower:.6g}")
        ok = False
    if report.bound_upper is not None:
        hi = report.bound_upper * (1.0 + tol_rel) + tol_abs
        if final.n_gap > hi + noise:
            notes.append(f"final n*gap {final.n_gap:.6g} above upper bound {report.bound_upper:.6g}")
            ok = False
    elif _increments_not_shrinking(n_gaps):
        notes.append("n*gap keeps growing over the last grid points")
        ok = False

    if report.sqrt_bound is not None and not noisy:
        for r in rows:
            if r.n >= SQRT_BOUND_FROM_N and r.sqrtn_gap > report.sqrt_bound + SQRT_BOUND_SLACK:
                notes.append(f"sqrt(n)*gap {r.sqrtn_gap:.6g} exceeds sigma {report.sqrt_bound:.6g} at n={r.n}")
                ok = False
                break
    elif report.kind != "classical" and _increments_not_shrinking(report.column("sqrtn_gap")):
        notes.append("sqrt(n)*gap keeps growing over the last grid points")
        ok = False
    return "pass" if ok else "fail"


def dependent_sequence_report(gamma: float, n_grid=tuple(range(1, 65))) -> ConvergenceReport:
    """Report for ``X_i = (-1)^i X`` with ``X`` standard normal and exponential utility.

    The risks are identically distributed but not independent: ``S_n / n`` is
    ``-X / n`` for odd ``n`` and ``0`` for even ``n``, so the certainty
    equivalent is available in closed form.  The i.i.d. rate constant
    ``gamma / 2`` is reported as the bound that the curve fails to meet.
    """
    grid = _validate_grid(n_grid)
    rows = []
    for n in grid:
        sigma = 1.0 / n if n % 2 else 0.0
        ce = classical.gaussian_entropic_ce(0.0, sigma, gamma)
        rows.append(_make_row(n, ce, 0.0 - ce))
    n_gaps = [r.n_gap for r in rows]
    limit = aitken_limit(n_gaps) if len(n_gaps) >= 3 else n_gaps[-1]
    report = ConvergenceReport("classical", rows, limit, 0.0, gamma / 2.0, gamma / 2.0, sqrt_bound=1.0)
    report.verdict = check_bounds(report)
    return report
