"""Certainty equivalents and risk premia of the pool average under one model.

With ``n`` identical agents sharing the aggregate ``S_n`` proportionally, each
holds ``S_n / n``.  Everything here takes the single-risk law ``d`` and the
pool size ``n`` and derives the law of ``S_n / n`` internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dist import LatticeDistribution, mean_law, moments, sample_means, sum_law
from .errors import DomainError, InvariantError
from .utility import Utility


@dataclass(frozen=True)
class Engine:
    """How expectations of ``S_n / n`` are evaluated.

    ``mode="exact"`` uses lattice convolution; ``mode="monte-carlo"`` draws
    ``count`` seeded samples of ``S_n / n``.
    """

    mode: str = "exact"
    count: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("exact", "monte-carlo"):
            raise InvariantError(f"unknown engine mode {self.mode!r}")
        if self.mode == "monte-carlo" and self.count < 1:
            raise InvariantError("monte-carlo engine needs count >= 1")

    @classmethod
    def monte_carlo(cls, count: int, seed: int) -> "Engine":
        return cls("monte-carlo", int(count), int(seed))

    @property
    def exact(self) -> bool:
        return self.mode == "exact"


EXACT = Engine()


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float


def _mc_ce(u: Utility, d: LatticeDistribution, n: int, v: float, engine: Engine) -> Estimate:
    x = v + sample_means(d, n, engine.count, engine.seed)
    m = x.size
    if u.family == "exponential":
        g = u.param
        # E[exp(-g x)] relative to its largest term, for stability
        a = -g * x
        amax = a.max()
        w = np.exp(a - amax)
        mw = w.mean()
        ce = -(amax + math.log(mw)) / g
        se_w = w.std(ddof=1) / math.sqrt(m) if m > 1 else 0.0
        return Estimate(ce, se_w / (g * mw))
    uv = np.asarray(u.evaluate(x))
    if np.any(np.isneginf(uv)):
        return Estimate(-math.inf, 0.0)
    mu = float(uv.mean())
    ce = float(u.inverse(mu))
    se_u = float(uv.std(ddof=1)) / math.sqrt(m) if m > 1 else 0.0
    slope = u.derivative(ce, 1) if (not u.bounded_domain or ce > 0) else math.inf
    return Estimate(ce, se_u / slope)


def certainty_equivalent_estimate(
    u: Utility, d: LatticeDistribution, n: int, v: float = 0.0, engine: Engine = EXACT
) -> Estimate:
    """Certainty equivalent with a standard error (zero for the exact engine).

    The Monte-Carlo standard error uses the delta method through ``u^{-1}``.
    """
    if engine.exact:
        return Estimate(certainty_equivalent(u, d, n, v), 0.0)
    return _mc_ce(u, d, n, v, engine)


def certainty_equivalent(u: Utility, d: LatticeDistribution, n: int, v: float = 0.0, engine: Engine = EXACT) -> float:
    """``U(v + S_n / n) = u^{-1}(E[u(v + S_n / n)])``; ``-inf`` if the expectation is ``-inf``."""
    if not engine.exact:
        return _mc_ce(u, d, n, v, engine).value
    atoms, probs = mean_law(d, n)
    if probs.size == 1:
        return float(v + atoms[0])
    return float(u.certainty_equivalent_of(v + atoms, probs))


def expected_utility(u: Utility, d: LatticeDistribution, n: int, v: float = 0.0) -> float:
    """``E[u(v + S_n / n)]`` (exact engine)."""
    atoms, probs = mean_law(d, n)
    return float(u.expected_utility(v + atoms, probs))


def risk_premium(u: Utility, d: LatticeDistribution, n: int, v: float = 0.0, engine: Engine = EXACT) -> float:
    """``v + E[X_1] - U(v + S_n / n)``; ``+inf`` when the certainty equivalent is ``-inf``."""
    ce = certainty_equivalent(u, d, n, v, engine)
    if ce == -math.inf:
        return math.inf
    return v + moments(d).mean - ce


def entropic_risk_of(atoms: np.ndarray, probs: np.ndarray, gamma: float) -> float:
    """``(1/gamma) log E[exp(-gamma X)]`` for a finite law."""
    if not gamma > 0:
        raise InvariantError(f"gamma must be positive, got {gamma}")
    return -float(Utility.exponential(gamma).certainty_equivalent_of(atoms, probs))


def entropic_risk(d: LatticeDistribution, gamma: float, n: int = 1) -> float:
    """Entropic risk of the pool average, ``rho_gamma(S_n / n)``.

    Computed as minus the exponential certainty equivalent, so the two agree
    bit for bit.
    """
    if not gamma > 0:
        raise InvariantError(f"gamma must be positive, got {gamma}")
    return -certainty_equivalent(Utility.exponential(gamma), d, n)


def entropic_risk_of_sum(d: LatticeDistribution, gamma: float, n: int) -> float:
    """Entropic risk of the aggregate, ``rho_gamma(S_n)``."""
    atoms, probs = sum_law(d, n)
    return entropic_risk_of(atoms, probs, gamma)


def gaussian_entropic_ce(mu: float, sigma: float, gamma: float) -> float:
    """Exponential-utility certainty equivalent of ``N(mu, sigma^2)``."""
    return mu - gamma * sigma**2 / 2.0


def pratt_limit(u: Utility, d: LatticeDistribution, v: float = 0.0) -> float:
    """Limit of ``n * pi(v, S_n / n)``: half the risk aversion at ``v + E[X_1]`` times the variance."""
    m = moments(d)
    x = v + m.mean
    if u.bounded_domain and not x > 0:
        raise DomainError(f"v + E[X_1] = {x} is outside the interior of dom u")
    return 0.5 * u.absolute_risk_aversion(x) * m.variance


def sqrt_n_bound(d: LatticeDistribution) -> float:
    """Upper bound ``sigma(X_1)`` on ``limsup sqrt(n) * pi``."""
    return moments(d).std
