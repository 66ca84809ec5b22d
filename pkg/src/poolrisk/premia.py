"""Robust risk premia under homothetic and variational preferences.

Homothetic preferences rank a payoff ``X`` by ``min_Q beta(Q) E_Q[u(X)]``;
variational preferences by ``min_Q E_Q[u(X)] + alpha(Q)``.  The matching
premium compares the robust expectation of the pool average with the
certainty equivalent of the criterion.

Note on signs: ``beta`` multiplies utility levels, which are negative for the
exponential family below zero wealth.  Nothing forbids this, but a ``beta > 1``
then makes a model look *worse*, not better.
"""

from __future__ import annotations

import math

import numpy as np

from .ambiguity import AmbiguityModel, RateBounds, RobustValue, check_domain, robust_expectation, robust_min
from .dist import mean_law, moments
from .errors import DomainError, ImageError
from .utility import Utility

KINDS = ("homothetic", "variational")


def _eu(u: Utility, law, n: int, v: float) -> float:
    atoms, probs = mean_law(law, n)
    return float(u.expected_utility(v + atoms, probs))


# -- homothetic ---------------------------------------------------------------


def homothetic_expectation(A: AmbiguityModel, v: float = 0.0) -> RobustValue:
    """``W(v + X_1) = min_Q E_Q[v + X_1] beta(Q)``; the same for every pool size."""
    return robust_min(A, lambda i, e: (v + moments(e.law).mean) * e.beta)


def homothetic_criterion(A: AmbiguityModel, u: Utility, n: int, v: float = 0.0) -> RobustValue:
    """Utility-level criterion ``min_Q beta(Q) E_Q[u(v + S_n / n)]``."""
    check_domain(A, u, v)
    return robust_min(A, lambda i, e: e.beta * _eu(u, e.law, n, v))


def homothetic_certainty_equivalent(A: AmbiguityModel, u: Utility, n: int, v: float = 0.0) -> RobustValue:
    """``u^{-1}(min_Q beta(Q) E_Q[u(v + S_n / n)])``.

    Raises ImageError if the reweighted minimum leaves ``Im u``.
    """
    c = homothetic_criterion(A, u, n, v)
    return RobustValue(float(u.inverse(c.value)), c.argmin_index)


def homothetic_premium(A: AmbiguityModel, u: Utility, n: int, v: float = 0.0) -> float:
    return homothetic_expectation(A, v).value - homothetic_certainty_equivalent(A, u, n, v).value


def homothetic_limit(A: AmbiguityModel, u: Utility, v: float = 0.0) -> RobustValue:
    """Large-pool limit of the homothetic certainty equivalent, ``u^{-1}(min_Q beta(Q) u(v + E_Q X_1))``.

    It coincides with ``W(v + X_1)`` (so the premium vanishes) when the
    minimizing model carries ``beta = 1`` in both criteria, or ``u`` is linear.
    """
    c = robust_min(A, lambda i, e: e.beta * float(u.evaluate(v + moments(e.law).mean)))
    return RobustValue(float(u.inverse(c.value)), c.argmin_index)


def homothetic_premium_limit(A: AmbiguityModel, u: Utility, v: float = 0.0) -> float:
    return homothetic_expectation(A, v).value - homothetic_limit(A, u, v).value


def homothetic_rate_bounds(A: AmbiguityModel, u: Utility, v: float = 0.0) -> RateBounds:
    """Bounds on ``lim n * pi``: ``0.5 R((v + E_Q X_1) beta) var_Q(X_1) beta``.

    Upper takes the sup over the set, lower evaluates at the model attaining
    ``W(v + X_1)``.
    """
    terms = []
    for e in A.entries:
        m = moments(e.law)
        x = (v + m.mean) * e.beta
        if u.bounded_domain and not x > 0:
            raise DomainError(f"(v + E_Q X_1) beta = {x} is outside the interior of dom u")
        terms.append(0.5 * float(u.absolute_risk_aversion(x)) * m.variance * e.beta)
    star = homothetic_expectation(A, v).argmin_index
    return RateBounds(terms[star], max(terms), star)


# -- variational ----------------------------------------------------------------


def variational_criterion(A: AmbiguityModel, u: Utility, n: int, v: float = 0.0) -> RobustValue:
    """``C(v + S_n / n) = min_Q E_Q[u(v + S_n / n)] + alpha(Q)``."""
    check_domain(A, u, v)
    return robust_min(A, lambda i, e: _eu(u, e.law, n, v) + e.alpha)


def variational_certainty_equivalent(A: AmbiguityModel, u: Utility, n: int, v: float = 0.0) -> RobustValue:
    c = variational_criterion(A, u, n, v)
    return RobustValue(float(u.inverse(c.value)), c.argmin_index)


def variational_limit(A: AmbiguityModel, u: Utility, v: float = 0.0) -> RobustValue:
    """``V(v + X_1) = u^{-1}(min_Q u(v + E_Q X_1) + alpha(Q))``."""
    c = robust_min(A, lambda i, e: float(u.evaluate(v + moments(e.law).mean)) + e.alpha)
    return RobustValue(float(u.inverse(c.value)), c.argmin_index)


def variational_premium(A: AmbiguityModel, u: Utility, n: int, v: float = 0.0) -> float:
    """``v + U(X_1) - V_P(v + S_n / n)``."""
    return v + robust_expectation(A, 0.0).value - variational_certainty_equivalent(A, u, n, v).value


def variational_premium_limit(A: AmbiguityModel, u: Utility, v: float = 0.0) -> float:
    """``U(v + X_1) - V(v + X_1)``; may be negative for nontrivial penalties."""
    return robust_expectation(A, v).value - variational_limit(A, u, v).value


def exponential_variational_premium_limit(A: AmbiguityModel, gamma: float, v: float = 0.0) -> float:
    """Closed form of the limiting premium for ``u(x) = 1 - exp(-gamma x)``.

    ``v + min_Q (E_Q X_1 + alpha) + (1/gamma) log max_Q (exp(-gamma (E_Q X_1 + v)) - alpha)``
    """
    means = np.array([moments(e.law).mean for e in A.entries])
    alphas = A.alphas
    inner = float(np.max(np.exp(-gamma * (means + v)) - alphas))
    if not inner > 0:
        raise ImageError(f"max_Q exp(-gamma (E_Q X_1 + v)) - alpha = {inner} leaves the image of u")
    return v + float(np.min(means + alphas)) + math.log(inner) / gamma


def variational_rate_bounds(A: AmbiguityModel, u: Utility, v: float = 0.0) -> RateBounds:
    """Lower bound on ``liminf n * (V(v + X_1) - V_P(v + S_n / n))``.

    At the model ``Q*`` attaining ``V``:
    ``-u''(m) / u'(u^{-1}(u(m) + alpha(Q*))) * var(Q*) / 2`` with ``m = v + E_{Q*} X_1``.
    Only the existence of an upper constant is known, so ``upper`` is None.
    """
    star = variational_limit(A, u, v).argmin_index
    e = A.entries[star]
    mom = moments(e.law)
    m = v + mom.mean
    if u.bounded_domain and not m > 0:
        raise DomainError(f"v + E_Q* X_1 = {m} is outside the interior of dom u")
    shifted = float(u.inverse(float(u.evaluate(m)) + e.alpha))
    lower = -float(u.derivative(m, 2)) / float(u.derivative(shifted, 1)) * mom.variance / 2.0
    return RateBounds(lower, None, star)
