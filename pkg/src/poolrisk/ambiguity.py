"""Finite ambiguity sets and the robust functionals built on them.

Each candidate model is stored as the law of a single risk ``X_1`` together
with an additive penalty ``alpha`` and a multiplicative penalty ``beta``.
The risks are i.i.d. under every candidate, so all functionals only need the
per-model law of ``S_n / n``.  Infima and suprema are over a finite list and
are therefore attained; ties resolve to the lowest index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .classical import certainty_equivalent, entropic_risk, pratt_limit
from .dist import LatticeDistribution, moments
from .errors import AlignmentError, DomainError, InvariantError
from .utility import Utility

NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class ModelEntry:
    law: LatticeDistribution
    alpha: float = 0.0
    beta: float = 1.0


@dataclass(frozen=True)
class RobustValue:
    """Optimal value over the ambiguity set and the index of the attaining model."""

    value: float
    argmin_index: int


class AmbiguityModel:
    """Nonempty finite list of candidate laws with normalized penalties.

    Invariants: ``min alpha = 0``, ``min beta = 1``, all penalties finite,
    and all laws aligned on one lattice step.
    """

    def __init__(self, entries: Sequence[ModelEntry]):
        entries = tuple(entries)
        if not entries:
            raise InvariantError("ambiguity set must contain at least one model")
        for i, e in enumerate(entries):
            if not (math.isfinite(e.alpha) and e.alpha >= 0):
                raise InvariantError(f"models[{i}].alpha = {e.alpha!r} must be finite and >= 0")
            if not (math.isfinite(e.beta) and e.beta >= 1):
                raise InvariantError(f"models[{i}].beta = {e.beta!r} must be finite and >= 1")
        alphas = [e.alpha for e in entries]
        betas = [e.beta for e in entries]
        if min(alphas) > NORMALIZATION_TOL:
            raise InvariantError(
                f"alpha must be normalized to min 0, got min {min(alphas)!r}; "
                f"subtract it from every entry (alphas {alphas})"
            )
        if min(betas) - 1.0 > NORMALIZATION_TOL:
            raise InvariantError(
                f"beta must be normalized to min 1, got min {min(betas)!r}; "
                f"divide every entry by it (betas {betas})"
            )
        step = entries[0].law.step
        origin = entries[0].law.origin
        for i, e in enumerate(entries[1:], start=1):
            if not math.isclose(e.law.step, step, rel_tol=1e-12):
                raise AlignmentError(f"models[{i}] has step {e.law.step}, expected common step {step}")
            k = (e.law.origin - origin) / step
            if abs(k - round(k)) > 1e-9:
                raise AlignmentError(f"models[{i}] origin {e.law.origin} is off the common grid")
        self.entries = entries

    @classmethod
    def from_laws(cls, laws, alphas=None, betas=None) -> "AmbiguityModel":
        laws = list(laws)
        alphas = [0.0] * len(laws) if alphas is None else list(alphas)
        betas = [1.0] * len(laws) if betas is None else list(betas)
        if not len(laws) == len(alphas) == len(betas):
            raise InvariantError("laws, alphas and betas must have equal length")
        return cls([ModelEntry(l, float(a), float(b)) for l, a, b in zip(laws, alphas, betas)])

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __repr__(self) -> str:
        return f"AmbiguityModel({list(self.entries)!r})"

    @property
    def laws(self) -> list[LatticeDistribution]:
        return [e.law for e in self.entries]

    @property
    def alphas(self) -> np.ndarray:
        return np.array([e.alpha for e in self.entries])

    @property
    def betas(self) -> np.ndarray:
        return np.array([e.beta for e in self.entries])

    def with_alphas(self, alphas) -> "AmbiguityModel":
        return AmbiguityModel([ModelEntry(e.law, float(a), e.beta) for e, a in zip(self.entries, alphas)])

    def with_betas(self, betas) -> "AmbiguityModel":
        return AmbiguityModel([ModelEntry(e.law, e.alpha, float(b)) for e, b in zip(self.entries, betas)])

    def essential_min(self) -> float:
        return min(moments(e.law).essential_min for e in self.entries)


def _argmin(values: Sequence[float]) -> RobustValue:
    # np.argmin returns the first minimizer, which is the tie rule
    i = int(np.argmin(np.asarray(values, dtype=float)))
    return RobustValue(float(values[i]), i)


def _argmax(values: Sequence[float]) -> RobustValue:
    i = int(np.argmax(np.asarray(values, dtype=float)))
    return RobustValue(float(values[i]), i)


def robust_min(A: AmbiguityModel, objective: Callable[[int, ModelEntry], float]) -> RobustValue:
    """Minimize ``objective(i, entry)`` over the set, lowest index on ties."""
    return _argmin([objective(i, e) for i, e in enumerate(A.entries)])


def check_domain(A: AmbiguityModel, u: Utility, v: float) -> None:
    lo = v + A.essential_min()
    if u.bounded_domain and not lo > 0:
        raise DomainError(f"v + essinf over the set = {lo} is outside dom u")


def robust_expectation(A: AmbiguityModel, v: float = 0.0) -> RobustValue:
    """``min_Q E_Q[v + X_1] + alpha(Q)``."""
    return robust_min(A, lambda i, e: v + moments(e.law).mean + e.alpha)


def robust_certainty_equivalent(A: AmbiguityModel, u: Utility, n: int, v: float = 0.0) -> RobustValue:
    """``min_Q U_Q(v + S_n / n) + alpha(Q)`` with ``U_Q`` the certainty equivalent under ``Q``."""
    check_domain(A, u, v)
    return robust_min(A, lambda i, e: certainty_equivalent(u, e.law, n, v) + e.alpha)


def entropy_coherent_risk(A: AmbiguityModel, gamma: float, n: int = 1) -> RobustValue:
    """``max_Q rho_{Q,gamma}(S_n / n)``; penalties are ignored.

    ``argmin_index`` holds the maximizing model.
    """
    return _argmax([entropic_risk(e.law, gamma, n) for e in A.entries])


def entropy_convex_risk(A: AmbiguityModel, gamma: float, n: int = 1) -> RobustValue:
    """``max_Q rho_{Q,gamma}(S_n / n) - alpha(Q)``."""
    if float(A.alphas.min()) > NORMALIZATION_TOL:
        raise InvariantError("entropy convex risk needs min alpha = 0")
    return _argmax([entropic_risk(e.law, gamma, n) - e.alpha for e in A.entries])


@dataclass(frozen=True)
class RateBounds:
    """Asymptotic bounds on ``n * gap``.

    ``upper`` is ``None`` when only its existence is known; reports then use an
    empirical ceiling instead.
    """

    lower: float
    upper: float | None
    attaining_index: int


def robust_rate_bounds(A: AmbiguityModel, u: Utility, v: float = 0.0) -> RateBounds:
    """Bounds on ``lim n * (U(v + X_1) - U_P(v + S_n / n))``.

    Upper: half the largest ``R(v + E_Q X_1) * var_Q(X_1)`` over the set.
    Lower: the same expression at the model attaining the robust expectation.
    """
    per_model = [pratt_limit(u, e.law, v) for e in A.entries]
    star = robust_expectation(A, v).argmin_index
    return RateBounds(per_model[star], max(per_model), star)
