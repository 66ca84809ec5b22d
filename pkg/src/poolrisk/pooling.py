"""Brute-force checks that proportional sharing is Pareto optimal.

A :class:`SampleSpace` is a small explicit probability space: a handful of
atoms, an aggregate endowment ``W`` per atom, and one probability vector per
candidate model (one vector for the classical case).  An allocation splits
``W`` atom by atom among ``n`` agents.  The proportional rule gives every agent
``W / n``; :func:`pareto_gap` measures how much total criterion value any other
allocation loses against it, and :func:`pareto_search` looks for a
counterexample among random allocations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvariantError
from .utility import Utility

CRITERIA = ("expected-utility", "robust-ce", "homothetic", "variational")
ALLOCATION_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SampleSpace:
    atoms: tuple
    endowment: np.ndarray
    model_weights: np.ndarray
    alphas: np.ndarray = None
    betas: np.ndarray = None

    def __post_init__(self):
        w = np.atleast_2d(np.asarray(self.model_weights, dtype=float))
        W = np.asarray(self.endowment, dtype=float).ravel()
        atoms = tuple(self.atoms)
        if len(atoms) != W.size or w.shape[1] != W.size:
            raise InvariantError(
                f"{len(atoms)} atoms, {W.size} endowment entries and weights of width {w.shape[1]} must agree"
            )
        if not np.all(np.isfinite(W)):
            raise InvariantError("endowment must be finite")
        for q, row in enumerate(w):
            if np.any(row < 0):
                raise InvariantError(f"models[{q}].weights contain a negative entry")
            if abs(row.sum() - 1.0) > 1e-12:
                raise InvariantError(f"models[{q}].weights sum to {row.sum()!r}, expected 1")
        k = w.shape[0]
        alphas = np.zeros(k) if self.alphas is None else np.asarray(self.alphas, dtype=float).ravel()
        betas = np.ones(k) if self.betas is None else np.asarray(self.betas, dtype=float).ravel()
        if alphas.size != k or betas.size != k:
            raise InvariantError("one alpha and one beta per model are required")
        if np.any(alphas < 0) or abs(alphas.min()) > 1e-12:
            raise InvariantError(f"alphas must be >= 0 with min 0, got {alphas.tolist()}")
        if np.any(betas < 1) or abs(betas.min() - 1.0) > 1e-12:
            raise InvariantError(f"betas must be >= 1 with min 1, got {betas.tolist()}")
        for name, arr in (("endowment", W), ("model_weights", w), ("alphas", alphas), ("betas", betas)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "atoms", atoms)

    @property
    def n_models(self) -> int:
        return self.model_weights.shape[0]


@dataclass(frozen=True, eq=False)
class Allocation:
    """Payoffs per agent (rows) and atom (columns)."""

    shares: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "shares", np.atleast_2d(np.asarray(self.shares, dtype=float)))

    @property
    def agents(self) -> int:
        return self.shares.shape[0]

    def check_full(self, space: SampleSpace) -> None:
        err = np.abs(self.shares.sum(axis=0) - space.endowment).max()
        if err > ALLOCATION_TOL * max(1.0, np.abs(space.endowment).max()):
            raise InvariantError(f"allocation does not sum to the endowment (max error {err:.3e})")


@dataclass(frozen=True)
class Criterion:
    kind: str
    utility: Utility

    def __post_init__(self):
        if self.kind not in CRITERIA:
            raise InvariantError(f"unknown criterion {self.kind!r}; expected one of {CRITERIA}")


def criterion_value(space: SampleSpace, crit: Criterion, payoffs) -> np.ndarray | float:
    """Criterion value of payoff vectors over the atoms (last axis).

    * ``expected-utility``: ``E[u(Y)]`` under the first model
    * ``robust-ce``: ``min_Q u^{-1}(E_Q[u(Y)]) + alpha(Q)``
    * ``homothetic``: ``min_Q beta(Q) E_Q[u(Y)]``
    * ``variational``: ``min_Q E_Q[u(Y)] + alpha(Q)``
    """
    Y = np.asarray(payoffs, dtype=float)
    u = crit.utility
    models = range(1) if crit.kind == "expected-utility" else range(space.n_models)
    per_model = []
    for q in models:
        w = space.model_weights[q]
        mask = w > 0
        if crit.kind == "robust-ce":
            val = u.certainty_equivalent_of(Y[..., mask], w[mask]) + space.alphas[q]
        else:
            val = u.expected_utility(Y[..., mask], w[mask])
            if crit.kind == "homothetic":
                val = space.betas[q] * val
            elif crit.kind == "variational":
                val = val + space.alphas[q]
        per_model.append(np.asarray(val, dtype=float))
    out = np.min(np.stack(per_model), axis=0)
    return out if out.ndim else float(out)


def proportional_allocation(space: SampleSpace, n: int) -> Allocation:
    if n < 1:
        raise InvariantError(f"need at least one agent, got {n}")
    return Allocation(np.tile(space.endowment / n, (n, 1)))


def _reference(space: SampleSpace, crit: Criterion, n: int) -> float:
    ref = criterion_value(space, crit, space.endowment / n)
    if not math.isfinite(ref):
        raise DomainError(f"W/{n} is outside the domain of {crit.utility.spec()}")
    return ref


def pareto_gap(space: SampleSpace, crit: Criterion, allocation: Allocation) -> float:
    """``n * crit(W / n) - sum_i crit(Y_i)``; ``+inf`` if some share leaves the utility domain."""
    allocation.check_full(space)
    n = allocation.agents
    ref = _reference(space, crit, n)
    vals = np.atleast_1d(criterion_value(space, crit, allocation.shares))
    if np.any(np.isneginf(vals)):
        return math.inf
    # fsum of n equal terms rounds like n * ref, so the proportional rule scores exactly 0
    return n * ref - math.fsum(vals.tolist())


@dataclass(frozen=True)
class SearchResult:
    min_gap: float
    worst_allocation: Allocation
    trials: int
    gaps: np.ndarray = field(repr=False, default=None)


def random_allocations(space: SampleSpace, n: int, count: int, rng: np.random.Generator, cash: bool) -> np.ndarray:
    """``count`` random full allocations, shape ``(count, n, atoms)``.

    Shares are convex combinations of ``1/n`` and a Dirichlet draw per atom, so
    they stay positive wherever ``W`` is.  With ``cash=True`` zero-sum cash
    transfers are added on top.
    """
    k = space.endowment.size
    eps = rng.random((count, 1, 1)) ** 2
    dirichlet = rng.dirichlet(np.ones(n), size=(count, k)).transpose(0, 2, 1)
    shares = (1.0 - eps) / n + eps * dirichlet
    Y = shares * space.endowment
    if cash:
        scale = max(float(np.abs(space.endowment).mean()), 1.0)
        m = rng.normal(size=(count, n, 1)) * scale * rng.random((count, 1, 1))
        m -= m.mean(axis=1, keepdims=True)
        Y = Y + m
    return Y


def pareto_search(
    space: SampleSpace, crit: Criterion, n: int, trials: int, seed: int, chunk: int = 4096
) -> SearchResult:
    """Smallest Pareto gap found over ``trials`` seeded random allocations.

    Cash transfers are only used when ``dom u`` is the whole real line; for
    power and log utilities allocations are purely multiplicative.
    """
    if trials < 1:
        raise InvariantError(f"trials must be >= 1, got {trials}")
    ref = _reference(space, crit, n)
    rng = np.random.default_rng(seed)
    cash = not crit.utility.bounded_domain
    gaps = np.empty(trials)
    worst = None
    best = math.inf
    for lo in range(0, trials, chunk):
        hi = min(trials, lo + chunk)
        Y = random_allocations(space, n, hi - lo, rng, cash)
        vals = np.asarray(criterion_value(space, crit, Y))
        with np.errstate(invalid="ignore"):
            g = n * ref - vals.sum(axis=1)
        g = np.where(np.any(np.isneginf(vals), axis=1), np.inf, g)
        gaps[lo:hi] = g
        i = int(np.argmin(g))
        if g[i] < best:
            best = float(g[i])
            worst = Allocation(Y[i])
    return SearchResult(best, worst, trials, gaps)
