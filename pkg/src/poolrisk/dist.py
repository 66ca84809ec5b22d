"""Exact arithmetic for laws on an arithmetic grid.

A :class:`LatticeDistribution` places probability ``probs[k]`` on the point
``origin + k * step``.  Sums of i.i.d. copies stay on the same grid, so the
law of ``S_n`` (and of the pool average ``S_n / n``) can be computed exactly
by repeated squaring of the probability vector.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Callable

import numpy as np
from scipy.signal import fftconvolve

from .errors import AlignmentError, InvariantError, SupportCapError

DEFAULT_SUPPORT_CAP = 2**20
SUPPORT_CAP_ENV = "POOLRISK_SUPPORT_CAP"

PROB_SUM_TOL = 1e-12
FFT_CLIP_TOL = 1e-14
# above this many multiply-adds a convolution goes through the FFT
_DIRECT_CONV_LIMIT = 2**25


def support_cap() -> int:
    """Current support cap, honouring the ``POOLRISK_SUPPORT_CAP`` override."""
    raw = os.environ.get(SUPPORT_CAP_ENV)
    if raw is None:
        return DEFAULT_SUPPORT_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise InvariantError(f"{SUPPORT_CAP_ENV}={raw!r} is not an integer") from exc
    if cap < 1:
        raise InvariantError(f"{SUPPORT_CAP_ENV} must be positive, got {cap}")
    return cap


@dataclass(frozen=True, eq=False)
class LatticeDistribution:
    """Law of one risk on the grid ``origin + k * step``."""

    origin: float
    step: float
    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float).ravel()
        origin = float(self.origin)
        step = float(self.step)
        if not (math.isfinite(step) and step > 0):
            raise InvariantError(f"step must be a positive finite number, got {self.step!r}")
        if not math.isfinite(origin):
            raise InvariantError(f"origin must be finite, got {self.origin!r}")
        if probs.size == 0:
            raise InvariantError("probs must be nonempty")
        if not np.all(np.isfinite(probs)):
            raise InvariantError("probs must be finite")
        if np.any(probs < 0):
            k = int(np.flatnonzero(probs < 0)[0])
            raise InvariantError(f"probs[{k}] = {probs[k]!r} is negative")
        total = float(probs.sum())
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise InvariantError(f"probs sum to {total!r}, expected 1 within {PROB_SUM_TOL:g}")
        probs.setflags(write=False)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "step", step)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def point_mass(cls, value: float, step: float = 1.0) -> "LatticeDistribution":
        return cls(value, step, np.array([1.0]))

    @classmethod
    def from_atoms(cls, values, probs, step: float | None = None) -> "LatticeDistribution":
        """Build a lattice law from explicit atoms.

        If ``step`` is omitted it is inferred as the (rational) greatest common
        divisor of the gaps between atoms.  Atoms that do not fall on the grid
        within ``1e-9`` relative to ``step`` raise :class:`AlignmentError`.
        """
        values = np.asarray(values, dtype=float).ravel()
        probs = np.asarray(probs, dtype=float).ravel()
        if values.shape != probs.shape or values.size == 0:
            raise InvariantError("values and probs must be nonempty and of equal length")
        lo = float(values.min())
        if step is None:
            step = _infer_step(values - lo)
        idx_float = (values - lo) / step
        idx = np.rint(idx_float).astype(np.int64)
        if np.any(np.abs(idx_float - idx) > 1e-9 * max(1.0, float(idx_float.max()))):
            raise AlignmentError(f"atoms {values.tolist()} do not lie on a grid with step {step}")
        out = np.zeros(int(idx.max()) + 1)
        np.add.at(out, idx, probs)
        return cls(lo, step, out)

    @property
    def support(self) -> np.ndarray:
        return self.origin + self.step * np.arange(self.probs.size)

    def trimmed(self) -> "LatticeDistribution":
        """Canonical form without leading or trailing zero-probability entries."""
        nz = np.flatnonzero(self.probs > 0)
        lo, hi = int(nz[0]), int(nz[-1])
        if lo == 0 and hi == self.probs.size - 1:
            return self
        return LatticeDistribution(self.origin + lo * self.step, self.step, self.probs[lo : hi + 1])

    def shifted(self, m: float) -> "LatticeDistribution":
        return LatticeDistribution(self.origin + m, self.step, self.probs)

    def scaled(self, c: float) -> "LatticeDistribution":
        """Law of ``c * X`` for ``c > 0``."""
        if not c > 0:
            raise InvariantError(f"scale must be positive, got {c}")
        return LatticeDistribution(c * self.origin, c * self.step, self.probs)

    def __repr__(self) -> str:
        return f"LatticeDistribution(origin={self.origin!r}, step={self.step!r}, probs={self.probs.tolist()!r})"


def _infer_step(gaps: np.ndarray) -> float:
    fracs = [Fraction(float(g)).limit_denominator(10**6) for g in gaps if g > 0]
    if not fracs:
        return 1.0
    num = reduce(math.gcd, (f.numerator for f in fracs))
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (f.denominator for f in fracs))
    return num / den


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    variance: float
    fourth_central: float
    essential_min: float
    essential_max: float

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


def moments(d: LatticeDistribution) -> MomentSummary:
    """Mean, variance, fourth central moment and essential range of ``d``."""
    mask = d.probs > 0
    x = d.support[mask]
    p = d.probs[mask]
    mean = float(np.dot(p, x))
    c = x - mean
    c2 = c * c
    var = float(np.dot(p, c2))
    m4 = float(np.dot(p, c2 * c2))
    # a point mass must report exactly zero spread
    if x.size == 1:
        mean, var, m4 = float(x[0]), 0.0, 0.0
    return MomentSummary(mean, max(var, 0.0), max(m4, 0.0), float(x[0]), float(x[-1]))


# -- convolution -----------------------------------------------------------


def _convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.size * b.size <= _DIRECT_CONV_LIMIT:
        return np.convolve(a, b)
    out = fftconvolve(a, b)
    if out.min() < -FFT_CLIP_TOL:
        raise ArithmeticError(f"FFT convolution produced probability {out.min():.3e} below -{FFT_CLIP_TOL:g}")
    np.clip(out, 0.0, None, out=out)
    return out


def _power(p: np.ndarray, n: int) -> np.ndarray:
    result = None
    base = p
    while True:
        if n & 1:
            result = base if result is None else _convolve(result, base)
        n >>= 1
        if not n:
            break
        base = _convolve(base, base)
    return result / result.sum()


@dataclass(frozen=True)
class _Compressed:
    """Nonzero pattern of a lattice law: ``probs`` on ``start + j * stride``."""

    start: int
    stride: int
    probs: np.ndarray


def _compress(d: LatticeDistribution) -> _Compressed:
    nz = np.flatnonzero(d.probs > 0)
    start = int(nz[0])
    offsets = nz - start
    stride = int(np.gcd.reduce(offsets)) if offsets.size > 1 else 1
    stride = max(stride, 1)
    hi = int(nz[-1])
    return _Compressed(start, stride, np.array(d.probs[start : hi + 1 : stride]))


def _check_cap(size: int) -> None:
    cap = support_cap()
    if size > cap:
        raise SupportCapError(f"convolution needs {size} support points, above the support cap of {cap}")


def sum_law(d: LatticeDistribution, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Atoms and probabilities of ``S_n`` with zero-probability lattice gaps skipped."""
    if int(n) != n or n < 1:
        raise InvariantError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    c = _compress(d)
    _check_cap(n * (c.probs.size - 1) + 1)
    probs = _power(c.probs, n)
    atoms = n * (d.origin + c.start * d.step) + (c.stride * d.step) * np.arange(probs.size)
    return atoms, probs


def mean_law(d: LatticeDistribution, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Atoms and probabilities of the pool average ``S_n / n``."""
    atoms, probs = sum_law(d, n)
    return atoms / n, probs


def convolve_power(d: LatticeDistribution, n: int) -> LatticeDistribution:
    """Exact law of ``S_n``, the sum of ``n`` i.i.d. copies of ``d``."""
    if int(n) != n or n < 1:
        raise InvariantError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    if n == 1:
        return d
    size = n * (d.probs.size - 1) + 1
    _check_cap(size)
    c = _compress(d)
    powered = _power(c.probs, n)
    out = np.zeros(size)
    out[n * c.start :: c.stride][: powered.size] = powered
    return LatticeDistribution(n * d.origin, d.step, out / out.sum())


def expect_fn(d: LatticeDistribution, n: int, f: Callable, shift: float = 0.0) -> float:
    """``E[f(shift + S_n / n)]`` under the exact law.

    ``f`` is applied to a numpy array of atoms.  Any positive-probability atom
    mapped to ``-inf`` makes the whole expectation ``-inf``.
    """
    atoms, probs = mean_law(d, n)
    mask = probs > 0
    vals = np.asarray(f(shift + atoms[mask]), dtype=float)
    if np.any(np.isneginf(vals)):
        return -math.inf
    return float(np.dot(probs[mask], vals))


# -- sampling --------------------------------------------------------------


def _rng(seed: int, n: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed) % 2**64, spawn_key=(int(n),)))


def sample_means(d: LatticeDistribution, n: int, count: int, seed: int) -> np.ndarray:
    """``count`` seeded realizations of ``S_n / n`` under i.i.d. sampling from ``d``.

    The stream is keyed on ``(seed, n)``, so the same seed reproduces the same
    samples bit for bit.
    """
    if count < 1:
        raise InvariantError(f"count must be >= 1, got {count}")
    if n < 1:
        raise InvariantError(f"n must be >= 1, got {n}")
    c = _compress(d)
    atoms = d.origin + d.step * (c.start + c.stride * np.arange(c.probs.size))
    if atoms.size == 1:
        return np.full(count, atoms[0])
    rng = _rng(seed, n)
    p = c.probs / c.probs.sum()
    out = np.empty(count)
    chunk = max(1, 2**22 // atoms.size)
    for lo in range(0, count, chunk):
        hi = min(count, lo + chunk)
        counts = rng.multinomial(n, p, size=hi - lo)
        out[lo:hi] = counts @ atoms / n
    return out


# -- penalties -------------------------------------------------------------


def _common_grid(q: LatticeDistribution, p: LatticeDistribution) -> tuple[np.ndarray, np.ndarray]:
    if not math.isclose(q.step, p.step, rel_tol=1e-12):
        raise AlignmentError(f"lattice steps differ: {q.step} vs {p.step}")
    shift = (q.origin - p.origin) / p.step
    k = round(shift)
    if abs(shift - k) > 1e-9:
        raise AlignmentError(f"origins {q.origin} and {p.origin} are not aligned on step {p.step}")
    lo = min(0, k)
    hi = max(p.probs.size, k + q.probs.size)
    qa = np.zeros(hi - lo)
    pa = np.zeros(hi - lo)
    qa[k - lo : k - lo + q.probs.size] = q.probs
    pa[-lo : -lo + p.probs.size] = p.probs
    return qa, pa


def kl_divergence(q: LatticeDistribution, p: LatticeDistribution) -> float:
    """Relative entropy ``H(q | p)``; ``inf`` when ``q`` is not absolutely continuous."""
    qa, pa = _common_grid(q, p)
    mask = qa > 0
    if np.any(pa[mask] == 0):
        return math.inf
    return max(float(np.dot(qa[mask], np.log(qa[mask] / pa[mask]))), 0.0)
