"""Parametric utility families.

Four families are supported, each with closed-form derivatives and inverse:

* ``exponential``: ``u(x) = 1 - exp(-gamma x)``
* ``power``: ``u(x) = (x**(1 - chi) - 1) / (1 - chi)`` on ``x > 0``
* ``log``: ``u(x) = log x`` on ``x > 0``
* ``linear``: ``u(x) = x``

Bounded-domain families take the value ``-inf`` at and below zero.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ImageError, InvariantError

FAMILIES = ("exponential", "power", "log", "linear")
# inverse() of the exponential family refuses values this close to sup Im u
EXP_IMAGE_GUARD = 1e-15


@dataclass(frozen=True)
class Utility:
    family: str
    param: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvariantError(f"unknown utility family {self.family!r}")
        if self.family == "exponential":
            if self.param is None or not self.param > 0 or not math.isfinite(self.param):
                raise InvariantError(f"exponential utility needs gamma > 0, got {self.param!r}")
        elif self.family == "power":
            if self.param is None or not self.param > 0 or self.param == 1 or not math.isfinite(self.param):
                raise InvariantError(f"power utility needs chi > 0 and chi != 1, got {self.param!r}")
        elif self.param is not None:
            raise InvariantError(f"{self.family} utility takes no parameter")

    @classmethod
    def exponential(cls, gamma: float) -> "Utility":
        return cls("exponential", float(gamma))

    @classmethod
    def power(cls, chi: float) -> "Utility":
        return cls("power", float(chi))

    @classmethod
    def log(cls) -> "Utility":
        return cls("log")

    @classmethod
    def linear(cls) -> "Utility":
        return cls("linear")

    @classmethod
    def parse(cls, spec: str) -> "Utility":
        """Parse ``exp:gamma=<float>``, ``power:chi=<float>``, ``log`` or ``linear``."""
        text = spec.strip()
        if text == "log":
            return cls.log()
        if text == "linear":
            return cls.linear()
        m = re.fullmatch(r"(exp|power):(gamma|chi)=(\S+)", text)
        if m is None:
            raise InvariantError(f"cannot parse utility spec {spec!r}")
        name, key, raw = m.groups()
        if (name, key) not in (("exp", "gamma"), ("power", "chi")):
            raise InvariantError(f"utility {name!r} does not take parameter {key!r}")
        try:
            value = float(raw)
        except ValueError as exc:
            raise InvariantError(f"bad {key} value {raw!r}") from exc
        return cls.exponential(value) if name == "exp" else cls.power(value)

    def spec(self) -> str:
        if self.family == "exponential":
            return f"exp:gamma={self.param!r}"
        if self.family == "power":
            return f"power:chi={self.param!r}"
        return self.family

    # -- domain and image --------------------------------------------------

    @property
    def domain_lower(self) -> float:
        return 0.0 if self.family in ("power", "log") else -math.inf

    @property
    def bounded_domain(self) -> bool:
        return self.family in ("power", "log")

    def image_bounds(self) -> tuple[float, float]:
        """Open interval ``(lo, hi)`` of finite values attained by ``u``."""
        if self.family == "exponential":
            return -math.inf, 1.0
        if self.family == "power":
            chi = self.param
            if chi > 1:
                return -math.inf, 1.0 / (chi - 1.0)
            return -1.0 / (1.0 - chi), math.inf
        return -math.inf, math.inf

    def _check_interior(self, x: np.ndarray) -> None:
        if self.bounded_domain and np.any(~(x > 0)):
            raise DomainError(f"{self.spec()} is only differentiable on x > 0")
        if np.any(~np.isfinite(x)):
            raise DomainError("derivatives need finite arguments")

    # -- values --------------------------------------------------------------

    def evaluate(self, x):
        """``u(x)``; ``-inf`` outside the domain.  Vectorized over numpy arrays."""
        arr = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if self.family == "exponential":
                out = -np.expm1(-self.param * arr)
            elif self.family == "linear":
                out = arr.copy()
            else:
                pos = arr > 0
                safe = np.where(pos, arr, 1.0)
                if self.family == "log":
                    val = np.log(safe)
                else:
                    e = 1.0 - self.param
                    val = np.expm1(e * np.log(safe)) / e
                out = np.where(pos, val, -np.inf)
        return out if out.ndim else float(out)

    __call__ = evaluate

    def derivative(self, x, order: int = 1):
        """Closed-form ``u'``, ``u''`` or ``u'''`` on the interior of the domain."""
        if order not in (1, 2, 3):
            raise InvariantError(f"derivative order must be 1, 2 or 3, got {order}")
        arr = np.asarray(x, dtype=float)
        self._check_interior(arr)
        if self.family == "exponential":
            g = self.param
            out = (g if order == 1 else -(g**2) if order == 2 else g**3) * np.exp(-g * arr)
        elif self.family == "linear":
            out = np.ones_like(arr) if order == 1 else np.zeros_like(arr)
        elif self.family == "log":
            out = 1.0 / arr if order == 1 else -1.0 / arr**2 if order == 2 else 2.0 / arr**3
        else:
            c = self.param
            if order == 1:
                out = arr**-c
            elif order == 2:
                out = -c * arr ** (-c - 1.0)
            else:
                out = c * (c + 1.0) * arr ** (-c - 2.0)
        return out if out.ndim else float(out)

    def absolute_risk_aversion(self, x):
        """Arrow-Pratt coefficient ``-u''(x) / u'(x)``."""
        arr = np.asarray(x, dtype=float)
        self._check_interior(arr)
        if self.family == "exponential":
            out = np.full_like(arr, self.param)
        elif self.family == "linear":
            out = np.zeros_like(arr)
        elif self.family == "log":
            out = 1.0 / arr
        else:
            out = self.param / arr
        return out if out.ndim else float(out)

    def inverse(self, y):
        """``u^{-1}(y)`` with ``u^{-1}(-inf) = -inf``.

        Raises :class:`ImageError` for finite values outside ``Im u``; for the
        exponential family values within ``1e-15`` of the supremum 1 are
        rejected as well.
        """
        arr = np.asarray(y, dtype=float)
        if np.any(np.isnan(arr)) or np.any(np.isposinf(arr)):
            raise ImageError(f"{self.spec()} has no inverse at nan/+inf")
        neg = np.isneginf(arr)
        fin = np.where(neg, 0.0, arr)
        lo, hi = self.image_bounds()
        if self.family == "exponential":
            bad = fin >= 1.0 - EXP_IMAGE_GUARD
        else:
            bad = (fin <= lo) | (fin >= hi)
        bad &= ~neg
        if np.any(bad):
            raise ImageError(f"value(s) {arr[bad][:3].tolist()} outside the image of {self.spec()}")
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.family == "exponential":
                out = -np.log1p(-fin) / self.param
            elif self.family == "linear":
                out = fin
            elif self.family == "log":
                out = np.exp(fin)
            else:
                e = 1.0 - self.param
                out = np.exp(np.log1p(e * fin) / e)
        out = np.where(neg, -np.inf, out)
        return out if out.ndim else float(out)

    def inverse_derivative(self, y):
        """``(u^{-1})'(y) = 1 / u'(u^{-1}(y))``."""
        return 1.0 / self.derivative(self.inverse(y), 1)

    # -- expectations over finite laws ---------------------------------------

    def expected_utility(self, values, probs, axis: int = -1):
        """``sum(probs * u(values))`` along ``axis``; ``-inf`` if a charged atom is outside the domain."""
        values = np.asarray(values, dtype=float)
        probs = np.asarray(probs, dtype=float)
        uv = self.evaluate(values)
        uv = np.asarray(uv, dtype=float)
        charged = np.broadcast_to(probs > 0, uv.shape)
        with np.errstate(invalid="ignore"):
            terms = np.where(charged, probs * uv, 0.0)
        out = terms.sum(axis=axis)
        return out if np.ndim(out) else float(out)

    def certainty_equivalent_of(self, values, probs, axis: int = -1):
        """``u^{-1}(E[u(X)])`` for a finite law given by atoms and weights.

        The exponential family goes through a log-sum-exp so that large
        ``gamma * |x|`` neither overflows nor saturates the image guard.
        """
        values = np.asarray(values, dtype=float)
        probs = np.asarray(probs, dtype=float)
        if self.family == "exponential":
            g = self.param
            b = np.broadcast_to(probs, values.shape)
            a = np.where(b > 0, -g * values, -np.inf)
            amax = np.max(a, axis=axis, keepdims=True)
            s = np.sum(np.where(b > 0, b * np.exp(a - amax), 0.0), axis=axis)
            out = -(np.squeeze(amax, axis=axis) + np.log(s)) / g
            return out if np.ndim(out) else float(out)
        if self.family == "linear":
            out = (np.broadcast_to(probs, values.shape) * values).sum(axis=axis)
            return out if np.ndim(out) else float(out)
        return self.inverse(self.expected_utility(values, probs, axis=axis))
