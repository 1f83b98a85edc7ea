"""Odd increasing homeomorphisms of the real line and the shear maps they induce.

A map ``sigma`` from this module plays the role of the slope profile in the
generalized transvections

    h(x, y) = (x + sigma_inv(y), y)        (horizontal shear)
    v(x, y) = (x, sigma(x) + y)            (vertical shear)

With ``sigma = identity`` these are the standard SL(2, Z) generators.  Four
families are provided; all are odd, strictly increasing bijections of R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

Point2 = tuple[float, float]

# Relative tolerance for the bisection inverse of the sine family.  The
# tolerance must scale with |y|: an absolute cutoff leaves the inverse of a
# tiny argument with a huge relative error, which flips signs downstream.
_SINE_INV_TOL = 1e-13


def norm1(p: Point2) -> float:
    """The norm |x| + |y| used by the contraction estimates."""
    return abs(p[0]) + abs(p[1])


@dataclass(frozen=True)
class SigmaMap:
    """An odd increasing homeomorphism of R, chosen from a named family.

    kind:
        "identity"  sigma(x) = x
        "power"     sigma(x) = sgn(x) |x|**alpha, alpha > 0
        "linear"    sigma(x) = slope*x for |x| <= knee, slope-1 continuation
                    beyond the knee, extended oddly
        "sine"      sigma(x) = x + wobble*sin(2 pi x)/(2 pi), |wobble| < 1;
                    fixes the integers and commutes with x -> x + 1
    """

    kind: str
    alpha: float = 1.0
    slope: float = 1.0
    knee: float = 1.0
    wobble: float = 0.0

    # -- constructors -------------------------------------------------

    @staticmethod
    def identity() -> "SigmaMap":
        return SigmaMap("identity")

    @staticmethod
    def power(alpha: float) -> "SigmaMap":
        if not (alpha > 0 and math.isfinite(alpha)):
            raise ValueError(f"power family needs alpha > 0, got {alpha}")
        return SigmaMap("power", alpha=alpha)

    @staticmethod
    def linear_near_origin(slope: float, knee: float) -> "SigmaMap":
        if not (slope > 0 and math.isfinite(slope)):
            raise ValueError(f"linear family needs slope > 0, got {slope}")
        if not (knee > 0 and math.isfinite(knee)):
            raise ValueError(f"linear family needs knee > 0, got {knee}")
        return SigmaMap("linear", slope=slope, knee=knee)

    @staticmethod
    def sine_wobble(wobble: float) -> "SigmaMap":
        # |wobble| >= 1 would destroy strict monotonicity; rejected outright.
        if not (abs(wobble) < 1):
            raise ValueError(f"sine family needs |wobble| < 1, got {wobble}")
        return SigmaMap("sine", wobble=wobble)

    @staticmethod
    def from_descriptor(text: str) -> "SigmaMap":
        """Parse ``id``, ``pow:<alpha>``, ``lin:<a>:<b>`` or ``sine:<c>``."""
        parts = text.strip().split(":")
        try:
            if parts == ["id"]:
                return SigmaMap.identity()
            if parts[0] == "pow" and len(parts) == 2:
                return SigmaMap.power(float(parts[1]))
            if parts[0] == "lin" and len(parts) == 3:
                return SigmaMap.linear_near_origin(float(parts[1]), float(parts[2]))
            if parts[0] == "sine" and len(parts) == 2:
                return SigmaMap.sine_wobble(float(parts[1]))
        except ValueError as exc:
            if "family needs" in str(exc):
                raise
            raise ValueError(f"malformed sigma descriptor {text!r}") from exc
        raise ValueError(f"unknown sigma descriptor {text!r}")

    @property
    def descriptor(self) -> str:
        if self.kind == "identity":
            return "id"
        if self.kind == "power":
            return f"pow:{self.alpha:g}"
        if self.kind == "linear":
            return f"lin:{self.slope:g}:{self.knee:g}"
        return f"sine:{self.wobble:g}"

    @property
    def fixes_integers(self) -> bool:
        """True when sigma restricted to Z is the identity."""
        if self.kind in ("identity", "sine"):
            return True
        if self.kind == "power":
            return self.alpha == 1.0
        return self.slope == 1.0  # slope-1 linear map is the identity

    # -- power-family exponent shortcuts ------------------------------

    @cached_property
    def _int_alpha(self) -> int | None:
        a = self.alpha
        return int(a) if a == int(a) and a >= 1 else None

    @cached_property
    def _int_inv_alpha(self) -> int | None:
        r = 1.0 / self.alpha
        return int(r) if r == int(r) and r >= 1 else None

    # -- evaluation ----------------------------------------------------

    def forward(self, x: float) -> float:
        """sigma(x)."""
        if self.kind == "identity":
            return x
        if self.kind == "power":
            if x == 0.0:
                return 0.0
            s, ax = math.copysign(1.0, x), abs(x)
            n = self._int_alpha
            if n == 1:
                return x
            if n == 2:
                return s * (ax * ax)
            if n is not None:
                return s * ax**n
            m = self._int_inv_alpha
            if m == 2:
                return s * math.sqrt(ax)
            return s * ax**self.alpha
        if self.kind == "linear":
            ax = abs(x)
            if ax <= self.knee:
                return self.slope * x
            return math.copysign(self.slope * self.knee + (ax - self.knee), x)
        # sine: reduce mod 1 before the sine so integers are fixed exactly
        f = x - round(x)
        if f == 0.0:
            return x
        return x + self.wobble * math.sin(2.0 * math.pi * f) / (2.0 * math.pi)

    def inverse(self, y: float) -> float:
        """sigma^{-1}(y)."""
        if self.kind == "identity":
            return y
        if self.kind == "power":
            if y == 0.0:
                return 0.0
            s, ay = math.copysign(1.0, y), abs(y)
            n = self._int_inv_alpha
            if n == 1:
                return y
            if n == 2:
                return s * (ay * ay)
            if n is not None:
                return s * ay**n
            if self._int_alpha == 2:
                return s * math.sqrt(ay)
            return s * ay ** (1.0 / self.alpha)
        if self.kind == "linear":
            ay = abs(y)
            lim = self.slope * self.knee
            if ay <= lim:
                return y / self.slope
            return math.copysign(self.knee + (ay - lim), y)
        # sine: integers are fixed points, so invert them without bisection
        if y == round(y):
            return y
        lo, hi = y - abs(self.wobble), y + abs(self.wobble)
        while hi - lo > _SINE_INV_TOL * max(abs(y), 1e-300):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break  # interval narrower than one ulp at this magnitude
            if self.forward(mid) < y:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def __call__(self, x: float) -> float:
        return self.forward(x)

    # -- vectorized evaluation (used by the enumeration experiments) --

    def forward_np(self, x: np.ndarray) -> np.ndarray:
        if self.kind == "identity":
            return x.copy()
        if self.kind == "power":
            return np.sign(x) * np.abs(x) ** self.alpha
        if self.kind == "linear":
            ax = np.abs(x)
            out = np.where(
                ax <= self.knee,
                self.slope * ax,
                self.slope * self.knee + (ax - self.knee),
            )
            return np.sign(x) * out
        f = x - np.round(x)
        return x + self.wobble * np.sin(2.0 * np.pi * f) / (2.0 * np.pi)

    def inverse_np(self, y: np.ndarray) -> np.ndarray:
        if self.kind == "identity":
            return y.copy()
        if self.kind == "power":
            return np.sign(y) * np.abs(y) ** (1.0 / self.alpha)
        if self.kind == "linear":
            ay = np.abs(y)
            lim = self.slope * self.knee
            out = np.where(ay <= lim, ay / self.slope, self.knee + (ay - lim))
            return np.sign(y) * out
        # vectorized bisection; the wobble term is bounded by |c|/(2 pi) < |c|
        lo = y - abs(self.wobble)
        hi = y + abs(self.wobble)
        floor = np.maximum(np.abs(y), 1e-300)
        while np.max((hi - lo) / floor) > _SINE_INV_TOL:
            mid = 0.5 * (lo + hi)
            if np.all((mid == lo) | (mid == hi)):
                break  # every lane is down to one ulp
            below = self.forward_np(mid) < y
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        out = 0.5 * (lo + hi)
        # snap integer targets, which sigma fixes exactly
        r = np.round(y)
        return np.where(y == r, y, out)


# -- shear maps on the plane ---------------------------------------------


def h(s: SigmaMap, p: Point2) -> Point2:
    x, y = p
    return (x + s.inverse(y), y)


def h_inv(s: SigmaMap, p: Point2) -> Point2:
    x, y = p
    return (x - s.inverse(y), y)


def v(s: SigmaMap, p: Point2) -> Point2:
    x, y = p
    return (x, s.forward(x) + y)


def v_inv(s: SigmaMap, p: Point2) -> Point2:
    x, y = p
    return (x, y - s.forward(x))


# -- n-dimensional shears --------------------------------------------------


def h_ij(s: SigmaMap, i: int, j: int, p: tuple[float, ...]) -> tuple[float, ...]:
    """Add sigma_inv(p[j]) to coordinate i (1-based indices, i < j)."""
    _check_pair(i, j, len(p))
    q = list(p)
    q[i - 1] += s.inverse(p[j - 1])
    return tuple(q)


def v_ij(s: SigmaMap, i: int, j: int, p: tuple[float, ...]) -> tuple[float, ...]:
    """Add sigma(p[i]) to coordinate j (1-based indices, i < j)."""
    _check_pair(i, j, len(p))
    q = list(p)
    q[j - 1] += s.forward(p[i - 1])
    return tuple(q)


def _check_pair(i: int, j: int, n: int) -> None:
    if not (1 <= i < j <= n):
        raise ValueError(f"coordinate pair ({i}, {j}) out of range for dimension {n}")


# -- scaling flow ----------------------------------------------------------


def flow_scale(alpha: float, t: float, p: Point2) -> Point2:
    """The scaling (x, y) -> (t x, sgn(t) |t|**alpha y).

    For sigma in the power family with the same exponent this commutes with
    h and v; it is the one-parameter flow the shear pair embeds in.
    """
    if not (alpha > 0):
        raise ValueError(f"flow needs a positive exponent, got {alpha}")
    x, y = p
    return (t * x, math.copysign(abs(t) ** alpha, t) * y if t != 0.0 else 0.0)


def iterate(fn, s: SigmaMap, p: Point2, n: int) -> Point2:
    """Apply a shear map n times."""
    for _ in range(n):
        p = fn(s, p)
    return p


def sigma_families_for_tests() -> Iterable[SigmaMap]:
    """The six families exercised by the cross-family suites."""
    return (
        SigmaMap.identity(),
        SigmaMap.power(0.5),
        SigmaMap.power(2.0),
        SigmaMap.power(3.0),
        SigmaMap.linear_near_origin(2.0, 1.0),
        SigmaMap.sine_wobble(0.5),
    )
