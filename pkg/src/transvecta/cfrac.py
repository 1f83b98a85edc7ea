"""Continued fractions driven by a power profile.

For sigma(x) = sgn(x)|x|**alpha the accelerated dynamics on the cone
0 < sigma_inv(y) < x produces digit pairs (a, b), one pair per double step,
and the slope r = x / sigma_inv(y) is rebuilt through the partial maps

    S_{a,b}(R) = a + 1 / sigma_inv(b + 1 / sigma(R)).

At alpha = 1 the pairs are the classical continued fraction digits read two
at a time; the fixed slope of S_{1,1} generalizes the golden ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .euclid import DiagonalOrAxisError, RegionLabel, accel_step
from .sigma import Point2, SigmaMap

_GOLDEN_BRACKET = (1.0 + 1e-9, 4.0)
_GOLDEN_TOL = 1e-12


@dataclass(frozen=True)
class DigitExpansion:
    pairs: tuple[tuple[int, int], ...]
    residual_slope: float  # x_n / sigma_inv(y_n) after the emitted pairs
    terminated: bool  # True when the orbit hit the axes (sigma-rational)


def s_ab(alpha: float, a: int, b: int, r: float) -> float:
    """The partial map S_{a,b} rebuilding one digit pair."""
    s = SigmaMap.power(alpha)
    return a + 1.0 / s.inverse(b + 1.0 / s.forward(r))


def digits(alpha: float, p: Point2, n: int) -> DigitExpansion:
    """The first n digit pairs of the expansion started at p.

    p must lie in the open cone 0 < sigma_inv(y) < x.  Each pair is the two
    digits of one double step of the accelerated algorithm; the expansion
    stops early (terminated=True) if an iterate lands on the axes.
    """
    s = SigmaMap.power(alpha)
    x, y = p
    if not (y > 0 and 0 < s.inverse(y) < x):
        raise ValueError(f"{p} is outside the cone 0 < sigma_inv(y) < x")
    pairs: list[tuple[int, int]] = []
    cur = p
    terminated = False
    for _ in range(n):
        try:
            first = accel_step(s, cur)
            if first.label_after in (RegionLabel.AXIS_FIXED, RegionLabel.ORIGIN):
                terminated = True
                break
            second = accel_step(s, first.result)
        except DiagonalOrAxisError:
            terminated = True
            break
        pairs.append((first.digit, second.digit))
        cur = second.result
        if second.label_after in (RegionLabel.AXIS_FIXED, RegionLabel.ORIGIN):
            terminated = True
            break
    xr, yr = cur
    residual = xr / s.inverse(yr) if yr > 0 else math.inf
    return DigitExpansion(tuple(pairs), residual, terminated)


def reconstruct(alpha: float, pairs, residual_slope: float) -> float:
    """Fold the digit pairs back around the residual slope."""
    r = residual_slope
    for a, b in reversed(tuple(pairs)):
        r = s_ab(alpha, a, b, r)
    return r


def slope_point(alpha: float, r: float) -> Point2:
    """A point with slope parameter r, namely (r, 1)."""
    if not r > 1.0:
        raise ValueError(f"slope must exceed 1, got {r}")
    return (r, 1.0)


def golden_slope(alpha: float) -> float:
    """The slope fixed by S_{1,1}: the all-ones expansion.

    Found by bisection of S_{1,1}(r) - r.  The documented bracket
    [1 + 1e-9, 4] straddles the root for every alpha of practical size;
    for very small alpha the fixed point sits closer to 1 than its lower
    end, in which case the bracket is widened to the representable limit.
    """
    if not (alpha > 0 and math.isfinite(alpha)):
        raise ValueError(f"alpha must be positive, got {alpha}")

    def g(r: float) -> float:
        return s_ab(alpha, 1, 1, r) - r

    lo, hi = _GOLDEN_BRACKET
    if g(lo) <= 0.0:
        lo = math.nextafter(1.0, 2.0)
        if g(lo) <= 0.0:
            raise ValueError(f"no bracketed fixed point for alpha={alpha}")
    while hi - lo > _GOLDEN_TOL:
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def golden_quartic_residual(r: float) -> float:
    """r**4 - 2 r**3 + r**2 - 2 r + 1, zero at the alpha = 2 golden slope."""
    return ((r - 2.0) * r + 1.0) * r * r - 2.0 * r + 1.0
