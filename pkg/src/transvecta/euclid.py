"""The four-cell partition of the punctured plane and its Euclidean dynamics.

With X = {xy >= 0, x != 0} and Y = {xy <= 0, y != 0}, the cells are

    A = h(X),   B = v(X),   C = h_inv(Y),   D = v_inv(Y).

The slow algorithm applies one inverse shear per step (h_inv on A, v_inv on
B, h on C, v on D); the accelerated algorithm jumps straight to the first
iterate that lands in the partner cell, and two accelerated steps halve the
|x| + |y| norm.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .sigma import Point2, SigmaMap, norm1

# Points this close to a diagonal y = +-sigma(x) (relative to scale) are
# treated as on it by the accelerated algorithm rather than classified.
_DIAGONAL_FUZZ = 1e-12

# Digit searches run by doubling; beyond this bound something is wrong.
_MAX_DIGIT_BITS = 400


class RegionLabel(enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    AXIS_FIXED = "axis-fixed"
    ORIGIN = "origin"


class DiagonalOrAxisError(ValueError):
    """Raised when the accelerated step is asked to move an excluded point."""


@dataclass(frozen=True)
class EuclidStep:
    label: RegionLabel
    letter: str | None  # "h", "v", "h_inv", "v_inv"; None on the axes
    result: Point2


@dataclass(frozen=True)
class AccelStep:
    digit: int
    letter: str
    result: Point2
    label_after: RegionLabel


def _in_x(x: float, y: float) -> bool:
    return (x > 0.0 and y >= 0.0) or (x < 0.0 and y <= 0.0)


def _in_y(x: float, y: float) -> bool:
    return (y > 0.0 and x <= 0.0) or (y < 0.0 and x >= 0.0)


def classify(s: SigmaMap, p: Point2) -> RegionLabel:
    """Locate p in the cell partition.

    Points on the coordinate axes are fixed by the algorithm (sigma and its
    inverse vanish at 0), so they are labeled AXIS_FIXED instead of being
    assigned to a cell; the origin gets its own label.
    """
    x, y = p
    if x == 0.0 and y == 0.0:
        return RegionLabel.ORIGIN
    if x == 0.0 or y == 0.0:
        return RegionLabel.AXIS_FIXED
    si = s.inverse(y)
    sx = s.forward(x)
    # Cell membership by mapping back through the defining letter.  The weak
    # and strict inequalities encode the tie-breaks: the first-quadrant
    # diagonal y = sigma(x) belongs to B, its Y-side mirror to C.
    if _in_x(x - si, y):
        return RegionLabel.A
    if _in_x(x, y - sx):
        return RegionLabel.B
    if _in_y(x + si, y):
        return RegionLabel.C
    if _in_y(x, y + sx):
        return RegionLabel.D
    raise ValueError(f"point {p} escaped the partition (NaN input?)")


_LETTER_FOR_LABEL = {
    RegionLabel.A: "h_inv",
    RegionLabel.B: "v_inv",
    RegionLabel.C: "h",
    RegionLabel.D: "v",
}


def euclid_step(s: SigmaMap, p: Point2) -> EuclidStep:
    """One step of the slow algorithm: the letter dictated by p's cell.

    On the first quadrant this reduces to the two-branch rule: subtract
    sigma_inv(y) from x when y < sigma(x), else subtract sigma(x) from y.
    Axis points are fixed and come back with letter None.
    """
    x, y = p
    lab = classify(s, p)
    if lab is RegionLabel.ORIGIN:
        raise ValueError("the origin is not in the domain of the algorithm")
    if lab is RegionLabel.AXIS_FIXED:
        return EuclidStep(lab, None, p)
    if lab is RegionLabel.A:
        return EuclidStep(lab, "h_inv", (x - s.inverse(y), y))
    if lab is RegionLabel.B:
        return EuclidStep(lab, "v_inv", (x, y - s.forward(x)))
    if lab is RegionLabel.C:
        return EuclidStep(lab, "h", (x + s.inverse(y), y))
    return EuclidStep(lab, "v", (x, y + s.forward(x)))


def accel_step(s: SigmaMap, p: Point2) -> AccelStep:
    """Jump to the first iterate of the slow algorithm in the partner cell.

    From A the slow algorithm applies h_inv until the point crosses into B,
    and each application subtracts the same sigma_inv(y); so the digit k is
    found on the closed form (x - k sigma_inv(y), y) by doubling followed by
    binary search (near the axes the digit grows without bound, so stepping
    one by one is not an option).  The other three cells are symmetric.
    """
    x, y = p
    lab = classify(s, p)
    if lab in (RegionLabel.ORIGIN, RegionLabel.AXIS_FIXED):
        raise DiagonalOrAxisError(f"{p} lies on the coordinate axes")
    si = s.inverse(y)
    sx = s.forward(x)
    scale = max(1.0, abs(y), abs(sx))
    if min(abs(y - sx), abs(y + sx)) <= _DIAGONAL_FUZZ * scale:
        raise DiagonalOrAxisError(f"{p} lies on (or within fuzz of) a diagonal")

    if lab is RegionLabel.A:
        dx, dy, letter = -si, 0.0, "h_inv"
        stays = lambda k: _in_x(x + k * dx - si, y)  # noqa: E731
    elif lab is RegionLabel.B:
        dx, dy, letter = 0.0, -sx, "v_inv"
        stays = lambda k: _in_x(x, y + k * dy - sx)  # noqa: E731
    elif lab is RegionLabel.C:
        dx, dy, letter = si, 0.0, "h"
        stays = lambda k: _in_y(x + k * dx + si, y)  # noqa: E731
    else:
        dx, dy, letter = 0.0, sx, "v"
        stays = lambda k: _in_y(x, y + k * dy + sx)  # noqa: E731

    if dx == 0.0 and dy == 0.0:
        raise DiagonalOrAxisError(f"{p} does not move (coordinate underflow)")

    # Minimal k >= 1 outside the source cell; membership is monotone in k.
    hi = 1
    while stays(hi):
        hi <<= 1
        if hi.bit_length() > _MAX_DIGIT_BITS:
            raise DiagonalOrAxisError(f"digit search from {p} diverged")
    lo = hi >> 1  # stays(lo) known True for lo >= 1
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if stays(mid):
            lo = mid
        else:
            hi = mid
    # Leave the passive coordinate alone: adding k * 0.0 would coerce exact
    # inputs (Fraction points) to float and destroy their remaining digits.
    result = (x if dx == 0.0 else x + hi * dx, y if dy == 0.0 else y + hi * dy)
    return AccelStep(hi, letter, result, classify(s, result))


def u_step(s: SigmaMap, p: Point2) -> Point2:
    """Two accelerated steps; halves the |x| + |y| norm."""
    return accel_step(s, accel_step(s, p).result).result


def pingpong_check(s: SigmaMap, p: Point2, k: int) -> bool:
    """Check the ping-pong inclusion for the even shear powers.

    With P = C u A and Q = B u D: for p in P, v^{2k}(p) must land in Q; for
    p in Q, h^{2k}(p) must land in P.  k is any nonzero integer (negative k
    means the inverse shear).
    """
    if k == 0:
        raise ValueError("the ping-pong inclusion concerns nonzero powers")
    lab = classify(s, p)
    x, y = p
    if lab in (RegionLabel.A, RegionLabel.C):
        q = (x, y + 2 * k * s.forward(x))
        return classify(s, q) in (RegionLabel.B, RegionLabel.D)
    if lab in (RegionLabel.B, RegionLabel.D):
        q = (x + 2 * k * s.inverse(y), y)
        return classify(s, q) in (RegionLabel.A, RegionLabel.C)
    raise ValueError(f"{p} is on the axes, outside both ping-pong sets")


def contraction_ratio(s: SigmaMap, p: Point2, n: int) -> float:
    """max over 1 <= m <= n of ||U^m p|| * 2^m / ||p|| (should be <= 1)."""
    base = norm1(p)
    worst = 0.0
    q = p
    for m in range(1, n + 1):
        q = u_step(s, q)
        worst = max(worst, norm1(q) * (2.0**m) / base)
    return worst
