"""Exact arithmetic in towers of real quadratic extensions.

A context fixes a chain Q ( sqrt(g0) ) ( sqrt(g1) ) ... where each generator
g_i is a positive non-square element of the field below it.  Elements are
binary trees over Fraction leaves: at depth d an element is lo + hi * sqrt(
g_{d-1}) with lo, hi at depth d - 1.  Everything here is exact; floats only
appear as throwaway estimates that are always confirmed by sign tests.

The point of the module is the induction that drives the square-profile
orbit argument: starting from x0 = a0 + b0 sqrt(y0) with y0 a positive
non-square, a0 != 0 and |b0| >= 1, each step peels off

    k_{n+1} >= 1 with 0 < y_{n+1} = y_n - k_{n+1} x_n^2 < x_n^2,
    j_{n+1} >= 1 with 0 < x_{n+1} = x_n - j_{n+1} sqrt(y_{n+1}) < sqrt(y_{n+1}),

and the clauses (y_n positive and non-square; a_n != 0, |b_n| >= 1;
y_n > x_n^2) are re-established exactly at every level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional, Union

RatLike = Union[int, Fraction]

DEFAULT_DEPTH_CAP = 5
HARD_DEPTH_CAP = 8


class InvariantViolation(Exception):
    """An orbit clause failed exactly; this must never fire."""

    def __init__(self, clause: str, detail: str):
        super().__init__(f"{clause}: {detail}")
        self.clause = clause
        self.detail = detail


class TowerContext:
    """An immutable chain of quadratic generators."""

    __slots__ = ("gens",)

    def __init__(self, gens: tuple["TowerElement", ...] = ()):
        self.gens = gens

    @property
    def depth(self) -> int:
        return len(self.gens)

    def rational(self, q: RatLike, depth: int = 0) -> "TowerElement":
        e = TowerElement(self, 0, num=Fraction(q))
        return e.lift(depth)

    def zero(self, depth: int = 0) -> "TowerElement":
        return self.rational(0, depth)

    def one(self, depth: int = 0) -> "TowerElement":
        return self.rational(1, depth)

    def pair(self, lo: "TowerElement", hi: "TowerElement") -> "TowerElement":
        """lo + hi * sqrt(g_d) where d is the common depth of lo and hi."""
        if lo.depth != hi.depth:
            d = max(lo.depth, hi.depth)
            lo, hi = lo.lift(d), hi.lift(d)
        if lo.depth >= self.depth:
            raise ValueError("no generator above the components' depth")
        return TowerElement(self, lo.depth + 1, lo=lo, hi=hi)

    def generator_sqrt(self, i: int) -> "TowerElement":
        """sqrt(g_i) as an element of depth i + 1."""
        g = self.gens[i]
        return TowerElement(self, i + 1, lo=g.ctx.zero(i).with_ctx(self), hi=g.ctx.one(i).with_ctx(self))

    def extend(self, gen: "TowerElement") -> "TowerContext":
        """Adjoin sqrt(gen).  Certifies gen > 0 and gen not a square."""
        if gen.depth != self.depth:
            raise ValueError(
                f"generator must live at the top depth {self.depth}, got {gen.depth}"
            )
        if gen.sign() <= 0:
            raise ValueError("generator must be positive")
        if is_square(gen, self):
            raise ValueError("generator must not be a square in its field")
        if self.depth + 1 > HARD_DEPTH_CAP:
            raise ValueError(f"tower depth would exceed the hard cap {HARD_DEPTH_CAP}")
        new = TowerContext(self.gens + (gen,))
        return new

    def compatible_prefix_of(self, other: "TowerContext") -> bool:
        if len(self.gens) > len(other.gens):
            return False
        return all(
            a is b or a.equals_structural(b)
            for a, b in zip(self.gens, other.gens[: len(self.gens)])
        )


class TowerElement:
    """Immutable element of a quadratic tower; supports exact field ops."""

    __slots__ = ("ctx", "depth", "num", "lo", "hi")

    def __init__(
        self,
        ctx: TowerContext,
        depth: int,
        num: Optional[Fraction] = None,
        lo: Optional["TowerElement"] = None,
        hi: Optional["TowerElement"] = None,
    ):
        self.ctx = ctx
        self.depth = depth
        self.num = num
        self.lo = lo
        self.hi = hi

    # -- plumbing ------------------------------------------------------

    def with_ctx(self, ctx: TowerContext) -> "TowerElement":
        if self.depth == 0:
            return TowerElement(ctx, 0, num=self.num)
        return TowerElement(ctx, self.depth, lo=self.lo.with_ctx(ctx), hi=self.hi.with_ctx(ctx))

    def lift(self, depth: int) -> "TowerElement":
        """View this element at a greater depth (pad with zero radicals)."""
        if depth < self.depth:
            raise ValueError(f"cannot lower depth {self.depth} to {depth}")
        e = self
        while e.depth < depth:
            e = TowerElement(self.ctx, e.depth + 1, lo=e, hi=_zero_like(self.ctx, e.depth))
        return e

    def _align(self, other) -> tuple["TowerElement", "TowerElement"]:
        if not isinstance(other, TowerElement):
            other = self.ctx.rational(other)
        if self.ctx is not other.ctx:
            if self.ctx.compatible_prefix_of(other.ctx):
                return self.with_ctx(other.ctx)._align(other)
            if other.ctx.compatible_prefix_of(self.ctx):
                return self._align(other.with_ctx(self.ctx))
            raise ValueError("elements from incompatible towers")
        d = max(self.depth, other.depth)
        return self.lift(d), other.lift(d)

    def _gen(self) -> "TowerElement":
        # the generator under this element's top radical, at depth - 1
        return self.ctx.gens[self.depth - 1].with_ctx(self.ctx).lift(self.depth - 1)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other) -> "TowerElement":
        a, b = self._align(other)
        if a.depth == 0:
            return TowerElement(a.ctx, 0, num=a.num + b.num)
        return TowerElement(a.ctx, a.depth, lo=a.lo + b.lo, hi=a.hi + b.hi)

    __radd__ = __add__

    def __neg__(self) -> "TowerElement":
        if self.depth == 0:
            return TowerElement(self.ctx, 0, num=-self.num)
        return TowerElement(self.ctx, self.depth, lo=-self.lo, hi=-self.hi)

    def __sub__(self, other) -> "TowerElement":
        a, b = self._align(other)
        return a + (-b)

    def __rsub__(self, other) -> "TowerElement":
        a, b = self._align(other)
        return b + (-a)

    def __mul__(self, other) -> "TowerElement":
        a, b = self._align(other)
        if a.depth == 0:
            return TowerElement(a.ctx, 0, num=a.num * b.num)
        g = a._gen()
        return TowerElement(
            a.ctx,
            a.depth,
            lo=a.lo * b.lo + a.hi * b.hi * g,
            hi=a.lo * b.hi + a.hi * b.lo,
        )

    __rmul__ = __mul__

    def inverse(self) -> "TowerElement":
        if self.depth == 0:
            if self.num == 0:
                raise ZeroDivisionError("tower element is zero")
            return TowerElement(self.ctx, 0, num=1 / self.num)
        # conjugate trick; lo^2 - hi^2 g vanishes only on zero because the
        # generator is certified non-square one level down
        g = self._gen()
        den = self.lo * self.lo - self.hi * self.hi * g
        inv_den = den.inverse()
        return TowerElement(self.ctx, self.depth, lo=self.lo * inv_den, hi=-(self.hi * inv_den))

    def __truediv__(self, other) -> "TowerElement":
        a, b = self._align(other)
        return a * b.inverse()

    def __rtruediv__(self, other) -> "TowerElement":
        a, b = self._align(other)
        return b * a.inverse()

    def square(self) -> "TowerElement":
        return self * self

    # -- exact predicates ------------------------------------------------

    def is_zero(self) -> bool:
        if self.depth == 0:
            return self.num == 0
        return self.lo.is_zero() and self.hi.is_zero()

    def sign(self) -> int:
        """Exact sign via the recursive comparison of lo^2 against hi^2 g."""
        if self.depth == 0:
            n = self.num
            return (n > 0) - (n < 0)
        sl = self.lo.sign()
        sh = self.hi.sign()
        if sh == 0:
            return sl
        if sl == 0:
            return sh
        if sl == sh:
            return sl
        # opposite strict signs: |lo| vs |hi| sqrt(g) decides
        g = self._gen()
        cmp = (self.lo * self.lo - self.hi * self.hi * g).sign()
        return sl * cmp

    def equals_structural(self, other: "TowerElement") -> bool:
        if self.depth != other.depth:
            return (self - other).is_zero()
        if self.depth == 0:
            return self.num == other.num
        return self.lo.equals_structural(other.lo) and self.hi.equals_structural(other.hi)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (TowerElement, int, Fraction)):
            return NotImplemented
        a, b = self._align(other)
        return (a - b).is_zero()

    def __lt__(self, other) -> bool:
        a, b = self._align(other)
        return (a - b).sign() < 0

    def __le__(self, other) -> bool:
        a, b = self._align(other)
        return (a - b).sign() <= 0

    def __gt__(self, other) -> bool:
        a, b = self._align(other)
        return (a - b).sign() > 0

    def __ge__(self, other) -> bool:
        a, b = self._align(other)
        return (a - b).sign() >= 0

    __hash__ = None  # mutable-free but equality is semantic; keep unhashable

    # -- reporting --------------------------------------------------------

    def approx(self) -> float:
        """Binary64 estimate (never used to decide anything exactly)."""
        if self.depth == 0:
            try:
                return float(self.num)
            except OverflowError:
                return float("inf") if self.num > 0 else float("-inf")
        g = self._gen().approx()
        return self.lo.approx() + self.hi.approx() * math.sqrt(max(g, 0.0))

    def bit_size(self) -> int:
        """Largest numerator/denominator bit length over all leaves."""
        if self.depth == 0:
            return max(self.num.numerator.bit_length(), self.num.denominator.bit_length())
        return max(self.lo.bit_size(), self.hi.bit_size())

    def to_text(self) -> str:
        """Exact nested-radical rendering, rationals as p/q."""
        if self.depth == 0:
            return str(self.num)
        g = self.ctx.gens[self.depth - 1]
        if self.hi.is_zero():
            return self.lo.to_text()
        hi_txt = self.hi.to_text()
        hi_part = f"sqrt({g.to_text()})"
        if hi_txt != "1":
            hi_part = f"({hi_txt})*{hi_part}"
        if self.lo.is_zero():
            return hi_part
        return f"({self.lo.to_text()}) + {hi_part}"

    def __repr__(self) -> str:
        return f"TowerElement({self.to_text()})"


def _zero_like(ctx: TowerContext, depth: int) -> TowerElement:
    if depth == 0:
        return TowerElement(ctx, 0, num=Fraction(0))
    z = _zero_like(ctx, depth - 1)
    return TowerElement(ctx, depth, lo=z, hi=z)


# -- squares and square roots ------------------------------------------------


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def sqrt_exact(e: TowerElement, ctx: TowerContext) -> Optional[TowerElement]:
    """The nonnegative square root of e inside its own field, or None.

    At depth d an element x + y sqrt(z) with y != 0 is a square exactly when
    x^2 - y^2 z is a square s one level down and one of (x +- s)/2 is itself
    a square a^2 there; then (a + (y / 2a) sqrt(z))^2 recovers the element.
    The y = 0 case reduces to x or x/z being a square one level down.
    """
    if e.depth == 0:
        r = _rational_sqrt(e.num)
        return None if r is None else TowerElement(e.ctx, 0, num=r)
    sgn = e.sign()
    if sgn < 0:
        return None
    if sgn == 0:
        return _zero_like(e.ctx, e.depth)
    x, y = e.lo, e.hi
    z = e._gen()
    if y.is_zero():
        r = sqrt_exact(x, ctx)
        if r is not None:
            return e.ctx.pair(r, _zero_like(e.ctx, e.depth - 1))
        r = sqrt_exact(x / z, ctx)
        if r is not None:
            return e.ctx.pair(_zero_like(e.ctx, e.depth - 1), r)
        return None
    # lemma fast path: a square with a radical part has positive body
    if x.sign() <= 0:
        return None
    disc = x * x - y * y * z
    s = sqrt_exact(disc, ctx)
    if s is None:
        return None
    two = 2
    for cand in ((x + s) / two, (x - s) / two):
        a = sqrt_exact(cand, ctx)
        if a is not None and not a.is_zero():
            b = y / (a * two)
            root = e.ctx.pair(a, b)
            if root.sign() < 0:
                root = -root
            return root
    return None


def is_square(e: TowerElement, ctx: TowerContext) -> bool:
    """Exact decision: is e the square of an element of its own field?"""
    return sqrt_exact(e, ctx) is not None


# -- exact floors -------------------------------------------------------------


def floor_ratio(num: TowerElement, den: TowerElement) -> int:
    """floor(num / den) for den > 0, decided by exact sign tests.

    A float estimate seeds the answer and exact comparisons walk it into
    place, so precision of the estimate never matters.
    """
    if den.sign() <= 0:
        raise ValueError("floor_ratio needs a positive denominator")
    try:
        k = int(num.approx() / den.approx())
    except (OverflowError, ValueError, ZeroDivisionError):
        k = 0
    while (num - den * k).sign() < 0:
        k -= 1
    while (num - den * (k + 1)).sign() >= 0:
        k += 1
    return k


# -- the orbit induction -------------------------------------------------------


@dataclass(frozen=True)
class OrbitState:
    n: int
    x: TowerElement  # depth n + 1
    y: TowerElement  # depth n
    k: Optional[int]  # digit that produced y_n (None at n = 0)
    j: Optional[int]  # digit that produced x_n (None at n = 0)

    @property
    def bits(self) -> int:
        return max(self.x.bit_size(), self.y.bit_size())


def _check_clauses(state: OrbitState, ctx: TowerContext) -> None:
    n = state.n
    x, y = state.x, state.y
    if y.sign() <= 0:
        raise InvariantViolation(f"i({n})", "y is not positive")
    if is_square(y, ctx):
        raise InvariantViolation(f"i({n})", "y is a square in its field")
    if x.sign() <= 0:
        raise InvariantViolation(f"ii({n})", "x is not positive")
    if x.depth != y.depth + 1:
        raise InvariantViolation(f"ii({n})", "x does not live one level above y")
    a, b = x.lo, x.hi
    if a.sign() == 0:
        raise InvariantViolation(f"ii({n})", "the rational part of x vanishes")
    if (b * b - 1).sign() < 0:
        raise InvariantViolation(f"ii({n})", "the radical coefficient of x is below 1")
    if (y.lift(x.depth) - x * x).sign() <= 0:
        raise InvariantViolation(f"iii({n})", "y does not dominate x^2")


def orbit_verify(
    x0: TowerElement,
    y0: TowerElement,
    depth: int = DEFAULT_DEPTH_CAP,
) -> list[OrbitState]:
    """Run and exactly certify `depth` steps of the orbit induction.

    x0 must live one level above y0 in a context ending with y0 as its top
    generator.  The clause checks re-run at every step; a failure raises
    InvariantViolation (which would falsify the induction, so it never
    should).
    """
    if depth > HARD_DEPTH_CAP:
        raise ValueError(f"depth {depth} exceeds the hard cap {HARD_DEPTH_CAP}")
    ctx = x0.ctx
    state = OrbitState(0, x0, y0, None, None)
    _check_clauses(state, ctx)
    out = [state]
    for n in range(depth):
        x, y = state.x, state.y
        xx = x * x
        k = floor_ratio(y.lift(x.depth), xx)
        if k < 1:
            raise InvariantViolation(f"i({n + 1})", f"digit k = {k} below 1")
        y_next = y.lift(x.depth) - xx * k
        # extend certifies positivity and non-squareness of y_next exactly
        try:
            ctx = ctx.extend(y_next)
        except ValueError as exc:
            raise InvariantViolation(f"i({n + 1})", str(exc)) from exc
        root = ctx.generator_sqrt(ctx.depth - 1)
        x_in = x.with_ctx(ctx).lift(root.depth)
        j = floor_ratio(x_in, root)
        if j < 1:
            raise InvariantViolation(f"ii({n + 1})", f"digit j = {j} below 1")
        x_next = x_in - root * j
        state = OrbitState(n + 1, x_next, y_next.with_ctx(ctx), k, j)
        _check_clauses(state, ctx)
        out.append(state)
    return out


# -- the concrete seed orbit ---------------------------------------------------


@dataclass(frozen=True)
class IdentityCheck:
    ok: bool
    x: TowerElement
    y: TowerElement


def _square_sigma(e: TowerElement) -> TowerElement:
    return e * e if e.sign() >= 0 else -(e * e)


def _square_sigma_inv(e: TowerElement, ctx: TowerContext) -> TowerElement:
    s = e.sign()
    mag = e if s >= 0 else -e
    root = sqrt_exact(mag, ctx)
    if root is None:
        raise ValueError(f"{mag!r} has no square root in the ambient tower")
    return root if s >= 0 else -root


def m0_identity_check() -> IdentityCheck:
    """Certify h o v^2 o h_inv o v^4 (1, 0) = (-1 + sqrt(2), 2) exactly.

    The word is evaluated over sigma(x) = sgn(x) x^2 inside Q(sqrt(2)); both
    shears reduce to exact tower arithmetic because every sigma_inv call in
    the orbit is a square root that exists in Q(sqrt(2)).
    """
    base = TowerContext()
    two = base.rational(2)
    ctx = base.extend(two)
    x = ctx.rational(1, depth=1)
    y = ctx.rational(0, depth=1)
    for _ in range(4):  # v^4
        y = y + _square_sigma(x)
    x = x - _square_sigma_inv(y, ctx)  # h_inv
    for _ in range(2):  # v^2
        y = y + _square_sigma(x)
    x = x + _square_sigma_inv(y, ctx)  # h
    want_x = ctx.rational(-1, depth=1) + ctx.generator_sqrt(0)
    want_y = ctx.rational(2, depth=1)
    ok = (x - want_x).is_zero() and (y - want_y).is_zero()
    return IdentityCheck(ok, x, y)


def m0_orbit(depth: int = 4) -> list[OrbitState]:
    """The certified orbit started from (x0, y0) = (-1 + sqrt(2), 2)."""
    base = TowerContext()
    two = base.rational(2)
    ctx = base.extend(two)
    x0 = ctx.rational(-1, depth=1) + ctx.generator_sqrt(0)
    y0 = two.with_ctx(ctx)
    return orbit_verify(x0, y0, depth)
