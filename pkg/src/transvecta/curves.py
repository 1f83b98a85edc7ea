"""The invariant curve family c_a(x) = (x, a*sigma(x)) for power profiles.

The shears act on the parameter a by the push maps

    h: a -> a / (1 + a**(1/alpha))**alpha        (sends [0, inf] to [0, 1])
    v: a -> a + 1

so an infinite word over {h, v} pins down a curve parameter through nested
images of [0, inf].  Words are (preperiod, period) pairs; the slow dynamics
restricted to a curve is conjugate to x -> k(w) x together with a shift of
the word, and the kernel dx/x is what makes that scaling measure-preserving.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INF = math.inf

_MAX_LETTERS = 10_000


class NonConvergence(RuntimeError):
    """The nested parameter intervals failed to shrink below tolerance."""


@dataclass(frozen=True)
class WordSpec:
    """An eventually periodic word: pre + per + per + ...

    An empty period means a finite word (truncation error is then reported
    by a_of_word); an empty preperiod means a purely periodic word.
    """

    pre: str = ""
    per: str = ""

    def __post_init__(self):
        for ch in self.pre + self.per:
            if ch not in "hv":
                raise ValueError(f"word letters must be h or v, got {ch!r}")

    @staticmethod
    def parse(text: str) -> "WordSpec":
        """Parse ``pre:per``, e.g. ``h:v`` for h v^inf or ``:hv`` for (hv)^inf."""
        if ":" not in text:
            raise ValueError(f"word spec {text!r} needs the form pre:per")
        pre, _, per = text.partition(":")
        return WordSpec(pre, per)

    @property
    def text(self) -> str:
        return f"{self.pre}:{self.per}"

    @property
    def first(self) -> str:
        w = self.pre + self.per
        if not w:
            raise ValueError("empty word has no first letter")
        return w[0]

    def letters(self, n: int) -> str:
        """The first n letters."""
        if len(self.pre) >= n or not self.per:
            return (self.pre)[:n]
        reps = -(-(n - len(self.pre)) // len(self.per))
        return (self.pre + self.per * reps)[:n]

    def shift(self) -> "WordSpec":
        if self.pre:
            return WordSpec(self.pre[1:], self.per)
        if not self.per:
            raise ValueError("cannot shift the empty word")
        return WordSpec("", self.per[1:] + self.per[0])


@dataclass(frozen=True)
class AWordResult:
    a: float
    lo: float
    hi: float
    letters_used: int
    method: str
    truncation_error: float = 0.0


def push_h(alpha: float, a: float) -> float:
    """Parameter push of the horizontal shear; maps [0, inf] onto [0, 1]."""
    _check_alpha(alpha)
    _check_param(a)
    if a == INF:
        return 1.0
    if a == 0.0:
        return 0.0
    if a > 1.0:  # rearranged to stay finite for huge a
        return 1.0 / (1.0 + a ** (-1.0 / alpha)) ** alpha
    return a / (1.0 + a ** (1.0 / alpha)) ** alpha


def push_v(alpha: float, a: float) -> float:
    """Parameter push of the vertical shear."""
    _check_alpha(alpha)
    _check_param(a)
    return a if a == INF else a + 1.0


def _check_alpha(alpha: float) -> None:
    if not (alpha > 0 and math.isfinite(alpha)):
        raise ValueError(f"alpha must be positive and finite, got {alpha}")


def _check_param(a: float) -> None:
    if a != INF and not (a >= 0 and math.isfinite(a)):
        raise ValueError(f"curve parameter must be in [0, inf], got {a}")


def _push(alpha: float, ch: str, a: float) -> float:
    return push_h(alpha, a) if ch == "h" else push_v(alpha, a)


def _fold(alpha: float, letters: str, a: float) -> float:
    """Apply the pushes of a finite word, last letter innermost."""
    for ch in reversed(letters):
        a = _push(alpha, ch, a)
    return a


def a_of_word(alpha: float, w: WordSpec, tol: float = 1e-12) -> AWordResult:
    """The curve parameter selected by an infinite word.

    Nested images of [0, inf] under growing prefixes shrink to the value;
    evaluation restarts with twice the letters until the interval is below
    tol.  Purely periodic tails are additionally resolved by bisecting the
    fixed-point equation of the period's composite push, and both answers
    must agree within 10 tol.  Constant tails short-circuit: a(v^inf) = inf
    and a(h^inf) = 0 exactly, then the preperiod is folded on top.
    """
    _check_alpha(alpha)
    if not w.per:
        lo = _fold(alpha, w.pre, 0.0)
        hi = _fold(alpha, w.pre, INF)
        mid = lo if hi == INF else 0.5 * (lo + hi)
        return AWordResult(mid, lo, hi, len(w.pre), "finite-prefix", hi - lo)
    if set(w.per) == {"v"}:
        a = _fold(alpha, w.pre, INF)
        return AWordResult(a, a, a, len(w.pre), "constant-tail")
    if set(w.per) == {"h"}:
        a = _fold(alpha, w.pre, 0.0)
        return AWordResult(a, a, a, len(w.pre), "constant-tail")

    n = 32
    lo = hi = math.nan
    while True:
        letters = w.letters(n)
        lo = _fold(alpha, letters, 0.0)
        hi = _fold(alpha, letters, INF)
        if hi - lo < tol:
            break
        if n >= _MAX_LETTERS:
            raise NonConvergence(
                f"interval width {hi - lo:g} after {n} letters of {w.text}"
            )
        n *= 2

    a = 0.5 * (lo + hi)
    # refine a purely periodic tail through its fixed point
    per_lo, per_hi = lo, hi
    if w.pre:
        tail = WordSpec("", w.per)
        m = 32
        while True:
            letters = tail.letters(m)
            per_lo = _fold(alpha, letters, 0.0)
            per_hi = _fold(alpha, letters, INF)
            if per_hi - per_lo < tol or m >= _MAX_LETTERS:
                break
            m *= 2
    fixed = _period_fixed_point(alpha, w.per, per_lo, per_hi, tol)
    if fixed is not None:
        refined = _fold(alpha, w.pre, fixed)
        if abs(refined - a) > 10.0 * tol:
            raise NonConvergence(
                f"interval value {a!r} and fixed-point value {refined!r} disagree"
            )
        a = refined
    return AWordResult(a, lo, hi, n, "interval+fixed-point" if fixed is not None else "interval")


def _period_fixed_point(
    alpha: float, per: str, lo: float, hi: float, tol: float
) -> float | None:
    """Bisect F(a) - a for the period composite F on a bracketing interval."""

    def g(a: float) -> float:
        return _fold(alpha, per, a) - a

    pad = max(10.0 * tol, 1e-3 * (hi - lo))
    lo = max(0.0, lo - pad)
    hi = hi + pad
    glo, ghi = g(lo), g(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if not (glo > 0.0 > ghi):
        return None
    while hi - lo > 0.1 * tol:
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def k_of_word(alpha: float, w: WordSpec, tol: float = 1e-12) -> float:
    """The abscissa contraction of one slow step along the word's curve.

    1 - a(w)**(1/alpha) when the leading letter is h (then a(w) <= 1), and
    exactly 1 when it is v.  A value of 0 marks the degenerate boundary
    word h v^inf.
    """
    if w.first == "v":
        return 1.0
    a = a_of_word(alpha, w, tol).a
    return 1.0 - a ** (1.0 / alpha)


def h_sigma_step(alpha: float, x: float, w: WordSpec, tol: float = 1e-12) -> tuple[float, WordSpec]:
    """One slow step in curve coordinates: (x, w) -> (k(w) x, shift(w))."""
    return k_of_word(alpha, w, tol) * x, w.shift()


def kernel_invariance_check(u: float, v: float, k: float) -> bool:
    """The dx/x mass of [u, v] equals that of [k u, k v] (tested in binary64)."""
    if not (0 < u < v) or not k > 0:
        raise ValueError("need 0 < u < v and k > 0")
    return abs(math.log(v / u) - math.log((k * v) / (k * u))) <= 1e-14
