"""Shear pairs on the two-torus and their equidistribution checks.

The maps

    h(x, y) = (x + s2(y) mod 1, y)      v(x, y) = (x, y + s1(x) mod 1)

preserve Lebesgue measure for any pair of circle maps s1, s2.  When s2 is
constant at an irrational the horizontal map is a rotation in x on each
horizontal circle, so Birkhoff averages of product observables factor into
a space average in x times the frozen y value; the module ships that test
along with a plain histogram check of measure invariance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class RationalTranslationWarning(UserWarning):
    """The sampled translation number is (nearly) rational; averages may drift."""


@dataclass(frozen=True)
class CircleMap:
    """A circle map: constant, linear x -> a x, or the sine wobble profile."""

    kind: str  # "const" | "scale" | "sine"
    param: float

    @staticmethod
    def from_descriptor(text: str) -> "CircleMap":
        parts = text.strip().split(":")
        if len(parts) == 2 and parts[0] in ("const", "scale", "sine"):
            val = float(parts[1])
            if parts[0] == "sine" and not abs(val) < 1:
                raise ValueError(f"sine circle map needs |c| < 1, got {val}")
            return CircleMap(parts[0], val)
        raise ValueError(f"unknown circle map descriptor {text!r}")

    @property
    def descriptor(self) -> str:
        return f"{self.kind}:{self.param:g}"

    def __call__(self, x: float) -> float:
        if self.kind == "const":
            return self.param
        if self.kind == "scale":
            return _mod1(self.param * x)
        f = x - round(x)
        return _mod1(x + self.param * math.sin(2.0 * math.pi * f) / (2.0 * math.pi))

    def value_np(self, x: np.ndarray) -> np.ndarray:
        if self.kind == "const":
            return np.full_like(x, self.param)
        if self.kind == "scale":
            return (self.param * x) % 1.0
        f = x - np.round(x)
        return (x + self.param * np.sin(2.0 * np.pi * f) / (2.0 * np.pi)) % 1.0


def _mod1(x: float) -> float:
    r = x % 1.0
    return 0.0 if r == 1.0 else r  # x % 1.0 can round up to 1.0 for tiny x < 0


@dataclass(frozen=True)
class TorusMapPair:
    s1: CircleMap
    s2: CircleMap


def torus_h(pair: TorusMapPair, p: tuple[float, float]) -> tuple[float, float]:
    x, y = p
    return (_mod1(x + pair.s2(y)), y)


def torus_h_inv(pair: TorusMapPair, p: tuple[float, float]) -> tuple[float, float]:
    x, y = p
    return (_mod1(x - pair.s2(y)), y)


def torus_v(pair: TorusMapPair, p: tuple[float, float]) -> tuple[float, float]:
    x, y = p
    return (x, _mod1(y + pair.s1(x)))


def torus_v_inv(pair: TorusMapPair, p: tuple[float, float]) -> tuple[float, float]:
    x, y = p
    return (x, _mod1(y - pair.s1(x)))


@dataclass(frozen=True)
class TrigPoly:
    """const + sum_k cos_k cos(2 pi k x) + sum_k sin_k sin(2 pi k x)."""

    const: float = 0.0
    cos: tuple[float, ...] = ()
    sin: tuple[float, ...] = ()

    @staticmethod
    def parse(text: str) -> "TrigPoly":
        """Parse sums like ``const:0.5+cos:1`` (cos:k means cos(2 pi k x))."""
        const = 0.0
        cos: dict[int, float] = {}
        sin: dict[int, float] = {}
        for term in text.split("+"):
            name, _, arg = term.strip().partition(":")
            if name == "const":
                const += float(arg)
            elif name in ("cos", "sin"):
                k = int(arg)
                if k < 1:
                    raise ValueError(f"frequency must be >= 1 in {term!r}")
                d = cos if name == "cos" else sin
                d[k] = d.get(k, 0.0) + 1.0
            else:
                raise ValueError(f"unknown observable term {term!r}")
        deg = max([0, *cos, *sin])
        return TrigPoly(
            const,
            tuple(cos.get(k, 0.0) for k in range(1, deg + 1)),
            tuple(sin.get(k, 0.0) for k in range(1, deg + 1)),
        )

    def value(self, x: float) -> float:
        out = self.const
        for k, c in enumerate(self.cos, start=1):
            out += c * math.cos(2.0 * math.pi * k * x)
        for k, c in enumerate(self.sin, start=1):
            out += c * math.sin(2.0 * math.pi * k * x)
        return out

    def value_np(self, x: np.ndarray) -> np.ndarray:
        out = np.full_like(x, self.const)
        for k, c in enumerate(self.cos, start=1):
            if c:
                out += c * np.cos(2.0 * np.pi * k * x)
        for k, c in enumerate(self.sin, start=1):
            if c:
                out += c * np.sin(2.0 * np.pi * k * x)
        return out

    def mean(self) -> float:
        """The Lebesgue average: every nonconstant harmonic integrates to 0."""
        return self.const


def birkhoff_product_test(
    pair: TorusMapPair,
    phi1: TrigPoly,
    phi2: TrigPoly,
    n: int,
    seed: int = 0,
    starts: int = 8,
) -> dict:
    """Time averages of phi1(x) phi2(y) along horizontal orbits.

    For each random start the horizontal map freezes y, so the orbit average
    must approach mean(phi1) * phi2(y).  Returns per-start deviations and
    their max; warns when a sampled translation number is close to a small
    rational, where equidistribution genuinely fails.
    """
    rng = np.random.default_rng(seed)
    rows = []
    worst = 0.0
    for _ in range(starts):
        x0, y0 = rng.random(), rng.random()
        alpha = pair.s2(y0)
        near = Fraction(alpha).limit_denominator(100)
        rational = abs(alpha - float(near)) < 1e-9
        if rational:
            warnings.warn(
                f"translation number {alpha!r} is within 1e-9 of {near}",
                RationalTranslationWarning,
                stacklevel=2,
            )
        xs = (x0 + alpha * np.arange(n)) % 1.0
        avg = float(np.mean(phi1.value_np(xs))) * phi2.value(y0)
        expected = phi1.mean() * phi2.value(y0)
        dev = abs(avg - expected)
        rows.append(
            {
                "x0": x0,
                "y0": y0,
                "translation": alpha,
                "average": avg,
                "expected": expected,
                "deviation": dev,
                "near_rational": rational,
            }
        )
        if not rational:
            worst = max(worst, dev)
    return {"n": n, "starts": starts, "max_deviation": worst, "orbits": rows}


def invariance_histogram_test(
    pair: TorusMapPair,
    which: str,
    n_samples: int,
    box: tuple[float, float, float, float] = (0.3, 0.5, 0.4, 0.6),
    seed: int = 0,
) -> dict:
    """Push uniform samples through one torus shear and count a fixed box.

    Invariance of Lebesgue measure puts the expected count at area * N;
    the report carries the z-score so a caller can apply a 4 sigma gate.
    """
    if which not in ("h", "v"):
        raise ValueError(f"which must be 'h' or 'v', got {which!r}")
    rng = np.random.default_rng(seed)
    xs = rng.random(n_samples)
    ys = rng.random(n_samples)
    if which == "h":
        xs = (xs + pair.s2.value_np(ys)) % 1.0
    else:
        ys = (ys + pair.s1.value_np(xs)) % 1.0
    x0, y0, x1, y1 = box
    count = int(np.count_nonzero((xs >= x0) & (xs < x1) & (ys >= y0) & (ys < y1)))
    p = (x1 - x0) * (y1 - y0)
    expected = n_samples * p
    sigma = math.sqrt(n_samples * p * (1.0 - p))
    z = (count - expected) / sigma if sigma else math.inf
    return {
        "map": which,
        "samples": n_samples,
        "box": box,
        "count": count,
        "expected": expected,
        "sigma": sigma,
        "z": z,
    }
