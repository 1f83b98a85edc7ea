"""Words in the shear maps: evaluation, coding, matrices, and line fields.

Words are strings over ``h`` and ``v``; uppercase letters denote inverses,
so ``"HvH"`` is h_inv o v o h_inv.  The first letter is the outermost map:
``eval_word(s, "hv", p)`` computes h(v(p)).

The coding direction is the content of the cell refinement: every point of
X off the excluded set lies in w(X) for exactly one length-n word w over
{h, v}, and n slow steps recover w letter by letter.  Points of Y are coded
the same way over the inverse alphabet.
"""

from __future__ import annotations

from typing import Callable, Iterator

import numpy as np

from .euclid import RegionLabel, euclid_step
from .sigma import Point2, SigmaMap, h, h_inv, v, v_inv

IntMatrix2 = tuple[tuple[int, int], tuple[int, int]]

_IDENTITY: IntMatrix2 = ((1, 0), (0, 1))

_LETTER_FUN: dict[str, Callable[[SigmaMap, Point2], Point2]] = {
    "h": h,
    "v": v,
    "H": h_inv,
    "V": v_inv,
}

_LETTER_MAT: dict[str, IntMatrix2] = {
    "h": ((1, 1), (0, 1)),
    "v": ((1, 0), (1, 1)),
    "H": ((1, -1), (0, 1)),
    "V": ((1, 0), (-1, 1)),
}

# Relator words for the integer-fixing families: the order-4 element
# V = h_inv o v o h_inv and U = v_inv o h satisfy V^4 = id and V^2 U^3 = id
# on Z^2 (as integer matrices they are the standard elliptic elements).
ROTATION_WORD = "HvH"
U_WORD = "Vh"


class AxisHit(Exception):
    """Coding ran into the axes: the point is sigma-rational."""

    def __init__(self, word_so_far: str, point: Point2):
        super().__init__(f"axis hit after {len(word_so_far)} letters at {point}")
        self.word_so_far = word_so_far
        self.point = point


def check_word(w: str) -> str:
    if not all(ch in _LETTER_FUN for ch in w):
        raise ValueError(f"word {w!r} has letters outside h, v, H, V")
    return w


def eval_word(s: SigmaMap, w: str, p: Point2) -> Point2:
    """Apply the word to p, first letter outermost."""
    check_word(w)
    for ch in reversed(w):
        p = _LETTER_FUN[ch](s, p)
    return p


def invert_word(w: str) -> str:
    """The group inverse: reverse the word and swap letters with inverses."""
    return check_word(w)[::-1].swapcase()


def encode(s: SigmaMap, p: Point2, n: int) -> str:
    """The length-n word w with p in w(X) (or w(Y) on the Y side).

    Letter i is read off the cell of the i-th slow iterate: A gives ``h``
    and B gives ``v``; on the Y side C gives ``H`` and D gives ``V``.
    Raises AxisHit if an iterate lands on the axes before n letters.
    """
    letters: list[str] = []
    cur = p
    for _ in range(n):
        step = euclid_step(s, cur)
        if step.label is RegionLabel.AXIS_FIXED:
            raise AxisHit("".join(letters), cur)
        letters.append(
            {
                RegionLabel.A: "h",
                RegionLabel.B: "v",
                RegionLabel.C: "H",
                RegionLabel.D: "V",
            }[step.label]
        )
        cur = step.result
    return "".join(letters)


def mat_mul(a: IntMatrix2, b: IntMatrix2) -> IntMatrix2:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def mat_apply(m: IntMatrix2, q: tuple[int, int]) -> tuple[int, int]:
    return (m[0][0] * q[0] + m[0][1] * q[1], m[1][0] * q[0] + m[1][1] * q[1])


def matrix_of_word(w: str) -> IntMatrix2:
    """The exact integer matrix of a word (word order = composition order)."""
    m = _IDENTITY
    for ch in check_word(w):
        m = mat_mul(m, _LETTER_MAT[ch])
    return m


def morphism_check(s: SigmaMap, w: str, q: tuple[int, int]) -> bool:
    """On Z^2 an integer-fixing sigma acts through the integer matrices.

    Evaluates the word with the shear maps in floating point and compares
    exactly against the integer matrix action.
    """
    if not s.fixes_integers:
        raise ValueError(f"sigma {s.descriptor} does not fix the integers")
    if not all(float(c).is_integer() for c in q):
        raise ValueError(f"morphism check needs an integer point, got {q}")
    got = eval_word(s, w, (float(q[0]), float(q[1])))
    want = mat_apply(matrix_of_word(w), (int(q[0]), int(q[1])))
    return got == (float(want[0]), float(want[1]))


def words_of_length(n: int, alphabet: str = "hv") -> Iterator[str]:
    if n == 0:
        yield ""
        return
    for w in words_of_length(n - 1, alphabet):
        for ch in alphabet:
            yield w + ch


def rational_lines(
    s: SigmaMap,
    depth: int,
    ts: np.ndarray,
    box: tuple[float, float, float, float] | None = None,
    axis: str = "x",
) -> Iterator[tuple[str, np.ndarray, np.ndarray, np.ndarray]]:
    """Sampled images of an axis under all words of length <= depth.

    Yields (word, t, x, y) blocks: the points w((t, 0)) for the x axis and
    the monoid over {h, v}, or w((0, t)) for the y axis and the inverse
    alphabet {H, V}.  A bounding box prunes the tree: both letters move
    points weakly away from the origin coordinatewise, so a sample whose
    magnitudes exceed the box's largest corner never comes back and is
    dropped; a subtree with no live samples is cut.  Letters that fix the
    current samples pointwise (h on the x axis, V on the y axis) would
    duplicate whole subtrees and are skipped.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    ts = np.asarray(ts, dtype=float)
    if axis == "x":
        letters = ("h", "v")
        x0, y0 = ts.copy(), np.zeros_like(ts)
    else:
        letters = ("H", "V")
        x0, y0 = np.zeros_like(ts), ts.copy()
    if box is not None:
        bx = max(abs(box[0]), abs(box[2]))
        by = max(abs(box[1]), abs(box[3]))

    def apply_np(ch: str, x: np.ndarray, y: np.ndarray):
        if ch == "h":
            return x + s.inverse_np(y), y
        if ch == "H":
            return x - s.inverse_np(y), y
        if ch == "v":
            return x, y + s.forward_np(x)
        return x, y - s.forward_np(x)

    def walk(word: str, t: np.ndarray, x: np.ndarray, y: np.ndarray, left: int):
        if box is not None:
            live = (np.abs(x) <= bx) & (np.abs(y) <= by)
            if not live.all():
                t, x, y = t[live], x[live], y[live]
        if t.size == 0:
            return
        yield word, t, x, y
        if left == 0:
            return
        for ch in letters:
            x2, y2 = apply_np(ch, x, y)
            if np.array_equal(x2, x) and np.array_equal(y2, y):
                continue  # letter fixes every sample: identical subtree
            yield from walk(ch + word, t, x2, y2, left - 1)

    yield from walk("", ts, x0, y0, depth)
