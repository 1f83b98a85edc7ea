"""Counting and coverage experiments over the shear monoid.

Three probes of the plane dynamics, each emitting a small report object:

* the unit-square point count of the monoid orbit of (r, r), whose r^2
  scaling recovers 6/pi^2 when sigma is tangent to the identity;
* grid coverage of the sampled line field spanned by the images of the
  x axis (density of the orbit closure);
* the discreteness probe at the square profile, which enumerates verified
  preimages of (1, 0) and watches the point count and minimal gap freeze
  as the word length grows.

All enumerations prune on the monotone growth of coordinate magnitudes
under both letters, which is what keeps the trees finite.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .euclid import RegionLabel, euclid_step
from .sigma import Point2, SigmaMap, h_ij, v_ij
from .words import rational_lines

_SNAP = 1e9  # dedup grid: coordinates are keyed at 1e-9 resolution

# Closed-box membership in float walks: accumulated rounding can push a point
# whose true coordinate is exactly 1 to 1 + few ulps, which must not prune it.
_BOUNDARY_EPS = 1e-9


@dataclass(frozen=True)
class MertensReport:
    sigma: str
    r_text: str
    r: float
    exact: bool
    count: int
    normalized: float
    boundary: str = "closed"
    dedup: str = "exact"


@dataclass(frozen=True)
class CoverageReport:
    sigma: str
    depth: int
    grid_n: int
    box: tuple[float, float, float, float]
    t_samples: int
    fraction: float
    hit_cells: int
    total_cells: int
    max_empty_cell_distance: int


@dataclass(frozen=True)
class DiscretenessReport:
    box: tuple[float, float, float, float]
    depth: int
    count: int
    min_gap: float
    prev_depth: int
    prev_count: int
    prev_min_gap: float
    stabilized: bool
    points: tuple[Point2, ...] = field(repr=False, default=())


@dataclass(frozen=True)
class NdCoverageReport:
    sigma: str
    dim: int
    depth: int
    grid_n: int
    box: tuple[float, ...]
    points: int
    fraction: float
    hit_cells: int
    total_cells: int
    truncated: bool


def _snap_key(x: float, y: float) -> tuple[int, int]:
    return (round(x * _SNAP), round(y * _SNAP))


def mertens_count(s: SigmaMap, r: Fraction | float, exact: bool = False) -> MertensReport:
    """Count the distinct monoid images of (r, r) inside the closed unit square.

    Exact mode (identity sigma, rational r) walks the integer tree scaled by
    the denominator, where distinct words provably give distinct points.
    Float mode deduplicates on a 1e-9 snap grid.
    """
    if isinstance(r, float):
        r = Fraction(r).limit_denominator(10**12) if not exact else Fraction(r)
    if not (0 < r <= 1):
        raise ValueError(f"need 0 < r <= 1, got {r}")
    r_text = f"{r.numerator}/{r.denominator}"
    if exact:
        if s.kind != "identity":
            raise ValueError("exact mode requires the identity sigma")
        p, q = r.numerator, r.denominator
        count = 0
        stack = [(p, p)]
        while stack:
            a, b = stack.pop()
            if a > q or b > q:
                continue
            count += 1
            stack.append((a + b, b))
            stack.append((a, a + b))
        return MertensReport(
            s.descriptor, r_text, float(r), True, count, float(r * r * count)
        )

    rf = float(r)
    seen: set[tuple[int, int]] = set()
    stack: list[Point2] = [(rf, rf)]
    while stack:
        x, y = stack.pop()
        if x > 1.0 + _BOUNDARY_EPS or y > 1.0 + _BOUNDARY_EPS:
            continue
        seen.add(_snap_key(x, y))
        stack.append((x + s.inverse(y), y))
        stack.append((x, y + s.forward(x)))
    count = len(seen)
    return MertensReport(
        s.descriptor, r_text, rf, False, count, rf * rf * count, dedup="snap-1e-9"
    )


def mertens_points(s: SigmaMap, r: Fraction | float) -> list[Point2]:
    """The distinct monoid images of (r, r) in the closed unit square.

    Float walk with snap dedup, for tables and figures; mertens_count is the
    one to trust for the counts themselves.
    """
    rf = float(r)
    if not (0 < rf <= 1):
        raise ValueError(f"need 0 < r <= 1, got {r}")
    found: dict[tuple[int, int], Point2] = {}
    stack: list[Point2] = [(rf, rf)]
    while stack:
        x, y = stack.pop()
        if x > 1.0 + _BOUNDARY_EPS or y > 1.0 + _BOUNDARY_EPS:
            continue
        found.setdefault(_snap_key(x, y), (x, y))
        stack.append((x + s.inverse(y), y))
        stack.append((x, y + s.forward(x)))
    return sorted(found.values())


def _mark_cells(
    grid: np.ndarray,
    box: tuple[float, float, float, float],
    xs: np.ndarray,
    ys: np.ndarray,
) -> None:
    x0, y0, x1, y1 = box
    n = grid.shape[0]
    inside = (xs >= x0) & (xs <= x1) & (ys >= y0) & (ys <= y1)
    if not inside.any():
        return
    ix = np.minimum((xs[inside] - x0) / (x1 - x0) * n, n - 1).astype(int)
    iy = np.minimum((ys[inside] - y0) / (y1 - y0) * n, n - 1).astype(int)
    grid[ix, iy] = True


def _max_empty_distance(grid: np.ndarray) -> int:
    """Chebyshev distance from the worst empty cell to the nearest hit cell."""
    if grid.all():
        return 0
    if not grid.any():
        return -1  # nothing hit at all
    reach = grid.copy()
    dist = 0
    while not reach.all():
        dist += 1
        grown = reach.copy()
        grown[1:, :] |= reach[:-1, :]
        grown[:-1, :] |= reach[1:, :]
        grown[:, 1:] |= reach[:, :-1]
        grown[:, :-1] |= reach[:, 1:]
        grown[1:, 1:] |= reach[:-1, :-1]
        grown[:-1, :-1] |= reach[1:, 1:]
        grown[1:, :-1] |= reach[:-1, 1:]
        grown[:-1, 1:] |= reach[1:, :-1]
        reach = grown
    return dist


def coverage_grid(
    s: SigmaMap,
    depth: int,
    grid_n: int,
    box: tuple[float, float, float, float] = (0.05, 0.05, 1.0, 1.0),
    t_samples: int = 4001,
    t_max: float | None = None,
    threads: int = 1,
) -> np.ndarray:
    """Boolean n x n mask of grid cells reached by the sampled line field.

    Samples w((t, 0)) for all words w of length <= depth on a uniform
    t grid and marks the cells hit inside the box.  Subtrees rooted one
    level below the axis can be walked on a thread pool; the merge is an
    order-independent OR of hit masks.
    """
    x0, y0, x1, y1 = box
    if not (x0 < x1 and y0 < y1):
        raise ValueError(f"degenerate box {box}")
    if t_max is None:
        t_max = x1
    ts = np.linspace(0.0, t_max, t_samples)
    prune_box = (0.0, 0.0, x1, y1)

    def run_tree(blocks: Iterable) -> np.ndarray:
        g = np.zeros((grid_n, grid_n), dtype=bool)
        for _, _, xs, ys in blocks:
            _mark_cells(g, box, xs, ys)
        return g

    if threads <= 1:
        return run_tree(rational_lines(s, depth, ts, prune_box))

    seed_depth = min(depth, 3)
    blocks = list(rational_lines(s, seed_depth, ts, prune_box))
    seeds = [b for b in blocks if len(b[0]) == seed_depth]
    grid = run_tree(b for b in blocks if len(b[0]) < seed_depth)
    if depth > 3:

        def job(seed):
            word, t, xs, ys = seed
            sub = _subtree_blocks(s, word, t, xs, ys, depth - len(word), prune_box)
            return run_tree(sub)

        with ThreadPoolExecutor(max_workers=threads) as pool:
            for g in pool.map(job, seeds):
                grid |= g
    else:
        for word, t, xs, ys in seeds:
            _mark_cells(grid, box, xs, ys)
    return grid


def density_coverage(
    s: SigmaMap,
    depth: int,
    grid_n: int,
    box: tuple[float, float, float, float] = (0.05, 0.05, 1.0, 1.0),
    t_samples: int = 4001,
    t_max: float | None = None,
    threads: int = 1,
    grid: np.ndarray | None = None,
) -> CoverageReport:
    """Summarize line-field coverage of the box as a report.

    Pass a mask from coverage_grid (same parameters) to skip recomputing
    the tree walk, e.g. when the mask is also being rendered.
    """
    if grid is None:
        grid = coverage_grid(s, depth, grid_n, box, t_samples, t_max, threads)
    hit = int(grid.sum())
    total = grid_n * grid_n
    return CoverageReport(
        s.descriptor,
        depth,
        grid_n,
        box,
        t_samples,
        hit / total,
        hit,
        total,
        _max_empty_distance(grid),
    )


def _subtree_blocks(s, word, t, xs, ys, depth_left, prune_box):
    """Continue a rational_lines walk below an existing node."""
    bx = max(abs(prune_box[0]), abs(prune_box[2]))
    by = max(abs(prune_box[1]), abs(prune_box[3]))

    def walk(w, t, x, y, left):
        live = (np.abs(x) <= bx) & (np.abs(y) <= by)
        if not live.all():
            t, x, y = t[live], x[live], y[live]
        if t.size == 0:
            return
        yield w, t, x, y
        if left == 0:
            return
        for ch in ("h", "v"):
            if ch == "h":
                x2, y2 = x + s.inverse_np(y), y
            else:
                x2, y2 = x, y + s.forward_np(x)
            if np.array_equal(x2, x) and np.array_equal(y2, y):
                continue
            yield from walk(ch + w, t, x2, y2, left - 1)

    yield from walk(word, t, xs, ys, depth_left)


def discreteness_probe(
    depth: int,
    box: tuple[float, float, float, float] = (0.0, 0.0, 2.0, 2.0),
    verify_tol: float = 1e-9,
) -> DiscretenessReport:
    """Verified preimages of (1, 0) under the square-profile slow algorithm.

    Enumerates monoid images w((1, 0)) for |w| <= depth inside the box,
    keeps the points whose |w| slow steps really return to (1, 0) (boundary
    words can land in the wrong cell and are dropped), and reports the count
    and minimal pairwise gap at this depth and two levels earlier.
    """
    s = SigmaMap.power(2.0)
    cur = _discrete_level(s, depth, box, verify_tol)
    if depth < 2:
        # No earlier level to compare against; leave the comparison empty.
        return DiscretenessReport(
            box, depth, len(cur), _min_gap(cur), None, None, None,
            stabilized=False, points=tuple(sorted(cur)),
        )
    prev = _discrete_level(s, depth - 2, box, verify_tol)
    return DiscretenessReport(
        box,
        depth,
        len(cur),
        _min_gap(cur),
        depth - 2,
        len(prev),
        _min_gap(prev),
        stabilized=len(cur) == len(prev),
        points=tuple(sorted(cur)),
    )


def _discrete_level(s, depth, box, tol):
    if depth < 0:
        raise ValueError("depth must be >= 0")
    bx = max(abs(box[0]), abs(box[2]))
    by = max(abs(box[1]), abs(box[3]))
    found: dict[tuple[int, int], tuple[Point2, int]] = {}
    stack: list[tuple[Point2, int]] = [((1.0, 0.0), 0)]
    while stack:
        (x, y), used = stack.pop()
        if abs(x) > bx or abs(y) > by:
            continue
        key = _snap_key(x, y)
        if key not in found or found[key][1] > used:
            found[key] = ((x, y), used)
        if used == depth:
            continue
        hx = x + s.inverse(y)
        if (hx, y) != (x, y):
            stack.append(((hx, y), used + 1))
        stack.append(((x, y + s.forward(x)), used + 1))
    out = []
    x0, y0, x1, y1 = box
    for (p, length) in found.values():
        if not (x0 <= p[0] <= x1 and y0 <= p[1] <= y1):
            continue
        if _verifies(s, p, length, tol):
            out.append(p)
    return out


def _verifies(s: SigmaMap, p: Point2, length: int, tol: float) -> bool:
    cur = p
    for _ in range(length):
        step = euclid_step(s, cur)
        cur = step.result
        if step.label is RegionLabel.AXIS_FIXED:
            break
    return abs(cur[0] - 1.0) + abs(cur[1]) <= tol


def _min_gap(points: Sequence[Point2]) -> float:
    best = math.inf
    for i in range(len(points)):
        for k in range(i + 1, len(points)):
            dx = points[i][0] - points[k][0]
            dy = points[i][1] - points[k][1]
            best = min(best, math.hypot(dx, dy))
    return best


def orbit_coverage_nd(
    s: SigmaMap,
    start: tuple[float, ...],
    depth: int,
    grid_n: int,
    box: tuple[float, ...] | None = None,
    max_points: int = 200_000,
    margin: float = 1.5,
) -> NdCoverageReport:
    """Coverage of a coarse n-dimensional grid by the full shear monoid.

    In dimension n the monoid has a shear pair for every coordinate pair
    i < j; a start with two coordinates of opposite signs has dense orbit,
    and this probes how quickly a grid box fills in.  Breadth-first with a
    visited set keyed on the snap grid; points outside the enlarged box are
    not expanded, and the walk stops early if the visited set hits
    max_points (reported as truncated).
    """
    dim = len(start)
    if dim not in (3, 4):
        raise ValueError(f"dimension must be 3 or 4, got {dim}")
    if not any(
        start[i] * start[j] < 0 for i in range(dim) for j in range(i + 1, dim)
    ):
        raise ValueError("need two start coordinates of opposite signs")
    if box is None:
        box = (-1.0, 1.0) * dim
    lows = box[0::2]
    highs = box[1::2]
    if len(lows) != dim:
        raise ValueError(f"box must give {dim} (low, high) pairs, got {box}")
    # The walk region must contain the start with one box-width of slack,
    # or a start outside the reporting box could never route back into it.
    exp_lo = [
        min(lo - (margin - 1.0) * (hi - lo), st - (hi - lo))
        for lo, hi, st in zip(lows, highs, start)
    ]
    exp_hi = [
        max(hi + (margin - 1.0) * (hi - lo), st + (hi - lo))
        for lo, hi, st in zip(lows, highs, start)
    ]

    pairs = [(i + 1, j + 1) for i in range(dim) for j in range(i + 1, dim)]
    visited: dict[tuple[int, ...], tuple[float, ...]] = {}
    frontier = [tuple(float(c) for c in start)]
    visited[tuple(round(c * _SNAP) for c in start)] = frontier[0]
    truncated = False
    for _ in range(depth):
        if truncated or not frontier:
            break
        nxt = []
        for p in frontier:
            for (i, j) in pairs:
                for q in (h_ij(s, i, j, p), v_ij(s, i, j, p)):
                    if any(not (lo <= c <= hi) for c, lo, hi in zip(q, exp_lo, exp_hi)):
                        continue
                    key = tuple(round(c * _SNAP) for c in q)
                    if key in visited:
                        continue
                    visited[key] = q
                    nxt.append(q)
                    if len(visited) >= max_points:
                        truncated = True
                        break
                if truncated:
                    break
            if truncated:
                break
        frontier = nxt

    cells: set[tuple[int, ...]] = set()
    for p in visited.values():
        idx = []
        ok = True
        for c, lo, hi in zip(p, lows, highs):
            if not (lo <= c <= hi):
                ok = False
                break
            idx.append(min(int((c - lo) / (hi - lo) * grid_n), grid_n - 1))
        if ok:
            cells.add(tuple(idx))
    total = grid_n**dim
    return NdCoverageReport(
        s.descriptor,
        dim,
        depth,
        grid_n,
        box,
        len(visited),
        len(cells) / total,
        len(cells),
        total,
        truncated,
    )
