"""Figure rendering for the CLI report paths.

Every function takes computed data plus a file path, draws one figure with
the Agg backend, and writes it; nothing here ever opens a window.  The CLI
calls these when --plot is given, next to the JSON or CSV it already wrote.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .sigma import Point2, SigmaMap  # noqa: E402
from .torus import TorusMapPair  # noqa: E402
from .words import rational_lines  # noqa: E402


def _save(fig, path: str) -> None:
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def save_euclid_figure(points: Sequence[Point2], path: str, title: str) -> None:
    """The slow or accelerated trajectory, start marked, steps joined."""
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(xs, ys, "-o", ms=3, lw=0.8, color="tab:blue")
    ax.plot(xs[0], ys[0], "s", ms=7, color="tab:red", label="start")
    ax.axhline(0.0, color="0.7", lw=0.6)
    ax.axvline(0.0, color="0.7", lw=0.6)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(title)
    ax.legend(loc="best")
    _save(fig, path)


def save_lines_figure(
    s: SigmaMap,
    depth: int,
    ts: np.ndarray,
    box: tuple[float, float, float, float] | None,
    path: str,
) -> None:
    """Sampled images of the x axis, one dot per sample, shaded by depth."""
    fig, ax = plt.subplots(figsize=(5, 5))
    cmap = plt.get_cmap("viridis")
    for word, _, xs, ys in rational_lines(s, depth, ts, box):
        ax.plot(
            xs,
            ys,
            ".",
            ms=1.2,
            color=cmap(len(word) / max(depth, 1)),
            rasterized=True,
        )
    if box is not None:
        ax.set_xlim(box[0], box[2])
        ax.set_ylim(box[1], box[3])
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"line field, sigma={s.descriptor}, depth {depth}")
    _save(fig, path)


def save_coverage_figure(
    grid: np.ndarray, box: tuple[float, float, float, float], path: str, title: str
) -> None:
    """Hit mask of the coverage grid; grid[ix, iy] has ix along x."""
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.imshow(
        grid.T,
        origin="lower",
        extent=(box[0], box[2], box[1], box[3]),
        cmap="Greens",
        vmin=0.0,
        vmax=1.0,
        aspect="auto",
        interpolation="nearest",
    )
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(title)
    _save(fig, path)


def save_discreteness_figure(
    points: Sequence[Point2],
    box: tuple[float, float, float, float],
    min_gap: float,
    path: str,
) -> None:
    fig, ax = plt.subplots(figsize=(5, 5))
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    ax.plot(xs, ys, "o", ms=6, color="tab:purple")
    ax.set_xlim(box[0] - 0.1, box[2] + 0.1)
    ax.set_ylim(box[1] - 0.1, box[3] + 0.1)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"verified returns to (1, 0): {len(points)} points, min gap {min_gap:.3g}")
    _save(fig, path)


def save_mertens_figure(points: Iterable[Point2], r_text: str, path: str) -> None:
    fig, ax = plt.subplots(figsize=(5, 5))
    pts = list(points)
    ax.plot([p[0] for p in pts], [p[1] for p in pts], ".", ms=2, color="tab:orange")
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(0.0, 1.0)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"orbit of ({r_text}, {r_text}) in the unit square: {len(pts)} points")
    _save(fig, path)


def save_torus_figure(
    pair: TorusMapPair, n: int, seed: int, path: str, bins: int = 50
) -> None:
    """Histogram of uniform samples pushed through one h then one v shear."""
    rng = np.random.default_rng(seed)
    xs = rng.random(n)
    ys = rng.random(n)
    xs = (xs + pair.s2.value_np(ys)) % 1.0
    ys = (ys + pair.s1.value_np(xs)) % 1.0
    fig, ax = plt.subplots(figsize=(5, 5))
    h = ax.hist2d(xs, ys, bins=bins, range=((0, 1), (0, 1)), cmap="magma")
    fig.colorbar(h[3], ax=ax, label="samples per cell")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"pushforward of {n} uniform points (v o h)")
    _save(fig, path)
