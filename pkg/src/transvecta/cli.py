"""Command line entry point.

One subcommand per library area: euclid, lines, cfrac, golden, tower
(verify-m0 | identity-check), lines-measure, mertens, coverage, discrete,
torus.  Summary reports are single canonical JSON objects, step streams are
JSON Lines, and CSV tables with a header row are available where a flat
shape exists.  JSON output is byte-identical across runs of the same
configuration: field order is fixed at construction and floats print with
17 significant digits.

Exit codes: 0 success, 2 validation error, 3 invariant violation.
A config file of ``key = value`` lines (``#`` comments) supplies defaults;
flags given on the command line win, and unknown keys are rejected.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .cfrac import digits as cfrac_digits
from .cfrac import golden_quartic_residual, golden_slope, s_ab, slope_point
from .curves import NonConvergence, WordSpec, a_of_word
from .euclid import DiagonalOrAxisError, RegionLabel, accel_step, euclid_step
from .experiments import (
    coverage_grid,
    density_coverage,
    discreteness_probe,
    mertens_count,
    mertens_points,
)
from .sigma import SigmaMap, norm1
from .torus import (
    CircleMap,
    TorusMapPair,
    TrigPoly,
    birkhoff_product_test,
    invariance_histogram_test,
)
from .tower import InvariantViolation, m0_identity_check, m0_orbit

PROG = "transvecta"

# -------------------------------------------------------------------------
# canonical serialization


def canonical_json(value: Any) -> str:
    """Deterministic JSON: insertion-ordered keys, 17-significant-digit floats.

    Non-finite floats have no JSON spelling and serialize as null.
    """
    parts: list[str] = []
    _emit(value, parts)
    return "".join(parts)


def _emit(v: Any, out: list[str]) -> None:
    if v is None:
        out.append("null")
    elif isinstance(v, (bool, np.bool_)):
        out.append("true" if v else "false")
    elif isinstance(v, (int, np.integer)):
        out.append(str(int(v)))
    elif isinstance(v, (float, np.floating)):
        f = float(v)
        if f == 0.0:
            out.append("0")  # collapse -0.0, which .17g would print as -0
        else:
            out.append(format(f, ".17g") if math.isfinite(f) else "null")
    elif isinstance(v, str):
        out.append(json.dumps(v))
    elif isinstance(v, dict):
        out.append("{")
        for i, (k, val) in enumerate(v.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(k)))
            out.append(":")
            _emit(val, out)
        out.append("}")
    elif isinstance(v, (list, tuple)):
        out.append("[")
        for i, item in enumerate(v):
            if i:
                out.append(",")
            _emit(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(v).__name__} to JSON")


def _cell(v: Any) -> str:
    """One CSV cell, formatted like the JSON floats for cross-format parity."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        f = float(v)
        if f == 0.0:
            return "0"
        return format(f, ".17g") if math.isfinite(f) else repr(f)
    return str(v)


def _open_out(path: str | None):
    if path:
        return open(path, "w", encoding="utf-8", newline="")
    return contextlib.nullcontext(sys.stdout)


def _emit_json(args, payload: dict) -> None:
    text = canonical_json(payload) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_jsonl(args, records: Iterable[dict]) -> None:
    with _open_out(args.out) as fh:
        for rec in records:
            fh.write(canonical_json(rec) + "\n")


def _emit_csv(args, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    with _open_out(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(c) for c in row])


# -------------------------------------------------------------------------
# flag value parsers (argparse reports their ValueErrors and exits 2)


def _point_type(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected x,y, got {text!r}")
    return (float(parts[0]), float(parts[1]))


def _box_type(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"expected x0,y0,x1,y1, got {text!r}")
    return tuple(float(p) for p in parts)  # type: ignore[return-value]


def _tgrid_type(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"expected t0:t1:steps, got {text!r}")
    steps = int(parts[2])
    if steps < 1:
        raise ValueError(f"grid needs at least one sample, got {steps}")
    return (float(parts[0]), float(parts[1]), steps)


def _rational_type(text: str) -> Fraction:
    return Fraction(text)  # accepts p/q, integers, and decimal literals


def _seed_type(text: str) -> int:
    seed = int(text)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must fit in unsigned 64 bits, got {seed}")
    return seed


def _threads_type(text: str) -> int:
    n = int(text)
    if n < 1:
        raise ValueError(f"thread count must be >= 1, got {n}")
    return n


def _require(args, dest: str):
    value = getattr(args, dest)
    if value is None:
        raise ValueError(f"--{dest.replace('_', '-')} is required")
    return value


def _resolve_threads(args) -> int:
    if getattr(args, "threads", None):
        return args.threads
    env = os.environ.get("TRANSVECTA_THREADS", "").strip()
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ValueError(f"TRANSVECTA_THREADS must be an integer, got {env!r}")
        if n < 1:
            raise ValueError(f"TRANSVECTA_THREADS must be >= 1, got {n}")
        return n
    return os.cpu_count() or 1


# -------------------------------------------------------------------------
# subcommand handlers

# The cell whose letter the accelerated step applied, recovered from the
# letter itself (A and B live on the X side, C and D on the Y side).
_CELL_OF_LETTER = {"h_inv": "A", "v_inv": "B", "h": "C", "v": "D"}


def _cmd_euclid(args) -> int:
    s: SigmaMap = args.sigma
    p = _require(args, "point")
    if args.steps < 1:
        raise ValueError(f"--steps must be >= 1, got {args.steps}")
    records: list[dict] = []
    trajectory = [p]
    cur = p
    if args.algorithm == "slow":
        for i in range(1, args.steps + 1):
            step = euclid_step(s, cur)
            cur = step.result
            records.append(
                {
                    "step": i,
                    "label": step.label.value,
                    "x": cur[0],
                    "y": cur[1],
                    "norm": norm1(cur),
                }
            )
            trajectory.append(cur)
            if step.label is RegionLabel.AXIS_FIXED:
                break  # fixed from here on
    else:
        for i in range(1, args.steps + 1):
            try:
                step = accel_step(s, cur)
            except DiagonalOrAxisError:
                if i == 1:
                    raise  # the start itself is excluded: report, emit nothing
                break  # landed on the excluded set: the stream just ends
            cur = step.result
            records.append(
                {
                    "step": i,
                    "label": _CELL_OF_LETTER[step.letter],
                    "digit": step.digit,
                    "x": cur[0],
                    "y": cur[1],
                    "norm": norm1(cur),
                }
            )
            trajectory.append(cur)
    if args.format == "csv":
        _emit_csv(
            args,
            ["step", "label", "digit", "x", "y", "norm"],
            (
                [r["step"], r["label"], r.get("digit", ""), r["x"], r["y"], r["norm"]]
                for r in records
            ),
        )
    else:
        _emit_jsonl(args, records)
    if args.plot:
        from . import plots

        plots.save_euclid_figure(
            trajectory, args.plot, f"{args.algorithm} algorithm, sigma={s.descriptor}"
        )
    return 0


def _cmd_lines(args) -> int:
    from .words import rational_lines

    s: SigmaMap = args.sigma
    t0, t1, steps = args.grid
    ts = np.linspace(t0, t1, steps)
    blocks = rational_lines(s, args.depth, ts, args.box)
    with _open_out(args.out) as fh:
        if args.format == "csv":
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["word", "t", "x", "y"])
            for word, t, xs, ys in blocks:
                for i in range(t.size):
                    w.writerow([word, _cell(t[i]), _cell(xs[i]), _cell(ys[i])])
        else:
            for word, t, xs, ys in blocks:
                for i in range(t.size):
                    rec = {"word": word, "t": t[i], "x": xs[i], "y": ys[i]}
                    fh.write(canonical_json(rec) + "\n")
    if args.plot:
        from . import plots

        plots.save_lines_figure(s, args.depth, ts, args.box, args.plot)
    return 0


def _cmd_cfrac(args) -> int:
    alpha: float = args.alpha
    r = _require(args, "slope")
    p = slope_point(alpha, r)
    exp = cfrac_digits(alpha, p, args.digits)
    payload = {
        "alpha": alpha,
        "slope": r,
        "pairs": [list(pair) for pair in exp.pairs],
        "residual_slope": exp.residual_slope,
        "terminated": exp.terminated,
    }
    if args.format == "csv":
        _emit_csv(
            args,
            ["n", "a", "b"],
            ([i, a, b] for i, (a, b) in enumerate(exp.pairs, start=1)),
        )
    else:
        _emit_json(args, payload)
    return 0


def _cmd_golden(args) -> int:
    alpha: float = args.alpha
    r = golden_slope(alpha)
    residual = abs(s_ab(alpha, 1, 1, r) - r)
    payload: dict[str, Any] = {"alpha": alpha, "r": r, "residual": residual}
    if alpha == 2.0:
        payload["quartic_residual"] = abs(golden_quartic_residual(r))
    if args.format == "csv":
        header = list(payload)
        _emit_csv(args, header, [[payload[k] for k in header]])
    else:
        _emit_json(args, payload)
    return 0


def _cmd_tower_verify(args) -> int:
    states = m0_orbit(args.depth)
    steps = [
        {
            "n": st.n,
            "k": st.k,
            "j": st.j,
            "y_approx": st.y.approx(),
            "x_approx": st.x.approx(),
            "bits": st.bits,
        }
        for st in states[1:]
    ]
    payload = {"depth": args.depth, "steps": steps, "all_invariants_hold": True}
    if args.format == "csv":
        _emit_csv(
            args,
            ["n", "k", "j", "y_approx", "x_approx", "bits"],
            ([s["n"], s["k"], s["j"], s["y_approx"], s["x_approx"], s["bits"]] for s in steps),
        )
    else:
        _emit_json(args, payload)
    return 0


def _cmd_tower_identity(args) -> int:
    chk = m0_identity_check()
    payload = {"ok": chk.ok, "x": chk.x.to_text(), "y": chk.y.to_text()}
    if args.format == "csv":
        _emit_csv(args, ["ok", "x", "y"], [[chk.ok, chk.x.to_text(), chk.y.to_text()]])
    else:
        _emit_json(args, payload)
    return 0 if chk.ok else 3


def _cmd_lines_measure(args) -> int:
    w: WordSpec = _require(args, "word")
    res = a_of_word(args.alpha, w, args.tol)
    if w.first == "v":
        k = 1.0
    else:
        k = 1.0 - res.a ** (1.0 / args.alpha)
    payload = {
        "alpha": args.alpha,
        "word": w.text,
        "a": res.a,
        "k": k,
        "letters_used": res.letters_used,
        "method": res.method,
        "truncation_error": res.truncation_error,
    }
    if args.format == "csv":
        header = list(payload)
        _emit_csv(args, header, [[payload[key] for key in header]])
    else:
        _emit_json(args, payload)
    return 0


def _cmd_mertens(args) -> int:
    r = _require(args, "r")
    rep = mertens_count(args.sigma, r, exact=args.exact)
    fmt = "csv" if args.csv else args.format
    if fmt == "csv":
        pts = mertens_points(args.sigma, r)
        _emit_csv(args, ["x", "y"], pts)
    else:
        _emit_json(
            args,
            {
                "sigma": rep.sigma,
                "r": rep.r_text,
                "exact": rep.exact,
                "count": rep.count,
                "normalized": rep.normalized,
                "boundary": rep.boundary,
                "dedup": rep.dedup,
            },
        )
    if args.plot:
        from . import plots

        plots.save_mertens_figure(mertens_points(args.sigma, r), rep.r_text, args.plot)
    return 0


def _cmd_coverage(args) -> int:
    s: SigmaMap = args.sigma
    box = args.box if args.box is not None else (0.05, 0.05, 1.0, 1.0)
    grid = coverage_grid(s, args.depth, args.grid, box, threads=args.threads)
    rep = density_coverage(s, args.depth, args.grid, box, threads=args.threads, grid=grid)
    fmt = "csv" if args.csv else args.format
    if fmt == "csv":
        x0, y0, x1, y1 = box
        n = args.grid

        def hit_rows():
            for ix in range(n):
                for iy in range(n):
                    if grid[ix, iy]:
                        cx = x0 + (ix + 0.5) * (x1 - x0) / n
                        cy = y0 + (iy + 0.5) * (y1 - y0) / n
                        yield [ix, iy, cx, cy]

        _emit_csv(args, ["ix", "iy", "x_center", "y_center"], hit_rows())
    else:
        _emit_json(
            args,
            {
                "sigma": rep.sigma,
                "depth": rep.depth,
                "grid_n": rep.grid_n,
                "box": list(rep.box),
                "t_samples": rep.t_samples,
                "fraction": rep.fraction,
                "hit_cells": rep.hit_cells,
                "total_cells": rep.total_cells,
                "max_empty_cell_distance": rep.max_empty_cell_distance,
            },
        )
    if args.plot:
        from . import plots

        plots.save_coverage_figure(
            grid,
            box,
            args.plot,
            f"sigma={s.descriptor}, depth {rep.depth}: {rep.fraction:.1%} of cells hit",
        )
    return 0


def _cmd_discrete(args) -> int:
    box = args.box if args.box is not None else (0.0, 0.0, 2.0, 2.0)
    rep = discreteness_probe(args.depth, box)
    fmt = "csv" if args.csv else args.format
    if fmt == "csv":
        _emit_csv(args, ["x", "y"], rep.points)
    else:
        _emit_json(
            args,
            {
                "box": list(rep.box),
                "depth": rep.depth,
                "count": rep.count,
                "min_gap": rep.min_gap,
                "prev_depth": rep.prev_depth,
                "prev_count": rep.prev_count,
                "prev_min_gap": rep.prev_min_gap,
                "stabilized": rep.stabilized,
                "points": [list(p) for p in rep.points],
            },
        )
    if args.plot:
        from . import plots

        plots.save_discreteness_figure(rep.points, box, rep.min_gap, args.plot)
    return 0


def _cmd_torus(args) -> int:
    pair = TorusMapPair(args.s1, args.s2)
    payload: dict[str, Any] = {
        "s1": args.s1.descriptor,
        "s2": args.s2.descriptor,
        "n": args.n,
        "seed": args.seed,
    }
    if args.test in ("birkhoff", "both"):
        payload["birkhoff"] = birkhoff_product_test(
            pair, args.phi1, args.phi2, args.n, seed=args.seed
        )
    if args.test in ("invariance", "both"):
        payload["invariance"] = [
            invariance_histogram_test(pair, "h", args.n, seed=args.seed),
            invariance_histogram_test(pair, "v", args.n, seed=args.seed + 1),
        ]
    if args.format == "csv":
        if "birkhoff" in payload:
            _emit_csv(
                args,
                ["x0", "y0", "translation", "average", "expected", "deviation", "near_rational"],
                (
                    [o["x0"], o["y0"], o["translation"], o["average"], o["expected"], o["deviation"], o["near_rational"]]
                    for o in payload["birkhoff"]["orbits"]
                ),
            )
        else:
            _emit_csv(
                args,
                ["map", "samples", "count", "expected", "sigma", "z"],
                (
                    [r["map"], r["samples"], r["count"], r["expected"], r["sigma"], r["z"]]
                    for r in payload["invariance"]
                ),
            )
    else:
        _emit_json(args, payload)
    if args.plot:
        from . import plots

        plots.save_torus_figure(pair, args.n, args.seed, args.plot)
    return 0


# -------------------------------------------------------------------------
# parser assembly and config handling


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # single-line diagnostics, exit code 2
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    # Fresh Action objects per subcommand: argparse parents= would share one
    # Action across all leaves, and set_defaults mutates the shared default.
    p.add_argument("--format", choices=("json", "csv"), default=None,
                   help="output format (default depends on the subcommand)")
    p.add_argument("--out", metavar="PATH", default=None,
                   help="write output to PATH instead of standard output")
    p.add_argument("--config", metavar="PATH", default=None,
                   help="key = value defaults file; explicit flags win")
    p.add_argument("--seed", type=_seed_type, default=0,
                   help="master seed, unsigned 64-bit (default 0)")
    p.add_argument("--threads", type=_threads_type, default=None,
                   help="worker pool size (default: TRANSVECTA_THREADS or machine parallelism)")
    p.add_argument("--plot", metavar="PATH", default=None,
                   help="also render a figure of the result to PATH")


def build_parser() -> tuple[_Parser, dict[tuple[str, ...], argparse.ArgumentParser]]:
    parser = _Parser(prog=PROG, description="generalized shear dynamics toolbox")
    sub = parser.add_subparsers(dest="cmd", required=True, metavar="subcommand")
    leaves: dict[tuple[str, ...], argparse.ArgumentParser] = {}

    sp = sub.add_parser("euclid",
                        help="run the slow or accelerated algorithm from a point")
    sp.add_argument("--sigma", type=SigmaMap.from_descriptor, default=SigmaMap.identity(),
                    metavar="DESC", help="id | pow:<a> | lin:<a>:<b> | sine:<c>")
    sp.add_argument("--point", type=_point_type, metavar="X,Y",
                    help="start point (use --point=-1,2 for negatives)")
    sp.add_argument("--steps", type=int, default=20)
    sp.add_argument("--algorithm", choices=("slow", "accel"), default="slow")
    _add_common_flags(sp)
    sp.set_defaults(format="json", handler=_cmd_euclid)
    leaves[("euclid",)] = sp

    sp = sub.add_parser("lines",
                        help="sample images of the x axis under all short words")
    sp.add_argument("--sigma", type=SigmaMap.from_descriptor, default=SigmaMap.identity(),
                    metavar="DESC")
    sp.add_argument("--depth", type=int, default=6)
    sp.add_argument("--grid", type=_tgrid_type, default=(0.0, 1.0, 101),
                    metavar="T0:T1:STEPS", help="parameter samples along the axis")
    sp.add_argument("--box", type=_box_type, default=None, metavar="X0,Y0,X1,Y1",
                    help="prune samples outside this box")
    _add_common_flags(sp)
    sp.set_defaults(format="csv", handler=_cmd_lines)
    leaves[("lines",)] = sp

    sp = sub.add_parser("cfrac",
                        help="digit pairs of a slope under the power-profile expansion")
    sp.add_argument("--alpha", type=float, default=2.0)
    sp.add_argument("--slope", type=float, default=None, metavar="R")
    sp.add_argument("--digits", type=int, default=10)
    _add_common_flags(sp)
    sp.set_defaults(format="json", handler=_cmd_cfrac)
    leaves[("cfrac",)] = sp

    sp = sub.add_parser("golden",
                        help="fixed slope of the (1,1)-digit recursion")
    sp.add_argument("--alpha", type=float, default=2.0)
    _add_common_flags(sp)
    sp.set_defaults(format="json", handler=_cmd_golden)
    leaves[("golden",)] = sp

    sp = sub.add_parser("tower", help="exact arithmetic certifications")
    towersub = sp.add_subparsers(dest="tower_cmd", required=True, metavar="check")
    tp = towersub.add_parser("verify-m0",
                             help="certify the square-profile orbit induction")
    tp.add_argument("--depth", type=int, default=4)
    _add_common_flags(tp)
    tp.set_defaults(format="json", handler=_cmd_tower_verify)
    leaves[("tower", "verify-m0")] = tp
    tp = towersub.add_parser("identity-check",
                             help="certify the seed word identity exactly")
    _add_common_flags(tp)
    tp.set_defaults(format="json", handler=_cmd_tower_identity)
    leaves[("tower", "identity-check")] = tp

    sp = sub.add_parser("lines-measure",
                        help="curve parameter and step scaling of an infinite word")
    sp.add_argument("--alpha", type=float, default=2.0)
    sp.add_argument("--word", type=WordSpec.parse, default=None, metavar="PRE:PER",
                    help="eventually periodic word, e.g. h:v or :hv")
    sp.add_argument("--tol", type=float, default=1e-10)
    _add_common_flags(sp)
    sp.set_defaults(format="json", handler=_cmd_lines_measure)
    leaves[("lines-measure",)] = sp

    sp = sub.add_parser("mertens",
                        help="count monoid images of (r, r) in the unit square")
    sp.add_argument("--sigma", type=SigmaMap.from_descriptor, default=SigmaMap.identity(),
                    metavar="DESC")
    sp.add_argument("--r", type=_rational_type, default=None, metavar="P/Q")
    sp.add_argument("--exact", action="store_true",
                    help="integer tree walk (identity sigma only)")
    sp.add_argument("--csv", action="store_true", help="emit the point table instead")
    _add_common_flags(sp)
    sp.set_defaults(format="json", handler=_cmd_mertens)
    leaves[("mertens",)] = sp

    sp = sub.add_parser("coverage",
                        help="grid coverage of the sampled line field")
    sp.add_argument("--sigma", type=SigmaMap.from_descriptor, default=SigmaMap.identity(),
                    metavar="DESC")
    sp.add_argument("--depth", type=int, default=14)
    sp.add_argument("--grid", type=int, default=20, metavar="N", help="grid cells per side")
    sp.add_argument("--box", type=_box_type, default=None, metavar="X0,Y0,X1,Y1")
    sp.add_argument("--csv", action="store_true", help="emit the hit-cell table instead")
    _add_common_flags(sp)
    sp.set_defaults(format="json", handler=_cmd_coverage)
    leaves[("coverage",)] = sp

    sp = sub.add_parser("discrete",
                        help="verified returns to (1, 0) at the square profile")
    sp.add_argument("--depth", type=int, default=14)
    sp.add_argument("--box", type=_box_type, default=None, metavar="X0,Y0,X1,Y1")
    sp.add_argument("--csv", action="store_true", help="emit the point table instead")
    _add_common_flags(sp)
    sp.set_defaults(format="json", handler=_cmd_discrete)
    leaves[("discrete",)] = sp

    sp = sub.add_parser("torus",
                        help="statistical checks of the torus shears")
    sp.add_argument("--s1", type=CircleMap.from_descriptor,
                    default=CircleMap("sine", 0.3), metavar="DESC",
                    help="const:<c> | scale:<a> | sine:<c>")
    sp.add_argument("--s2", type=CircleMap.from_descriptor,
                    default=CircleMap("const", 0.41421356237309515), metavar="DESC")
    sp.add_argument("--n", type=int, default=100_000, help="iterations / sample count")
    sp.add_argument("--phi1", type=TrigPoly.parse, default=TrigPoly(cos=(1.0,)),
                    metavar="TERMS", help="e.g. cos:1 or const:0.5+sin:2")
    sp.add_argument("--phi2", type=TrigPoly.parse, default=TrigPoly(cos=(1.0,)),
                    metavar="TERMS")
    sp.add_argument("--test", choices=("birkhoff", "invariance", "both"), default="both")
    _add_common_flags(sp)
    sp.set_defaults(format="json", handler=_cmd_torus)
    leaves[("torus",)] = sp

    return parser, leaves


def _load_config(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc}")
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq or not key.strip():
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        entries[key.strip()] = value.strip()
    return entries


def _apply_config(leaf: argparse.ArgumentParser, cfg: dict[str, str]) -> None:
    """Install config values as subparser defaults so explicit flags win."""
    actions = {
        a.dest: a
        for a in leaf._actions
        if a.option_strings and a.dest != "help"
    }
    overrides: dict[str, Any] = {}
    for key, raw in cfg.items():
        dest = key.replace("-", "_")
        if dest == "config":
            raise ValueError("config files cannot chain another config file")
        action = actions.get(dest)
        if action is None:
            raise ValueError(f"unknown config key {key!r} for this subcommand")
        overrides[dest] = _convert_config_value(action, raw, key)
    leaf.set_defaults(**overrides)


def _convert_config_value(action: argparse.Action, raw: str, key: str) -> Any:
    if action.nargs == 0:  # store_true style flags
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"config key {key!r} expects a boolean, got {raw!r}")
    convert = action.type or str
    try:
        value = convert(raw)
    except (ValueError, TypeError):
        raise ValueError(f"config key {key!r}: invalid value {raw!r}")
    if action.choices is not None and value not in action.choices:
        raise ValueError(
            f"config key {key!r}: {value!r} is not one of {sorted(action.choices)}"
        )
    return value


def _config_path(argv: Sequence[str]) -> str | None:
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def _leaf_key(argv: Sequence[str]) -> tuple[str, ...]:
    if not argv or argv[0].startswith("-"):
        return ()
    if argv[0] == "tower":
        if len(argv) >= 2 and not argv[1].startswith("-"):
            return ("tower", argv[1])
        return ()
    return (argv[0],)


def main(argv: Sequence[str] | None = None) -> int:
    args_list = list(sys.argv[1:] if argv is None else argv)
    parser, leaves = build_parser()
    try:
        cfg_path = _config_path(args_list)
        if cfg_path is not None:
            leaf = leaves.get(_leaf_key(args_list))
            if leaf is not None:
                _apply_config(leaf, _load_config(cfg_path))
        args = parser.parse_args(args_list)
        args.threads = _resolve_threads(args)
        return args.handler(args)
    except SystemExit as exc:  # argparse already printed its diagnostic
        code = exc.code
        return code if isinstance(code, int) else 2
    except InvariantViolation as exc:
        print(f"{PROG}: invariant violation: {exc}", file=sys.stderr)
        return 3
    except NonConvergence as exc:
        print(f"{PROG}: failed to converge: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
