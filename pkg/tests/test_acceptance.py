"""Acceptance suite: one test per advertised end-to-end guarantee.

Every test pins the tolerance and, where one is stated, the runtime budget
from the README's guarantee table, so ``pytest -v tests/test_acceptance.py``
prints one pass/fail line per guarantee.  Two exploratory checks (the
alpha = 2 Mertens drift and the alpha = 2 density coverage) fail today and
are expected to; their assertion messages carry the measured numbers, and
the README discusses why the honest answer is currently "no".
"""

from __future__ import annotations

import json
import math
import random
import time
from fractions import Fraction

from transvecta import u_step
from transvecta.cfrac import digits, golden_slope
from transvecta.cli import main
from transvecta.curves import (
    WordSpec,
    a_of_word,
    kernel_invariance_check,
    push_h,
    push_v,
)
from transvecta.euclid import DiagonalOrAxisError, euclid_step
from transvecta.experiments import density_coverage, discreteness_probe, mertens_count
from transvecta.sigma import SigmaMap, norm1, sigma_families_for_tests
from transvecta.torus import (
    CircleMap,
    TorusMapPair,
    TrigPoly,
    birkhoff_product_test,
    invariance_histogram_test,
)
from transvecta.words import (
    ROTATION_WORD,
    U_WORD,
    AxisHit,
    encode,
    eval_word,
    invert_word,
    morphism_check,
)


def _run_json(capsys, *argv: str) -> dict:
    code = main(list(argv))
    out = capsys.readouterr().out
    assert code == 0, f"exit code {code} from {argv}"
    return json.loads(out)


def test_criterion_01_golden_sigma_slope(capsys):
    t0 = time.perf_counter()
    payload = _run_json(capsys, "golden", "--alpha", "2")
    elapsed = time.perf_counter() - t0
    r = payload["r"]
    quartic = r**4 - 2 * r**3 + r**2 - 2 * r + 1
    print(f"criterion 1: r={r!r} quartic={quartic:.3e} elapsed={elapsed:.2f}s")
    assert abs(r - 1.883203506) <= 1e-8, f"golden slope came out as {r!r}"
    assert abs(quartic) <= 1e-9, f"quartic residual {quartic!r}"
    assert elapsed < 1.0, f"took {elapsed:.2f} s against a 1 s budget"


def _gauss_pairs(x: float, pairs: int) -> list[tuple[int, int]]:
    # Classical continued fraction digits via the Gauss map, zipped in twos.
    ds: list[int] = []
    for _ in range(2 * pairs):
        k = math.floor(x)
        ds.append(k)
        frac = x - k
        if frac < 1e-13:
            break
        x = 1.0 / frac
    return list(zip(ds[0::2], ds[1::2]))


def test_criterion_02_alpha_one_reduction():
    t0 = time.perf_counter()
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    got = golden_slope(1.0)
    expansion = digits(1.0, (math.pi, 1.0), 4)
    oracle = _gauss_pairs(math.pi, 4)
    elapsed = time.perf_counter() - t0
    print(f"criterion 2: golden_slope(1)={got!r} pi pairs={expansion.pairs}")
    assert abs(got - phi) <= 1e-9, f"golden_slope(1) = {got!r}, want {phi!r}"
    assert list(expansion.pairs) == oracle == [(3, 7), (15, 1), (292, 1), (1, 1)]
    assert elapsed < 1.0, f"took {elapsed:.2f} s against a 1 s budget"


def test_criterion_03_contraction_lemma():
    t0 = time.perf_counter()
    families = sigma_families_for_tests()
    bound = 1.0 + 1e-9
    rnd = random.Random(314)

    # The identity map is plain subtraction, so exact rational starts run
    # all twenty doublings without shedding digits.  240 bits of slope
    # entropy outlast the ~6.5 bits a typical doubling consumes, and the
    # 2**160 scale keeps depth-20 points clear of the absolute diagonal
    # fuzz near the origin.
    ident = families[0]
    scale = Fraction(2) ** 160
    worst_exact = Fraction(0)
    for i in range(1000):
        sgn = 1 if i % 2 == 0 else -1
        p = (
            sgn * scale * Fraction(rnd.getrandbits(240) + 1, rnd.getrandbits(240) + 1),
            sgn * scale * Fraction(rnd.getrandbits(240) + 1, rnd.getrandbits(240) + 1),
        )
        base = norm1(p)
        q = p
        for m in range(1, 21):
            q = u_step(ident, q)
            worst_exact = max(worst_exact, norm1(q) * 2**m / base)
    assert float(worst_exact) <= bound, f"exact ratio {float(worst_exact)!r}"

    # Binary64 starts cannot stay sigma-irrational for twenty doublings:
    # once the mantissa is spent the expansion reports the diagonal.  So
    # check the bound on every step each orbit does take, and require real
    # depth from the sample so the check is not vacuous.
    stats = {}
    for fam in families[1:]:
        worst = 0.0
        depths = []
        for i in range(1000):
            sgn = 1 if i % 2 == 0 else -1
            p = (sgn * rnd.uniform(1e-3, 10.0), sgn * rnd.uniform(1e-3, 10.0))
            base = norm1(p)
            q = p
            reached = 0
            try:
                for m in range(1, 21):
                    q = u_step(fam, q)
                    worst = max(worst, norm1(q) * 2.0**m / base)
                    reached = m
            except DiagonalOrAxisError:
                pass
            depths.append(reached)
        depths.sort()
        stats[fam.descriptor] = (worst, depths[500], depths[-1], sum(depths))
        assert worst <= bound, f"{fam.descriptor}: ratio {worst!r}"
        assert depths[500] >= 3, f"{fam.descriptor}: median depth {depths[500]}"
        assert depths[-1] >= 8, f"{fam.descriptor}: max depth {depths[-1]}"
        assert sum(depths) >= 3000, f"{fam.descriptor}: {sum(depths)} steps checked"
    elapsed = time.perf_counter() - t0
    print(f"criterion 3: exact worst {float(worst_exact):.6f}, "
          f"float stats {stats}, elapsed {elapsed:.1f}s")
    assert elapsed < 30.0, f"took {elapsed:.1f} s against a 30 s budget"


def test_criterion_04_coding_consistency():
    t0 = time.perf_counter()
    rnd = random.Random(271)
    worst = 0.0
    for fam in sigma_families_for_tests():
        produced = 0
        while produced < 1000:
            p = (rnd.uniform(-10.0, 10.0), rnd.uniform(-10.0, 10.0))
            if abs(p[0]) < 1e-3 or abs(p[1]) < 1e-3:
                continue
            try:
                w = encode(fam, p, 25)
            except AxisHit:
                continue
            cur = p
            for _ in range(25):
                cur = euclid_step(fam, cur).result
            back = eval_word(fam, invert_word(w), p)
            scale = max(1.0, abs(cur[0]), abs(cur[1]))
            rel = max(abs(back[0] - cur[0]), abs(back[1] - cur[1])) / scale
            worst = max(worst, rel)
            assert rel <= 1e-9, f"{fam.descriptor} at {p}: relative gap {rel!r}"
            produced += 1
    elapsed = time.perf_counter() - t0
    print(f"criterion 4: worst relative gap {worst:.3e}, elapsed {elapsed:.1f}s")
    assert elapsed < 30.0, f"took {elapsed:.1f} s against a 30 s budget"


def test_criterion_05_exact_kernel_orbit(capsys):
    t0 = time.perf_counter()
    orbit = _run_json(capsys, "tower", "verify-m0", "--depth", "4")
    identity = _run_json(capsys, "tower", "identity-check")
    elapsed = time.perf_counter() - t0
    ks = [step["k"] for step in orbit["steps"]]
    js = [step["j"] for step in orbit["steps"]]
    print(f"criterion 5: k={ks} j={js} identity={identity} elapsed={elapsed:.1f}s")
    assert ks == [11, 18, 1, 1], f"certified k digits {ks}"
    assert js == [1, 1, 1, 1], f"certified j digits {js}"
    assert identity == {"ok": True, "x": "(-1) + sqrt(2)", "y": "2"}
    assert elapsed < 60.0, f"took {elapsed:.1f} s against a 60 s budget"


def _totient_pair_count(m: int) -> int:
    # Coprime pairs in [1,m]^2 counted through the totient sieve; the
    # diagonal pair (1,1) would be counted twice by the doubling.
    phi = list(range(m + 1))
    for i in range(2, m + 1):
        if phi[i] == i:
            for j in range(i, m + 1, i):
                phi[j] -= phi[j] // i
    return 2 * sum(phi[1:]) - 1


def test_criterion_06_mertens_identity_desk_scale():
    t0 = time.perf_counter()
    ident = SigmaMap.from_descriptor("id")
    small = mertens_count(ident, Fraction(1, 10), exact=True)
    big = mertens_count(ident, Fraction(1, 500), exact=True)
    elapsed = time.perf_counter() - t0
    basel = 6.0 / math.pi**2
    print(f"criterion 6: count(1/10)={small.count} count(1/500)={big.count} "
          f"normalized={big.normalized!r} basel gap={abs(big.normalized - basel):.6f}")
    assert small.count == 63
    assert small.count == _totient_pair_count(10)
    assert big.count == _totient_pair_count(500), f"count {big.count}"
    assert abs(big.normalized - basel) <= 0.01
    assert elapsed < 60.0, f"took {elapsed:.1f} s against a 60 s budget"


def test_criterion_07_mertens_alpha_two_drift(capsys):
    coarse = _run_json(capsys, "mertens", "--sigma", "pow:2", "--r", "1/100")
    fine = _run_json(capsys, "mertens", "--sigma", "pow:2", "--r", "1/200")
    a, b = coarse["normalized"], fine["normalized"]
    print(f"criterion 7: normalized(1/100)={a!r} normalized(1/200)={b!r}")
    assert a > 0 and b > 0
    drift = abs(a - b) / max(a, b)
    assert drift < 0.10, (
        f"normalized counts r=1/100 -> {a!r} and r=1/200 -> {b!r} differ by "
        f"{100 * drift:.1f}% of the larger (by {100 * abs(a - b) / min(a, b):.1f}% "
        f"of the smaller); the normalization r**2 * count has not settled at "
        f"these radii, so the < 10% stability claim does not hold"
    )


def test_criterion_08_density_coverage():
    t0 = time.perf_counter()
    ident_cov = density_coverage(SigmaMap.from_descriptor("id"), depth=14, grid_n=20)
    square_cov = density_coverage(SigmaMap.from_descriptor("pow:2"), depth=14, grid_n=20)
    oracle = density_coverage(SigmaMap.from_descriptor("pow:2"), depth=16, grid_n=20)
    elapsed = time.perf_counter() - t0
    print(f"criterion 8: id fraction={ident_cov.fraction} "
          f"pow:2 fraction={square_cov.fraction} depth-16 oracle={oracle.fraction} "
          f"elapsed={elapsed:.1f}s")
    assert ident_cov.fraction == 1.0, f"alpha=1 fraction {ident_cov.fraction!r}"
    assert elapsed < 60.0, f"took {elapsed:.1f} s against a 60 s budget"
    # Cells whose bottom edge clears the parabola y = 14 x^2 at their right
    # edge cannot meet any depth-14 line, so the miss set is structural.
    xs = [0.05 + 0.95 * i / 20 for i in range(21)]
    unreachable = sum(
        1 for i in range(20) for j in range(20) if xs[j] > 14.0 * xs[i + 1] ** 2
    )
    assert square_cov.fraction == 1.0, (
        f"alpha=2 hits {square_cov.hit_cells}/400 cells at depth 14 "
        f"(fraction {square_cov.fraction}); a depth-16 oracle run still only "
        f"hits {oracle.hit_cells}/400 ({oracle.fraction}), and {unreachable} "
        f"of the missed cells lie wholly above the depth-14 parabola "
        f"y = 14 x**2, so deeper words reach them only logarithmically "
        f"slowly: full coverage at depth <= 14 is not attainable"
    )


def test_criterion_09_integer_relations():
    t0 = time.perf_counter()
    s = SigmaMap.from_descriptor("sine:0.5")
    rnd = random.Random(99)
    quarter_turn_to_the_fourth = ROTATION_WORD * 4
    mixed_relation = ROTATION_WORD * 2 + U_WORD * 3
    for _ in range(1000):
        q = (float(rnd.randint(-50, 50)), float(rnd.randint(-50, 50)))
        assert eval_word(s, quarter_turn_to_the_fourth, q) == q
        assert eval_word(s, mixed_relation, q) == q
    for _ in range(100):
        w = "".join(rnd.choice("hvHV") for _ in range(rnd.randint(1, 10)))
        q = (rnd.randint(-9, 9), rnd.randint(-9, 9))
        assert morphism_check(s, w, q), f"word {w!r} disagrees with its matrix at {q}"
    elapsed = time.perf_counter() - t0
    print(f"criterion 9: elapsed {elapsed:.1f}s")
    assert elapsed < 10.0, f"took {elapsed:.1f} s against a 10 s budget"


def test_criterion_10_curve_dynamics():
    t0 = time.perf_counter()
    rnd = random.Random(4242)
    # "Within 1e-10" is read at unit scale: the comparison is absolute up
    # to magnitude 1 and relative beyond, where 1e-10 absolute would sit
    # below one ulp of the values involved.
    for _ in range(1000):
        alpha = rnd.uniform(0.3, 4.0)
        a = rnd.uniform(0.0, 5.0)
        x = rnd.uniform(0.01, 10.0)
        s = SigmaMap.from_descriptor(f"pow:{alpha!r}")
        sx = s.forward(x)
        lhs_h = (x + s.inverse(a * sx), a * sx)
        stretched = (1.0 + a ** (1.0 / alpha)) * x
        rhs_h = (stretched, push_h(alpha, a) * s.forward(stretched))
        for left, right in zip(lhs_h, rhs_h):
            tol = 1e-10 * max(1.0, abs(left), abs(right))
            assert abs(left - right) <= tol, f"h push at {(alpha, a, x)}"
        lhs_v = (x, sx + a * sx)
        rhs_v = (x, push_v(alpha, a) * sx)
        for left, right in zip(lhs_v, rhs_v):
            tol = 1e-10 * max(1.0, abs(left), abs(right))
            assert abs(left - right) <= tol, f"v push at {(alpha, a, x)}"
    golden_tail = a_of_word(1.0, WordSpec.parse(":hv"))
    want = (math.sqrt(5.0) - 1.0) / 2.0
    assert abs(golden_tail.a - want) <= 1e-9, f"a((hv)^inf) = {golden_tail.a!r}"
    for _ in range(1000):
        u = rnd.uniform(1e-3, 10.0)
        v = u + rnd.uniform(1e-3, 10.0)
        k = rnd.uniform(1e-3, 100.0)
        assert kernel_invariance_check(u, v, k)
    elapsed = time.perf_counter() - t0
    print(f"criterion 10: a((hv)^inf)={golden_tail.a!r} elapsed={elapsed:.1f}s")
    assert elapsed < 10.0, f"took {elapsed:.1f} s against a 10 s budget"


def test_criterion_11_discreteness_probe(capsys):
    shallow = discreteness_probe(12)
    probe = discreteness_probe(14)
    oracle = discreteness_probe(16)  # fresh oracle run, not a frozen constant
    payload = _run_json(capsys, "discrete", "--depth", "14")
    print(f"criterion 11: counts {shallow.count}/{probe.count}/{oracle.count} "
          f"min gap {probe.min_gap!r} vs oracle {oracle.min_gap!r}")
    assert probe.stabilized, "depth 14 should report a stable count"
    assert shallow.count == probe.count == 4
    assert math.isfinite(probe.min_gap)
    assert abs(probe.min_gap - oracle.min_gap) <= 1e-12, (
        f"min gap {probe.min_gap!r} drifted from the depth-16 oracle "
        f"{oracle.min_gap!r}"
    )
    assert oracle.min_gap == 1.0  # recorded oracle value, re-derived above
    assert payload["count"] == probe.count
    assert payload["stabilized"] is True


def test_criterion_12_torus_invariance_birkhoff():
    t0 = time.perf_counter()
    pair = TorusMapPair(
        CircleMap.from_descriptor("sine:0.3"),
        CircleMap.from_descriptor(f"const:{math.sqrt(2.0) - 1.0!r}"),
    )
    zs = {}
    for which in ("h", "v"):
        report = invariance_histogram_test(pair, which, 100_000, seed=3)
        zs[which] = report["z"]
        assert abs(report["z"]) <= 4.0, f"{which} map z-score {report['z']!r}"
    averages = birkhoff_product_test(
        pair,
        TrigPoly.parse("const:0.5+cos:1+sin:2"),
        TrigPoly.parse("const:1+cos:1"),
        100_000,
        seed=7,
    )
    elapsed = time.perf_counter() - t0
    print(f"criterion 12: z={zs} max deviation {averages['max_deviation']:.2e} "
          f"elapsed={elapsed:.1f}s")
    assert not any(row["near_rational"] for row in averages["orbits"])
    assert averages["max_deviation"] <= 0.02
    assert elapsed < 30.0, f"took {elapsed:.1f} s against a 30 s budget"
