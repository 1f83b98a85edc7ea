"""Region classification and the slow / accelerated reduction algorithms."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transvecta import (
    DiagonalOrAxisError,
    RegionLabel,
    SigmaMap,
    accel_step,
    classify,
    contraction_ratio,
    euclid_step,
    norm1,
    pingpong_check,
    u_step,
)
from transvecta.sigma import sigma_families_for_tests

PHI = (1.0 + math.sqrt(5.0)) / 2.0


def _off_special_sets(s, p, margin=1e-6):
    """Keep random points clear of the axes and both diagonals."""
    x, y = p
    scale = max(abs(x), abs(y))
    return (
        abs(x) > margin * scale
        and abs(y) > margin * scale
        and abs(y - s.forward(x)) > margin * scale
        and abs(y + s.forward(x)) > margin * scale
    )


# -- classification -----------------------------------------------------------


def test_classify_examples():
    assert classify(SigmaMap.identity(), (3.0, 2.0)) is RegionLabel.A
    # diagonal y = sigma(x) in the first quadrant belongs to the v-branch
    assert classify(SigmaMap.power(2.0), (1.0, 1.0)) is RegionLabel.B
    assert classify(SigmaMap.power(2.0), (1.0, 0.0)) is RegionLabel.AXIS_FIXED
    assert classify(SigmaMap.identity(), (0.0, 0.0)) is RegionLabel.ORIGIN


def test_partition_is_exhaustive_and_exclusive(rng):
    # 100k points spread over the families; every off-axis point gets one
    # of the four letters, A/B inside X, C/D inside Y
    families = list(sigma_families_for_tests())
    per_family = 100_000 // len(families)
    for s in families:
        pts = rng.uniform(-10, 10, size=(per_family, 2))
        for x, y in pts:
            if not _off_special_sets(s, (x, y)):
                continue
            lab = classify(s, (x, y))
            if lab in (RegionLabel.A, RegionLabel.B):
                assert x * y >= 0 and x != 0
            elif lab in (RegionLabel.C, RegionLabel.D):
                assert x * y <= 0 and y != 0
            else:
                raise AssertionError(f"{(x, y)} got label {lab}")


def test_axes_are_fixed(family):
    for t in (0.5, -2.0, 100.0):
        assert classify(family, (t, 0.0)) is RegionLabel.AXIS_FIXED
        assert classify(family, (0.0, t)) is RegionLabel.AXIS_FIXED
        step = euclid_step(family, (t, 0.0))
        assert step.letter is None
        assert step.result == (t, 0.0)


# -- the slow algorithm --------------------------------------------------------


def test_euclid_step_examples():
    st1 = euclid_step(SigmaMap.identity(), (5.0, 3.0))
    assert st1.label is RegionLabel.A
    assert st1.letter == "h_inv"
    assert st1.result == (2.0, 3.0)

    st2 = euclid_step(SigmaMap.power(2.0), (2.0, 3.0))
    assert st2.result[0] == pytest.approx(2.0 - math.sqrt(3.0), abs=1e-15)
    assert st2.result[1] == 3.0

    st3 = euclid_step(SigmaMap.identity(), (1.0, 1.0))
    assert st3.label is RegionLabel.B
    assert st3.result == (1.0, 0.0)


def test_euclid_step_rejects_origin():
    with pytest.raises(ValueError):
        euclid_step(SigmaMap.identity(), (0.0, 0.0))


def test_two_branch_form_on_first_quadrant(family, rng):
    # the region case analysis collapses to: subtract sigma(x) from y when
    # y >= sigma(x), else subtract sigma_inv(y) from x
    pts = rng.uniform(0.01, 20, size=(2000, 2))
    for x, y in pts:
        got = euclid_step(family, (x, y)).result
        if y >= family.forward(x):
            assert got == (x, y - family.forward(x))
        else:
            assert got == (x - family.inverse(y), y)


@given(
    x=st.floats(min_value=0.01, max_value=50, allow_nan=False),
    y=st.floats(min_value=0.01, max_value=50, allow_nan=False),
)
@settings(max_examples=150)
def test_slow_step_decreases_norm_in_quadrant(x, y):
    s = SigmaMap.power(2.0)
    step = euclid_step(s, (x, y))
    if step.letter is not None:
        assert norm1(step.result) <= norm1((x, y))


# -- the accelerated algorithm --------------------------------------------------


def test_accel_examples_identity():
    a = accel_step(SigmaMap.identity(), (7.0, 2.0))
    assert (a.digit, a.letter, a.result) == (3, "h_inv", (1.0, 2.0))
    assert a.label_after is RegionLabel.B

    b = accel_step(SigmaMap.identity(), (math.pi, 1.0))
    assert b.digit == 3
    assert b.result[0] == pytest.approx(math.pi - 3.0, abs=1e-15)

    c = accel_step(SigmaMap.identity(), b.result)
    assert (c.digit, c.letter) == (7, "v_inv")
    assert c.result[1] == pytest.approx(1.0 - 7.0 * (math.pi - 3.0), abs=1e-12)


def test_accel_first_digit_of_square_profile_orbit():
    # the v-side digit of (-1+sqrt(2), 2) is 11: y/sigma(x) = 2/(3-2 sqrt 2)
    # is about 11.66, and the minimal power must cross the diagonal
    a = accel_step(SigmaMap.power(2.0), (-1.0 + math.sqrt(2.0), 2.0))
    assert (a.digit, a.letter) == (11, "v_inv")


@pytest.mark.parametrize("p", [(1.0, 1.0), (2.0, 0.0), (0.0, 3.0), (1.0 + 5e-13, 1.0)])
def test_accel_rejects_diagonals_and_axes(p):
    with pytest.raises(DiagonalOrAxisError):
        accel_step(SigmaMap.identity(), p)


def test_accel_agrees_with_iterated_slow_steps(family, rng):
    """The accelerated digit is the number of identical slow letters, and the
    endpoints coincide."""
    count = 0
    while count < 120:
        p = tuple(rng.uniform(0.05, 30, size=2))
        if not _off_special_sets(family, p, margin=1e-4):
            continue
        count += 1
        try:
            acc = accel_step(family, p)
        except DiagonalOrAxisError:
            continue
        if acc.digit > 10_000:
            continue  # iterating the slow form one letter at a time is hopeless
        q = p
        for i in range(acc.digit):
            step = euclid_step(family, q)
            assert step.letter == acc.letter, f"letter changed early at {i}"
            q = step.result
        assert q[0] == pytest.approx(acc.result[0], rel=1e-10, abs=1e-10)
        assert q[1] == pytest.approx(acc.result[1], rel=1e-10, abs=1e-10)
        # minimality: one fewer application must not yet cross regions
        assert euclid_step(family, p).label == classify(family, p)


# -- U = F^2 and the contraction bound ------------------------------------------


def test_u_step_pi():
    q = u_step(SigmaMap.identity(), (math.pi, 1.0))
    assert q[0] == pytest.approx(0.141592653589793, abs=1e-12)
    assert q[1] == pytest.approx(0.008851424871448, abs=1e-12)
    assert norm1(q) <= 0.5 * (math.pi + 1.0)


def test_u_step_golden_ratio():
    q = u_step(SigmaMap.identity(), (PHI, 1.0))
    assert q[0] == pytest.approx(PHI - 1.0, abs=1e-12)
    assert q[1] == pytest.approx(2.0 - PHI, abs=1e-12)
    assert norm1(q) == pytest.approx(1.0, abs=1e-12)
    assert norm1(q) <= 0.5 * (PHI + 1.0)


def test_contraction_bound_sampled(family, rng):
    checked = 0
    while checked < 100:
        p = tuple(rng.uniform(0.1, 10, size=2))
        if not _off_special_sets(family, p, margin=1e-5):
            continue
        checked += 1
        try:
            assert contraction_ratio(family, p, 10) <= 1.0 + 1e-9
        except DiagonalOrAxisError:
            continue  # the orbit ran into the excluded null set


# -- ping-pong inclusions --------------------------------------------------------


def test_pingpong_examples():
    assert pingpong_check(SigmaMap.identity(), (3.0, 2.0), 1)
    assert pingpong_check(SigmaMap.power(2.0), (1.0, -3.0), 1)


def test_pingpong_rejects_zero_power():
    with pytest.raises(ValueError):
        pingpong_check(SigmaMap.identity(), (3.0, 2.0), 0)


def test_pingpong_rejects_axis_points():
    with pytest.raises(ValueError):
        pingpong_check(SigmaMap.identity(), (2.0, 0.0), 1)


def test_pingpong_random(family, rng):
    checked = 0
    while checked < 200:
        p = tuple(rng.uniform(-8, 8, size=2))
        if not _off_special_sets(family, p):
            continue
        k = int(rng.integers(1, 6)) * int(rng.choice([-1, 1]))
        assert pingpong_check(family, p, k)
        checked += 1
