import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from diagpair import (
    ArcFamily,
    extrapolate_ladder,
    oscillatory_v,
    singular_integral,
    star_approx,
    unit_singular_integral,
    volume_constant,
)

THETA6 = (0.3, 0.3, 0.25, 0.25, 0.35, 0.35)
THETA4 = (0.3, 0.3, 0.3, 0.3)

# regression value for the height-8 unit integral of the separable
# six-variable system, frozen from the panel-doubling quadrature
LADDER6_W8 = 0.07791007449977659


def test_v_at_zero_is_box_length():
    val = oscillatory_v("g", 0.0, 0.0, 100.0, 0.3, (1,))
    assert val.value == pytest.approx(45.0 + 0j, abs=1e-12)
    assert val.error_estimate <= 1e-9


@given(b2=st.floats(-0.2, 0.2), b3=st.floats(-0.02, 0.02))
@settings(max_examples=20)
def test_v_conjugate_symmetry(b2, b3):
    z = oscillatory_v("f", b2, b3, 20.0, 0.4, (1, 2)).value
    w = oscillatory_v("f", -b2, -b3, 20.0, 0.4, (1, 2)).value
    assert abs(w - z.conjugate()) <= 1e-9


@given(b2=st.floats(-0.5, 0.5), b3=st.floats(-0.05, 0.05))
@settings(max_examples=20)
def test_v_trivial_bound(b2, b3):
    val = oscillatory_v("f", b2, b3, 30.0, 0.25, (1, -1)).value
    assert abs(val) <= 1.5 * 0.25 * 30.0 + 1e-9


def test_v_matches_quad():
    P, th, b2, b3 = 15.0, 0.4, 0.11, 0.003
    lo, hi = th * P / 2, 2 * th * P

    def phase(g):
        return 2 * math.pi * (2 * b3 * g**3 - b2 * g * g)

    re, _ = quad(lambda g: math.cos(phase(g)), lo, hi, limit=300)
    im, _ = quad(lambda g: math.sin(phase(g)), lo, hi, limit=300)
    got = oscillatory_v("f", b2, b3, P, th, (2, -1)).value
    assert got == pytest.approx(complex(re, im), abs=1e-8)


def test_unit_integral_regression(ladder6):
    W, diag = unit_singular_integral(ladder6, THETA6, 8.0)
    assert W == pytest.approx(LADDER6_W8, abs=1e-10)
    assert abs(diag["imag_residue"]) <= 1e-12
    assert diag["error_estimate"] <= 1e-6


def test_unit_integral_grows_with_height(ladder6):
    W4, _ = unit_singular_integral(ladder6, THETA6, 4.0)
    W8, _ = unit_singular_integral(ladder6, THETA6, 8.0)
    W16, _ = unit_singular_integral(ladder6, THETA6, 16.0)
    assert W4 < W8 < W16
    # dyadic tail shrinks by roughly the height ratio
    assert (W16 - W8) < (W8 - W4) * 1.2


def test_extrapolate_geometric_ladder():
    limit, ratio = 0.125, 0.55
    values = [limit - 0.04 * ratio**k for k in range(5)]
    est, err = extrapolate_ladder(values)
    assert est == pytest.approx(limit, abs=1e-6)
    assert err < 0.05 * limit


def test_extrapolate_needs_three():
    with pytest.raises(ValueError):
        extrapolate_ladder([1.0, 2.0])


def test_singular_integral_scaling(ladder6):
    P = 50.0
    I, diag = singular_integral(ladder6, 16.0, P, theta=THETA6, heights=(4.0, 8.0, 16.0))
    assert I == pytest.approx(diag["W"] * P ** (ladder6.s - 5), rel=1e-12)
    assert set(diag) >= {"W", "ladder", "tails", "tail_ratios", "imag_residue"}
    assert all(r > 0 for r in diag["tail_ratios"])


def test_volume_matches_separable_closed_form(ladder4, rng):
    # y1^3 = y2^3 and z1^2 = z2^2 on the box [theta/2, 2 theta]^4:
    # integrating the two delta factors gives (1/(2 theta)) * (ln 4)/2
    expected = math.log(4.0) / (4 * 0.3)
    c, sigma = volume_constant(ladder4, THETA4, rng=rng, samples=250_000)
    assert sigma < 0.1 * expected
    assert c == pytest.approx(expected, abs=5 * sigma)


def test_volume_rejects_degenerate_anchor(tiny2, rng):
    # on x1 = x2 both gradient rows are multiples of (1, -1): rank 1
    with pytest.raises(ValueError):
        volume_constant(tiny2, (0.3, 0.3), rng=rng, samples=4_000, max_rounds=3)


def test_volume_validates_theta(ladder4, rng):
    with pytest.raises(ValueError):
        volume_constant(ladder4, (0.3, 0.3), rng=rng)
    with pytest.raises(ValueError):
        volume_constant(ladder4, (0.3, 0.3, -0.1, 0.3), rng=rng)


def test_star_approx_off_arc_is_zero(sample5):
    fam = ArcFamily(Q=5.0, P=60.0, t=1)
    approx = star_approx(sample5, 0, 0.381966, 0.618034, fam, (0.3,) * 5)
    assert approx.witness is None
    assert approx.value == 0j


def test_star_approx_on_arc(sample5):
    fam = ArcFamily(Q=5.0, P=60.0, t=1)
    approx = star_approx(sample5, 2, 1 / 3, 2 / 3, fam, (0.3,) * 5)
    assert approx.witness == (3, 1, 2)
    box_len = 1.5 * 0.3 * 60.0
    assert 0 < abs(approx.value) <= box_len + 1e-9
