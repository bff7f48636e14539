import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from diagpair import (
    ArcFamily,
    BoxSumSpec,
    dirichlet_approx,
    membership,
    minor_arc_weyl_check,
    transfer_bound_check,
    transfer_lambda,
)
from diagpair.arcs import all_witnesses, iterated_log_height, pruning_height

FAM = ArcFamily(Q=6.0, P=200.0, t=2)

unit = st.floats(0.0, 1.0, exclude_max=True, allow_nan=False)


def test_widths():
    assert FAM.xi2 == 18 * 2 * 200.0**2
    assert FAM.xi3 == 18 * 2 * 200.0**3


def test_heights():
    assert pruning_height(100.0, 0.01) == pytest.approx(100.0**0.3)
    assert iterated_log_height(1e6) == pytest.approx(math.log(math.log(1e6)) ** 100)
    with pytest.raises(ValueError):
        iterated_log_height(2.0)


def test_family_validation():
    with pytest.raises(ValueError):
        ArcFamily(Q=0.5, P=100.0, t=1)
    with pytest.raises(ValueError):
        ArcFamily(Q=4.0, P=-1.0, t=1)
    with pytest.raises(ValueError):
        ArcFamily(Q=4.0, P=100.0, t=0)


def test_membership_at_rational_centers():
    for q, r2, r3 in [(1, 0, 0), (3, 1, 2), (5, 2, 4), (4, 1, 3)]:
        mem = membership(r2 / q, r3 / q, FAM)
        assert mem.inside
        assert mem.witness is not None
        wq, w2, w3 = mem.witness
        # witness reproduces the same rational point in lowest terms
        assert Fraction(w2, wq) == Fraction(r2, q)
        assert Fraction(w3, wq) == Fraction(r3, q)


def test_membership_off_arcs():
    # golden-ratio-ish point far from every height-6 rational
    mem = membership(0.381966, 0.618034, FAM)
    assert not mem.inside
    assert mem.witness is None


def test_membership_width_edges():
    # halfwidth in alpha is (Q / xi2) / q around r2 / q
    w2 = FAM.Q / FAM.xi2
    inside = membership(1 / 4 + 0.9 * w2 / 4, 3 / 4, FAM)
    assert inside.inside and inside.witness == (4, 1, 3)
    outside = membership(1 / 4 + 1.5 * w2 / 4, 3 / 4, FAM)
    assert not outside.inside


@given(unit, unit)
def test_arcs_disjoint(alpha2, alpha3):
    # at heights this far below P the arcs cannot overlap
    assert len(all_witnesses(alpha2, alpha3, FAM)) <= 1


@given(unit, unit)
def test_nesting_in_height(alpha2, alpha3):
    small = ArcFamily(Q=3.0, P=200.0, t=2)
    if membership(alpha2, alpha3, small).inside:
        assert membership(alpha2, alpha3, FAM).inside


@given(st.floats(0.0, 1.0, allow_nan=False), st.integers(1, 400))
def test_dirichlet_contract(alpha, N):
    approx = dirichlet_approx(alpha, N)
    assert 1 <= approx.q <= N
    assert math.gcd(approx.a, approx.q) == 1
    assert abs(approx.q * Fraction(alpha) - approx.a) <= Fraction(1, N)
    assert approx.error <= 1 / N + 1e-15


def test_dirichlet_pi_tail():
    approx = dirichlet_approx(math.pi - 3, 10)
    assert (approx.a, approx.q) == (1, 7)


@given(st.fractions(0, 1, max_denominator=60), st.integers(60, 500))
def test_dirichlet_recovers_exact_rationals(frac, N):
    approx = dirichlet_approx(frac, N)
    assert Fraction(approx.a, approx.q) == frac


def test_transfer_lambda_exact():
    assert transfer_lambda(Fraction(1, 3), 1, 3, 100) == 3
    assert transfer_lambda(Fraction(51, 100), 1, 2, 100) == 4
    assert transfer_lambda(Fraction(2, 7), 2, 7, 49) == 7
    assert transfer_lambda(Fraction(2, 7), 1, 3, 49) == 10
    # float path agrees to rounding
    assert transfer_lambda(0.51, 1, 2, 100) == pytest.approx(4.0)


def test_transfer_lambda_grows_with_distance():
    base = transfer_lambda(Fraction(1, 3), 1, 3, 1000)
    off = transfer_lambda(Fraction(1, 3) + Fraction(1, 50), 1, 3, 1000)
    assert off > base


def test_transfer_report_fields():
    samples = [(0.21, 4.0), (0.52, 3.0), (Fraction(1, 3), 5.0)]
    rep = transfer_bound_check(samples, X=40.0, Y=10.0, Z=160.0, theta=0.5)
    assert rep["samples"] == 3
    assert rep["C1_fitted"] > 0
    assert rep["C2_observed"] >= 0
    assert math.isfinite(rep["amplification"])
    assert rep["worst"] is None or set(rep["worst"]) == {"alpha", "b", "r", "lambda"}
    with pytest.raises(ValueError):
        transfer_bound_check([], X=1.0, Y=1.0, Z=1.0, theta=0.5)


def test_minor_arc_check_smoke(rng):
    spec = BoxSumSpec(kind="f", theta=0.4, P=1.0, cubic=1, quad=1)
    rep = minor_arc_weyl_check(spec, Q=4.0, P=80.0, samples=25, rng=rng)
    assert rep["samples_used"] == 25
    assert rep["max_normalized"] > 0
    assert not rep["exceeded"]
    flagged = minor_arc_weyl_check(spec, Q=4.0, P=80.0, samples=10, rng=rng, ceiling=1e-12)
    assert flagged["exceeded"]


def test_minor_arc_check_height_cap():
    spec = BoxSumSpec(kind="g", theta=0.4, P=1.0, cubic=1)
    with pytest.raises(ValueError):
        minor_arc_weyl_check(spec, Q=50.0, P=100.0, samples=5)
