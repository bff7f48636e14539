import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diagpair import c_eta, dickman_rho, smooth_mask, smooth_set
from diagpair.smooth import gpf_table, primes_up_to

# frozen from a 30-digit mpmath quadrature of the delay equation
RHO_TABLE = {
    2.0: 0.30685281944005469,
    2.5: 0.13031956183225075,
    3.0: 0.048608388291131567,
    3.5: 0.016229593119445972,
    4.0: 0.004910925663511926,
}


def brute_gpf(x):
    best, d = 1, 2
    while d * d <= x:
        while x % d == 0:
            best, x = d, x // d
        d += 1
    return max(best, x) if x > 1 else best


def test_primes_up_to():
    assert primes_up_to(1) == []
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_gpf_table_matches_brute():
    table = gpf_table(400)
    for x in range(1, 401):
        assert table[x] == brute_gpf(x)


@given(st.integers(2, 50))
def test_smooth_mask_matches_brute(R):
    mask = smooth_mask(300, R)
    assert not mask[0]
    for x in range(1, 301):
        assert mask[x] == (brute_gpf(x) <= R)


def test_smooth_set_small():
    assert smooth_set(10, 3) == [1, 2, 3, 4, 6, 8, 9]
    assert len(smooth_set(100, 5)) == 34


def test_rho_closed_form_harmonics():
    assert dickman_rho(2.0) == pytest.approx(1 - math.log(2), abs=1e-9)
    for u in (0.0, 0.3, 1.0):
        assert dickman_rho(u) == 1.0


def test_rho_frozen_table():
    for u, val in RHO_TABLE.items():
        assert dickman_rho(u) == pytest.approx(val, abs=1e-8)


def test_rho_table_derivation():
    # re-derive two frozen entries from the delay equation with mpmath
    # quadrature, independent of the stepped table
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 20
    rho2 = 1 - mp.log(2)
    rho3 = rho2 - mp.quad(lambda t: (1 - mp.log(t - 1)) / t, [2, 3])
    assert float(rho2) == pytest.approx(RHO_TABLE[2.0], abs=1e-12)
    assert float(rho3) == pytest.approx(RHO_TABLE[3.0], abs=1e-12)


@given(st.floats(1.0, 7.0), st.floats(0.01, 0.9))
def test_rho_decreasing(u, step):
    # the stepped table is absolutely accurate to ~1e-9, so the deep tail
    # (rho below that) is excluded
    assert dickman_rho(u + step) <= dickman_rho(u) + 1e-10


def test_rho_rejects_out_of_range():
    with pytest.raises(ValueError):
        dickman_rho(-0.5)
    with pytest.raises(ValueError):
        dickman_rho(21.0)


def test_density_approaches_rho():
    # X^(1/2)-smooth density below X against rho(2); finite-size excess
    # shrinks roughly like 1/log X, so only closeness at scale is tested
    X = 200_000
    dens = len(smooth_set(X, math.isqrt(X))) / X
    assert abs(dens - RHO_TABLE[2.0]) < 0.06


def test_c_eta():
    assert c_eta(1.0) == 1.0
    assert c_eta(0.5) == pytest.approx(RHO_TABLE[2.0], abs=1e-8)
    assert c_eta(0.25) == pytest.approx(RHO_TABLE[4.0], abs=1e-8)
    with pytest.raises(ValueError):
        c_eta(0.0)


def test_smooth_counts_monotone_in_R():
    counts = [len(smooth_set(5000, R)) for R in (2, 3, 7, 19, 67)]
    assert counts == sorted(counts)
    assert np.all(np.diff(counts) > 0)
