import cmath
import math

import pytest
from hypothesis import given, settings, strategies as st

from diagpair import (
    DiagonalSystem,
    BudgetError,
    chi_p_partial,
    complete_sum,
    count_congruences,
    padic_witness,
    singular_series,
    t_factor,
)
from diagpair.oracles import brute_count_congruences

ODD_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def direct_complete_sum(kind, q, r2, r3, coeffs):
    total = 0j
    for x in range(q):
        if kind == "f":
            A3, A2 = coeffs
            phase = r3 * A3 * x**3 + r2 * A2 * x * x
        elif kind == "g":
            phase = r3 * coeffs[0] * x**3
        else:
            phase = r2 * coeffs[0] * x * x
        total += cmath.exp(2j * math.pi * phase / q)
    return total


@given(st.integers(1, 30), st.sampled_from("fgh"), st.integers(-3, 3).filter(bool), st.integers(-3, 3).filter(bool))
@settings(max_examples=60)
def test_complete_sum_matches_direct(q, kind, A3, A2):
    coeffs = (A3, A2) if kind == "f" else (A3,) if kind == "g" else (A2,)
    got = complete_sum(kind, q, q // 3, q // 2, coeffs).value
    want = direct_complete_sum(kind, q, q // 3, q // 2, coeffs)
    assert abs(got - want) <= 1e-9 * q


@pytest.mark.parametrize("p", ODD_PRIMES)
def test_gauss_magnitude(p):
    # quadratic complete sum with p coprime to everything has magnitude sqrt(p)
    val = complete_sum("h", p, 1, 0, (1,))
    assert val.magnitude == pytest.approx(math.sqrt(p), rel=1e-12)


def test_complete_sum_residue_zero_is_count():
    assert complete_sum("g", 12, 5, 0, (1,)).value == pytest.approx(12 + 0j)
    assert complete_sum("h", 9, 0, 2, (1,)).value == pytest.approx(9 + 0j)


def test_t_factor_matches_direct(sample5):
    for q, r2, r3 in [(2, 1, 1), (3, 1, 2), (4, 3, 1), (5, 2, 3), (9, 4, 7)]:
        cubic = sample5.cubic_coeffs()
        quad = sample5.quad_coeffs()
        # q^-s sum over all residue tuples of e((r3 Theta + r2 Phi)/q),
        # factored per variable
        direct = 1 + 0j
        for A3, A2 in zip(cubic, quad):
            comp = sum(
                cmath.exp(2j * math.pi * ((r3 * A3 * x**3 + r2 * A2 * x * x) % q) / q)
                for x in range(q)
            )
            direct *= comp / q
        got = t_factor(sample5, q, r2, r3)
        assert abs(got - direct) <= 1e-10


@given(q1=st.integers(1, 10), q2=st.integers(1, 10))
@settings(max_examples=25)
def test_congruence_crt_multiplicativity(sample5, q1, q2):
    if math.gcd(q1, q2) != 1:
        return
    M1 = count_congruences(sample5, q1).M
    M2 = count_congruences(sample5, q2).M
    assert count_congruences(sample5, q1 * q2).M == M1 * M2


@given(q=st.integers(1, 12))
def test_congruences_match_brute(tiny2, q):
    assert count_congruences(tiny2, q).M == brute_count_congruences(tiny2, q)


def test_congruences_match_brute_s5(sample5):
    for q in (4, 9):
        assert count_congruences(sample5, q).M == brute_count_congruences(sample5, q)


def test_congruence_budget():
    big = DiagonalSystem(a=(1,) * 6, b=(1,) * 6)
    with pytest.raises(BudgetError):
        count_congruences(big, 10_000, budget=10**6)


@pytest.mark.parametrize("p,t", [(2, 3), (3, 2), (5, 1), (7, 1)])
def test_chi_identity(p, t, sample5):
    part = chi_p_partial(sample5, p, t)
    assert part.relative_gap <= 1e-9
    assert part.M == count_congruences(sample5, p**t).M


def test_chi_depth_zero(sample5):
    part = chi_p_partial(sample5, 3, 0)
    assert part.series_side == 1.0
    assert part.count_side == 1.0


def test_singular_series_partials(balanced11):
    res = singular_series(balanced11, 40)
    assert res.value == pytest.approx(res.partials[-1])
    assert abs(res.imag) <= 1e-9
    assert set(res.A) == set(range(1, 41))
    assert res.A[1] == 1.0 and res.B[1] == 1.0
    # A is the primitive absolute mass, so it dominates B
    assert all(res.A[q] >= abs(res.B[q]) - 1e-12 for q in res.A)


def test_singular_series_height_cap(balanced11):
    with pytest.raises(BudgetError):
        singular_series(balanced11, 600)


def test_padic_witness_found(balanced11, rng):
    wit = padic_witness(balanced11, 7, rng=rng)
    assert wit.found
    assert wit.solution is not None
    theta, phi = balanced11.eval_forms(wit.solution)
    assert theta % 7 ** wit.k == 0 and phi % 7 ** wit.k == 0
    assert wit.minor_valuation is not None and wit.minor_valuation < wit.k
    assert wit.inequality_ok


def test_padic_witness_absent(rng):
    # x^3 + y^3 = x^2 + y^2 = 0 mod 7 forces x = y = 0 (since -1 is not
    # a square mod 7), so every candidate has vanishing Jacobian minors
    blocked = DiagonalSystem(a=(1, 1), b=(1, 1))
    wit = padic_witness(blocked, 7, rng=rng)
    assert not wit.found
    assert wit.solution is None
