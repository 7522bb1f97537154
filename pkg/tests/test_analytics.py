import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import divisor_count, prime

from chowla.analytics import (
    dk_convolve,
    dk_sieve,
    moment_exact,
    moment_lhs,
    moment_report,
    moment_rhs_constant,
    moments_csv,
    truncated_congruence_sum,
    verify_pass,
)
from chowla.cotsum import xk_float, xk_table


def dk_brute(k: int, n: int) -> int:
    if k == 1:
        return 1
    return sum(dk_brute(k - 1, n // d) for d in range(1, n + 1) if n % d == 0)


def test_divisor_examples():
    assert dk_sieve(2, 12)[12] == 6
    assert dk_sieve(3, 4)[4] == 6
    assert all(dk_sieve(k, 5)[1] == 1 for k in range(1, 6))


def test_sieve_against_sympy_divisor_count():
    d = dk_sieve(2, 5000).values
    assert all(d[n] == divisor_count(n) for n in range(1, 5001))


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_sieve_against_convolution(k):
    assert np.array_equal(dk_sieve(k, 3000).values, dk_convolve(k, 3000).values)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 400))
def test_sieve_against_brute_force(k, n):
    assert dk_sieve(k, n)[n] == dk_brute(k, n)


def test_sieve_rejects_bad_input():
    with pytest.raises(ValueError):
        dk_sieve(0, 10)


def test_congruence_sums_p5():
    one = truncated_congruence_sum(5, 2, 1)
    two = truncated_congruence_sum(5, 2, 2)
    target = 4 * math.pi**2 / (25 * math.sqrt(5))
    assert abs(one.estimate - target) < 1e-3
    assert abs(two.estimate - target / 2) < 1e-3
    assert one.tolerance < 1e-3


def test_congruence_sum_k1_p3():
    res = truncated_congruence_sum(3, 1, 1)
    assert abs(res.estimate - math.pi / (3 * math.sqrt(3))) < 1e-3


def test_congruence_sum_rejects_zero_class():
    with pytest.raises(ValueError):
        truncated_congruence_sum(5, 2, 10)


@pytest.mark.parametrize("p,k,r,tol", [(5, 2, 1, 1e-3), (7, 2, 3, 1e-3), (13, 3, 2, 1e-2)])
def test_verify_pass(p, k, r, tol):
    rep = verify_pass(p, k, r, tol=tol)
    assert rep.passed and rep.deviation < tol
    assert rep.to_json()["pass"] is True


def test_moment_k1_closed_form():
    assert moment_exact(101, 1, 2) == Fraction(3300, 10201)


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 25))
def test_moment_k1_identity(i):
    p = int(prime(i))
    assert moment_exact(p, 1, 2) == Fraction((p - 1) * (p - 2), 3 * p * p)


@pytest.mark.parametrize("p,k", [(5, 2), (7, 3), (13, 2), (11, 4)])
def test_moments_against_floats(p, k):
    table = xk_table(p, k)
    xs = [float(xk_float(table, r)) for r in range(1, p)]
    for m in (2, 4):
        assert abs(float(moment_exact(p, k, m)) - sum(x**m for x in xs)) < 1e-12
    assert moment_exact(p, k, 3) == 0 and moment_lhs(p, k, 1) == 0


def test_moment_positive():
    assert moment_lhs(13, 2, 2) > 0


def test_rhs_constants():
    c = moment_rhs_constant(1, 2, 10**5)
    assert abs(c.doubled - 1 / 3) < 1e-4 and abs(c.constant - 1 / 6) < 1e-4
    c = moment_rhs_constant(2, 2, 10**6)
    assert abs(c.doubled - 5 / 9) < 1e-3
    # the tail estimate covers the truncation error
    assert abs(c.doubled - 5 / 9) <= 2 * c.tail_bound + 1e-12
    c = moment_rhs_constant(1, 4, 10**4)
    assert abs(c.doubled - 1 / 45) < 1e-10


def test_rhs_rejects_odd_m():
    with pytest.raises(ValueError):
        moment_rhs_constant(1, 3)


def test_moment_reports():
    rep = moment_report(101, 1, 2)
    assert rep.passed and abs(rep.deviation - 0.0098356) < 1e-6
    assert moment_report(101, 1, 4).passed
    text = moments_csv([rep])
    assert text.splitlines()[0] == "p,k,m,lhs,rhs_doubled,deviation,bound,pass"
