from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from chowla.cotsum import legendre, xk_table
from chowla.exactalg import CycloElem, GaloisMap, embed, galois_apply
from chowla.structmat import (
    build,
    class_number_neg,
    closed_form,
    det_exact,
    galois_det,
    galois_matrix,
    galois_twist_holds,
    lemma_formula,
    linalg_factorization_check,
    relative_class_number,
    shift_identity_check,
    shifted,
    sin_cos_sign,
    unit_shift,
    verify_fcd,
)

rationals = st.fractions(min_value=-9, max_value=9, max_denominator=6)


def test_shapes():
    assert build("A+", [5]).rows() == [[5]]
    a, b = Fraction(2), Fraction(3)
    assert build("A-", [a, b]).rows() == [[a, b], [b, -a]]
    v0, v1, v2 = 1, 2, 3
    assert build("C-", [v0, v1, v2]).rows()[0] == [v0, -v2, -v1]
    assert build("C+", [v0, v1, v2]).rows()[0] == [v0, v2, v1]
    with pytest.raises(ValueError):
        build("B+", [1])


@settings(max_examples=40, deadline=None)
@given(rationals, rationals)
def test_det_2x2_negacyclic(a, b):
    assert det_exact(build("A-", [a, b]).rows()) == -a * a - b * b


def test_det_trivial_cases():
    eye = [[int(i == j) for j in range(5)] for i in range(5)]
    assert det_exact(eye) == 1
    assert det_exact([[1, 2, 3], [1, 2, 3], [0, 1, 5]]) == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(rationals, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_against_sympy(rows):
    expected = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows]).det()
    assert det_exact(rows) == Fraction(int(expected.p), int(expected.q))


def test_cyclotomic_det_against_embedding():
    p = 7
    rows = [[CycloElem.xi(p, i * j) + i - j for j in range(3)] for i in range(3)]
    d = det_exact(rows)
    with mpmath.workdps(40):
        m = mpmath.matrix([[embed(x, 40) for x in r] for r in rows])
        assert abs(embed(d, 40) - mpmath.det(m)) < mpmath.mpf(10) ** -30


def test_sign_table():
    for n in range(0, 16, 2):
        with mpmath.workdps(30):
            exact = mpmath.sin(mpmath.pi * n / 4) + mpmath.cos(mpmath.pi * n / 4)
        assert abs(sin_cos_sign(n, 1) - exact) < 1e-25
    with pytest.raises(ValueError):
        sin_cos_sign(3, 1)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8).flatmap(lambda m: st.lists(rationals, min_size=m, max_size=m)))
def test_linalg_factorization(v):
    assert linalg_factorization_check("A+", v)
    assert linalg_factorization_check("A-", v)


def test_linalg_small_cases():
    assert linalg_factorization_check("A+", [Fraction(7)])
    assert linalg_factorization_check("A-", [Fraction(2), Fraction(-5)])
    with pytest.raises(ValueError):
        linalg_factorization_check("A+", [1] * 13)


def test_shift_vectors():
    assert shifted((1, 2, 3), 1, 1) == (2, 3, 1)
    assert shifted((1, 2, 3), 1, -1) == (2, 3, -1)
    assert shifted((1, 2, 3), 4, -1) == (-2, -3, 1)
    assert unit_shift(3, 0, -1) == (1, 0, 0)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6).flatmap(lambda m: st.lists(rationals, min_size=m, max_size=m)), st.integers(-8, 8))
def test_shift_identities(v, j):
    assert shift_identity_check("A+", v, j)
    assert shift_identity_check("A-", v, j)


def test_shift_identity_examples():
    v = [Fraction(3), Fraction(-1), Fraction(4), Fraction(1, 2)]
    assert shift_identity_check("A-", v, 2)
    assert shift_identity_check("A+", v[:3], 1)
    assert shift_identity_check("A+", v, 0) and shift_identity_check("A-", v, 0)


@pytest.mark.parametrize(
    "p,k,r,variant,size",
    [(7, 2, 1, "M'", 3), (5, 2, 1, "M", 1), (13, 4, 1, "M'", 3), (13, 2, 1, "M", 3), (11, 1, 2, "M", 5)],
)
def test_galois_matrix_variants(p, k, r, variant, size):
    gm = galois_matrix(p, k, r)
    assert gm.variant == variant and gm.size == size
    # entries are sigma_g^(i+j) of z_k(r), and agree with the structured shape
    s = GaloisMap(p, gm.g)
    z = xk_table(p, k)[r]
    assert gm.entries[0][0] == z
    if size > 1:
        assert gm.entries[0][1] == galois_apply(s, z)
    assert build(gm.kind, gm.vector).rows() == gm.rows()


@pytest.mark.parametrize("p,k", [(5, 2), (7, 2), (13, 2), (13, 4), (7, 1)])
def test_galois_twist(p, k):
    gm = galois_matrix(p, k, 1)
    assert all(galois_twist_holds(gm, j) for j in range(-2, p))


def _h_analytic(p: int) -> int:
    """h(-p) = -(1/p) sum_{a < p} a (a/p) for p = 3 mod 4, p > 3."""
    return -sum(a * legendre(a, p) for a in range(1, p)) // p


@pytest.mark.parametrize("p", [7, 11, 19, 23, 31, 43, 47, 59, 67, 71, 163])
def test_class_number_neg(p):
    assert class_number_neg(p) == _h_analytic(p)


def test_class_number_examples():
    assert class_number_neg(7) == 1 and class_number_neg(23) == 3 and class_number_neg(11) == 1
    with pytest.raises(ValueError):
        class_number_neg(13)


@pytest.mark.parametrize("p,h", [(3, 1), (5, 1), (7, 1), (19, 1), (23, 3), (29, 8), (31, 9), (37, 37), (41, 121), (43, 211)])
def test_relative_class_number(p, h):
    assert relative_class_number(p) == h


def test_fcd1b_exact_gold():
    for r in range(1, 7):
        rep = verify_fcd(7, 2, r, "fcd1b")
        assert rep.passed
        assert rep.det_exact == -legendre(r, 7) * Fraction(128, 16807)
    assert verify_fcd(7, 2, 3, "fcd1b").det_exact == Fraction(128, 16807)


@pytest.mark.parametrize("p,k", [(11, 2), (7, 4), (11, 6), (19, 2)])
def test_fcd1b_other_cases(p, k):
    rep = verify_fcd(p, k, 1, "fcd1b")
    assert rep.passed and rep.det_exact is not None


def test_fcd1_p7():
    rep = verify_fcd(7, 1, 1, "fcd1")
    with mpmath.workdps(60):
        expected = -(2 ** (5 - 3)) * relative_class_number(7) / mpmath.mpf(7) ** (mpmath.mpf(10) / 4)
        assert abs(rep.det_float - expected) < mpmath.mpf(10) ** -40
    assert rep.passed


def test_fcd2_p13_r1():
    assert verify_fcd(13, 2, 1, "fcd2").passed


def test_fcd2_needs_unit_factor_off_r1():
    # the printed product omits conj(eta(r))^((p-1)^2/16), which is 1 at r = 1
    assert not verify_fcd(13, 2, 2, "fcd2").passed
    assert all(verify_fcd(13, 2, r, "fcd2", corrected=True).passed for r in range(1, 13))


@pytest.mark.parametrize("p", [5, 13])
def test_fcd2b_power_of_two(p):
    printed = verify_fcd(p, 4, 1, "fcd2b")
    fixed = verify_fcd(p, 4, 1, "fcd2b", corrected=True)
    assert fixed.passed
    with mpmath.workdps(60):
        ratio = printed.formula_float / fixed.formula_float
        assert abs(ratio - 2 ** ((p - 1) // 4)) < mpmath.mpf(10) ** -40
    assert not printed.passed


@pytest.mark.parametrize("p,k", [(5, 1), (7, 3), (11, 5), (13, 3), (13, 6), (7, 4), (13, 8)])
def test_general_determinant_product(p, k):
    for r in (1, 2):
        d = galois_det(galois_matrix(p, k, r))
        with mpmath.workdps(60):
            assert abs(lemma_formula(p, k, r) - d.det_x) < mpmath.mpf(10) ** -40 * abs(d.det_x)


def test_nonvanishing():
    for p, k in ((7, 2), (11, 2), (13, 2), (13, 4), (17, 2)):
        assert not galois_det(galois_matrix(p, k, 1)).det_z.is_zero()


def test_inapplicable():
    with pytest.raises(ValueError, match="corollary inapplicable"):
        verify_fcd(7, 2, 1, "fcd2")
    with pytest.raises(ValueError):
        closed_form(13, 3, 1, "fcd1")


def test_report_json():
    out = verify_fcd(7, 2, 1, "fcd1b").to_json()
    assert list(out) == ["corollary", "p", "k", "r", "det_exact", "det_float", "formula_float", "rel_dev", "pass"]
    assert out["det_exact"] == "-128/16807" and out["pass"] is True
