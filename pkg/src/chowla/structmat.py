"""Circulant and negacyclic matrices, Galois matrices of x_k values, and
their determinants in terms of class numbers and L(1, chi).

Shapes for a vector v = (v_0, ..., v_{m-1}):

    A+ (i, j) =  v[(i + j) mod m]
    A- (i, j) = +-v[(i + j) mod m], minus iff i + j >= m
    C+ (i, j) =  v[(i - j) mod m]
    C- (i, j) = +-v[(i - j) mod m], minus iff i < j

All sign factors of the form sin(x) +- cos(x) with x a multiple of pi/4 are
taken from lookup tables, never from floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from chowla.cotsum import _i_pow, dlog_table, legendre, v2, xk_table
from chowla.exactalg import DEFAULT_DIGITS, CycloElem, GaloisMap, check_odd_prime, embed, format_rational, galois_apply
from chowla.lseries import CharacterTable, l1_odd

KINDS = ("A+", "A-", "C+", "C-")

# sin(n pi/4) and cos(n pi/4) times sqrt(2)^[n odd]; only even n are used here
_SIN_QUARTER = {0: 0, 2: 1, 4: 0, 6: -1}
_COS_QUARTER = {0: 1, 2: 0, 4: -1, 6: 0}


def sin_cos_sign(n: int, sign: int) -> int:
    """sin(n pi / 4) + sign * cos(n pi / 4) for even n, exactly."""
    if n % 2:
        raise ValueError("only even multiples of pi/4 are integral")
    n %= 8
    return _SIN_QUARTER[n] + sign * _COS_QUARTER[n]


@dataclass(frozen=True)
class StructuredMatrix:
    kind: str
    v: tuple

    @property
    def m(self) -> int:
        return len(self.v)

    def rows(self) -> list[list]:
        m, v = self.m, self.v
        out = []
        for i in range(m):
            row = []
            for j in range(m):
                if self.kind == "A+":
                    row.append(v[(i + j) % m])
                elif self.kind == "A-":
                    x = v[(i + j) % m]
                    row.append(-x if i + j >= m else x)
                elif self.kind == "C+":
                    row.append(v[(i - j) % m])
                else:
                    x = v[(i - j) % m]
                    row.append(-x if i < j else x)
            out.append(row)
        return out


def build(kind: str, v: Sequence) -> StructuredMatrix:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    if len(v) == 0:
        raise ValueError("empty v")
    return StructuredMatrix(kind, tuple(v))


def shifted(v: Sequence, j: int, sign: int) -> tuple:
    """v_j^+- = (v_j, ..., v_{m-1}, +-v_0, ..., +-v_{j-1}).

    For the negacyclic sign, j is reduced mod 2m using v_j = -v_{j-m}.
    """
    m = len(v)
    if sign > 0:
        j %= m
        return tuple(v[j:]) + tuple(v[:j])
    j %= 2 * m
    if j >= m:
        return tuple(-x for x in shifted(v, j - m, -1))
    return tuple(v[j:]) + tuple(-x for x in v[:j])


def unit_shift(m: int, j: int, sign: int, one=1, zero=0) -> tuple:
    """u_j^+- for u = (1, 0, ..., 0)."""
    u = (one,) + (zero,) * (m - 1)
    return shifted(u, j, sign)


def matmul(a: list[list], b: list[list]) -> list[list]:
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = a[i][0] * b[0][j]
            for t in range(1, k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


# -- determinants ---------------------------------------------------------------

def _det_bareiss(rows: list[list[int]]) -> int:
    m = [list(r) for r in rows]
    n = len(m)
    sign, prev = 1, 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        pv = m[c][c]
        for i in range(c + 1, n):
            a = m[i][c]
            for j in range(c + 1, n):
                m[i][j] = (pv * m[i][j] - a * m[c][j]) // prev
        prev = pv
    return sign * m[n - 1][n - 1]


def _det_field(rows: list[list]):
    m = [list(r) for r in rows]
    n = len(m)
    det = None
    sign = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return m[0][0] * 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        pv = m[c][c]
        det = pv if det is None else det * pv
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / pv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det if sign > 0 else -det


def det_exact(rows: list[list]):
    """Exact determinant of a square matrix over Q or over Q(xi_p).

    Rational matrices use fraction-free elimination after clearing row
    denominators; cyclotomic ones use Gaussian elimination in the field.
    """
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    if n == 0:
        return Fraction(1)
    if all(isinstance(x, (int, Fraction)) for r in rows for x in r):
        scale = Fraction(1)
        ints = []
        for r in rows:
            den = 1
            for x in r:
                d = Fraction(x).denominator
                den = den * d // math.gcd(den, d)
            scale *= den
            ints.append([int(Fraction(x) * den) for x in r])
        return Fraction(_det_bareiss(ints)) / scale
    return _det_field(rows)


def _xi(m: int, e: int) -> mpmath.mpc:
    return mpmath.expjpi(mpmath.mpf(2 * (e % m)) / m)


def linalg_product(kind: str, v: Sequence, digits: int = DEFAULT_DIGITS) -> mpmath.mpc:
    """Eigenvalue-product expression for det A+(v) or det A-(v)."""
    m = len(v)
    with mpmath.workdps(digits + 10):
        vv = [mpmath.mpf(Fraction(x).numerator) / Fraction(x).denominator for x in v]
        prod = mpmath.mpc(1)
        if kind == "A+":
            for l in range(m):
                prod *= mpmath.fsum(vv[j] * _xi(m, j * l) for j in range(m))
            return sin_cos_sign(2 * m, -1) * prod
        if kind == "A-":
            for l in range(1, 2 * m, 2):
                prod *= mpmath.fsum(vv[j] * _xi(2 * m, j * l) for j in range(m))
            return sin_cos_sign(2 * m, +1) * prod
    raise ValueError("kind must be A+ or A-")


def linalg_factorization_check(kind: str, v: Sequence, digits: int = DEFAULT_DIGITS) -> bool:
    if len(v) > 12:
        raise ValueError("m must be <= 12")
    exact = det_exact(build(kind, [Fraction(x) for x in v]).rows())
    approx = linalg_product(kind, v, digits)
    with mpmath.workdps(digits + 10):
        ex = mpmath.mpf(exact.numerator) / exact.denominator
        scale = max(abs(ex), mpmath.mpf(1))
        return abs(approx - ex) / scale < mpmath.mpf(10) ** (-(digits - 15))


def shift_identity_check(kind: str, v: Sequence, j: int) -> bool:
    """A(v_j) == C(u_j) A(v) with exact arithmetic, kind A+ or A-."""
    if kind not in ("A+", "A-"):
        raise ValueError("kind must be A+ or A-")
    sign = 1 if kind == "A+" else -1
    m = len(v)
    zero = v[0] * 0
    one = zero + 1
    lhs = build(kind, shifted(v, j, sign)).rows()
    c = build("C" + kind[1], unit_shift(m, j, sign, one, zero)).rows()
    rhs = matmul(c, build(kind, v).rows())
    return all(x == y for rl, rr in zip(lhs, rhs) for x, y in zip(rl, rr))


# -- Galois matrices --------------------------------------------------------------

@dataclass(frozen=True)
class GaloisMatrix:
    p: int
    k: int
    r: int
    g: int
    u: int
    v: int
    variant: str  # "M" (negacyclic, size v/2) or "M'" (circulant, size v)
    vector: tuple  # z_k(r t^(u j)), j = 0..size-1
    entries: tuple  # rows of CycloElem: sigma_g^(i+j)(z_k(r))

    @property
    def size(self) -> int:
        return len(self.vector)

    @property
    def kind(self) -> str:
        return "A-" if self.variant == "M" else "A+"

    def rows(self) -> list[list[CycloElem]]:
        return [list(r) for r in self.entries]


def galois_matrix(p: int, k: int, r: int) -> GaloisMatrix:
    """(sigma_g^(i+j)(z_k(r)))_{i,j}, variant chosen by 2-adic valuations.

    Entries hold z_k = i^k x_k; the matrix of x_k values is i^-k times this.
    """
    check_odd_prime(p)
    r %= p
    if r == 0:
        raise ValueError("r must be coprime to p")
    g, _ = dlog_table(p)
    u = math.gcd(k, p - 1)
    v = (p - 1) // u
    table = xk_table(p, k)
    if v2(p - 1) > v2(k):
        variant, size = "M", v // 2
    else:
        variant, size = "M'", v
    sigma = GaloisMap(p, g)
    z0 = table[r]
    # powers sigma_g^n (z) for n = 0 .. 2 size - 2
    orbit = [z0]
    for _ in range(2 * size - 2):
        orbit.append(galois_apply(sigma, orbit[-1]))
    entries = tuple(tuple(orbit[i + j] for j in range(size)) for i in range(size))
    gk = pow(g, k, p)
    vector = tuple(table[r * pow(gk, j, p) % p] for j in range(size))
    return GaloisMatrix(p, k, r, g, u, v, variant, vector, entries)


def galois_twist_holds(gm: GaloisMatrix, j: int) -> bool:
    """sigma_{g^j}(M) == C(u_j) M exactly."""
    p = gm.p
    s = GaloisMap(p, pow(gm.g, j, p))
    lhs = [[galois_apply(s, x) for x in row] for row in gm.entries]
    sign = -1 if gm.variant == "M" else 1
    zero = CycloElem.zero(p)
    one = CycloElem.one(p)
    c = build("C-" if sign < 0 else "C+", unit_shift(gm.size, j, sign, one, zero)).rows()
    rhs = matmul(c, gm.rows())
    return lhs == rhs


@dataclass(frozen=True)
class GaloisDet:
    det_z: CycloElem  # det of the z_k matrix
    det_x_exact: Fraction | None  # det of the x_k matrix when it is rational
    det_x: mpmath.mpf


def galois_det(gm: GaloisMatrix, digits: int = DEFAULT_DIGITS) -> GaloisDet:
    dz = det_exact(gm.rows())
    e = (-gm.k * gm.size) % 4
    exact = None
    if e % 2 == 0:
        dx = dz if e == 0 else -dz
        if dx.is_rational():
            exact = dx.to_rational()
    with mpmath.workdps(digits + 10):
        val = embed(dz, digits) * _i_pow(e)
        if abs(val.imag) > mpmath.mpf(10) ** (-(digits - 10)):
            raise ArithmeticError("realness violation")
        return GaloisDet(dz, exact, +val.real)


# -- class numbers ----------------------------------------------------------------

def class_number_neg(p: int) -> int:
    """h(-p) by counting reduced forms (a, b, c) with b^2 - 4ac = -p."""
    if p % 4 != 3 or p <= 3:
        raise ValueError("need p = 3 mod 4 and p > 3")
    D = -p
    h = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if b < 0 and (a == c):
                continue
            h += 1
        a += 1
    return h


def relative_class_number(p: int, digits: int = DEFAULT_DIGITS) -> int:
    """h_p^- = 2p prod_{chi odd} (-B_{1,chi} / 2), B_{1,chi} = (1/p) sum chi(a) a."""
    check_odd_prime(p)
    tbl = CharacterTable.build(p)
    with mpmath.workdps(digits + 10):
        prod = mpmath.mpc(2 * p)
        for j in range(1, p - 1, 2):
            b1 = mpmath.fsum(tbl.chi(j, a, digits) * a for a in range(1, p)) / p
            prod *= -b1 / 2
        h = int(mpmath.nint(prod.real))
        if abs(prod - h) > mpmath.mpf(10) ** -10:
            raise ArithmeticError("precision insufficient")
        return h


# -- determinant corollaries -------------------------------------------------------

COROLLARIES = ("fcd1", "fcd1b", "fcd2", "fcd2b")


def _eta_index(p: int, k: int) -> int:
    """Index j with chi_j a generator of the character group and
    chi_j(g^k) = exp(2 pi i / v), v = (p-1)/gcd(k, p-1).

    When g^(k/u) is itself a primitive root this is the character attached to
    it; otherwise the smallest unit j mod p-1 with (k/u) j = 1 mod v is used,
    which exists because units mod p-1 map onto units mod v.
    """
    u = math.gcd(k, p - 1)
    v = (p - 1) // u
    kp = k // u
    for j in range(1, p - 1):
        if math.gcd(j, p - 1) == 1 and (kp * j) % v == 1 % v:
            return j
    raise ArithmeticError("no generator with the required value")


def _applicable(p: int, k: int, which: str) -> bool:
    u = math.gcd(k, p - 1)
    if which == "fcd1":
        return u == 1
    if which == "fcd1b":
        return u == 2 and p % 4 == 3
    if which == "fcd2":
        return u == 2 and p % 4 == 1
    if which == "fcd2b":
        return u == 4 and p % 8 == 5
    raise ValueError(f"unknown corollary {which!r}")


def closed_form(
    p: int,
    k: int,
    r: int,
    which: str,
    digits: int = DEFAULT_DIGITS,
    h_minus: int | None = None,
    corrected: bool = False,
):
    """The corollary's value for det of the x_k Galois matrix.

    fcd1b returns an exact Fraction; the others return mpmath numbers.
    With ``corrected`` the two L-value products are taken as they follow
    from the general determinant product: fcd2 gains the unit factor
    conj(eta(r))^((p-1)^2/16), which is 1 at r = 1, and fcd2b uses
    2^((k-2)(p-1)/4) in place of the displayed 2^((k-1)(p-1)/4).
    """
    if not _applicable(p, k, which):
        raise ValueError("corollary inapplicable")
    leg = legendre(r, p)
    if which in ("fcd1", "fcd1b"):
        h = relative_class_number(p, digits) if h_minus is None else h_minus
        e2 = k * (p - 2) - (p - 1) // 2
        if which == "fcd1b":
            sgn = -1 if ((p - 3) // 4) % 2 else 1
            return sgn * leg * Fraction(2) ** e2 * h**k / Fraction(p) ** (k * (p + 3) // 4)
        sgn = sin_cos_sign(p - 1, +1)
        with mpmath.workdps(digits + 10):
            return sgn * leg ** ((p - 1) // 2) * mpmath.mpf(2) ** e2 * h**k / mpmath.mpf(p) ** (mpmath.mpf(k * (p + 3)) / 4)
    tbl = CharacterTable.build(p)
    star = _eta_index(p, k)
    q = (p - 1) // 2
    with mpmath.workdps(digits + 10):
        prod = mpmath.mpc(1)
        for l in range(1, (p - 1) // 2 + 1, 2):
            a = l1_odd(tbl, star * l, digits) ** k
            b = l1_odd(tbl, q + star * l, digits) ** k
            prod *= a + leg * b
        eta_bar = mpmath.conj(tbl.chi(star, r, digits))
        if which == "fcd2":
            sgn = sin_cos_sign((p - 1) // 2, +1)
            unit = eta_bar ** (((p - 1) // 4) ** 2) if corrected else 1
            return sgn * unit * mpmath.mpf(2) ** ((k - 2) * (p - 1) // 4) / mpmath.pi ** (k * (p - 1) // 4) * prod
        sgn = -1 if ((p - 5) // 8) % 2 else 1
        e2 = (k - 2 if corrected else k - 1) * (p - 1) // 4
        return sgn * eta_bar ** (((p - 1) // 4) ** 2) * mpmath.mpf(2) ** e2 / mpmath.pi ** (k * (p - 1) // 4) * prod


def lemma_formula(p: int, k: int, r: int, digits: int = DEFAULT_DIGITS) -> mpmath.mpc:
    """The general L-value product for det of the x_k Galois matrix.

    Uses the negacyclic product when v_2(p-1) > v_2(k) and the circulant
    one otherwise; eta = chi_j with j the inverse of k/u mod p-1.
    """
    tbl = CharacterTable.build(p)
    star = _eta_index(p, k)
    u = math.gcd(k, p - 1)
    v = (p - 1) // u
    n = p - 1
    with mpmath.workdps(digits + 10):
        eta_bar_r = mpmath.conj(tbl.chi(star, r, digits))
        prod = mpmath.mpc(1)
        if v2(p - 1) > v2(k):
            for l in range(1, v + 1, 2):
                s = mpmath.fsum(eta_bar_r ** (v * a) * l1_odd(tbl, star * (l + v * a) % n, digits) ** k for a in range(u))
                prod *= s / u
            sgn = sin_cos_sign(v, +1)
            return sgn * eta_bar_r ** (v * v // 4) * mpmath.mpf(2) ** ((k - 1) * v // 2) / mpmath.pi ** (k * v // 2) * prod
        for l in range(1, 2 * v + 1, 2):
            s = mpmath.fsum(
                eta_bar_r ** (2 * v * a) * l1_odd(tbl, star * (l + 2 * v * a) % n, digits) ** k for a in range(u // 2)
            )
            prod *= s / u
        sgn = -1 if ((v - 1) // 2) % 2 else 1
        return sgn * eta_bar_r ** (v * v) * (2 / mpmath.pi) ** (k * v) * prod


@dataclass
class FcdReport:
    corollary: str
    p: int
    k: int
    r: int
    det_exact: Fraction | None
    det_float: mpmath.mpf
    formula_float: mpmath.mpc
    rel_dev: mpmath.mpf
    passed: bool

    def to_json(self) -> dict:
        return {
            "corollary": self.corollary,
            "p": self.p,
            "k": self.k,
            "r": self.r,
            "det_exact": None if self.det_exact is None else format_rational(self.det_exact),
            "det_float": mpmath.nstr(self.det_float, 40),
            "formula_float": mpmath.nstr(mpmath.re(self.formula_float), 40),
            "rel_dev": mpmath.nstr(self.rel_dev, 5),
            "pass": self.passed,
        }


def verify_fcd(
    p: int,
    k: int,
    r: int,
    which: str,
    digits: int = DEFAULT_DIGITS,
    tol_digits: int = 30,
    corrected: bool = False,
) -> FcdReport:
    if not _applicable(p, k, which):
        raise ValueError("corollary inapplicable")
    gm = galois_matrix(p, k, r)
    det = galois_det(gm, digits)
    form = closed_form(p, k, r, which, digits, corrected=corrected)
    with mpmath.workdps(digits + 10):
        if isinstance(form, Fraction):
            passed = det.det_x_exact is not None and det.det_x_exact == form
            f_val = mpmath.mpc(mpmath.mpf(form.numerator) / form.denominator)
        else:
            f_val = mpmath.mpc(form)
            passed = None
        scale = max(abs(f_val), mpmath.mpf(10) ** -(digits // 2))
        rel = abs(det.det_x - f_val) / scale
        if passed is None:
            passed = bool(rel < mpmath.mpf(10) ** -tol_digits)
    return FcdReport(which, p, k, gm.r, det.det_x_exact, det.det_x, f_val, rel, passed)
