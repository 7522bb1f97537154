"""Exact arithmetic in the cyclotomic field Q(xi_p), p an odd prime.

Elements are stored in the power basis ``1, xi, ..., xi^(p-2)``.  Reduction
uses ``xi^(p-1) = -(1 + xi + ... + xi^(p-2))``, which makes the coefficient
vector a canonical form: two elements are equal iff their vectors are equal.

Internally a :class:`CycloElem` keeps an integer numerator vector and one
positive common denominator, reduced so that the gcd of all numerators and
the denominator is 1.  The public ``coeffs`` view is a tuple of
:class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath
from sympy import isprime

DEFAULT_DIGITS = 50


class ConductorMismatch(ValueError):
    pass


def parse_rational(s: str | int | Fraction) -> Fraction:
    """Parse ``"num/den"`` (or a bare integer string) into a Fraction."""
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return Fraction(s.strip())


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def check_odd_prime(p: int) -> int:
    if not isinstance(p, int) or p < 3 or not isprime(p):
        raise ValueError(f"p must be an odd prime, got {p!r}")
    return p


@lru_cache(maxsize=None)
def _checked(p: int) -> int:
    return check_odd_prime(p)


def _normalize(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = den
    for c in num:
        if g == 1:
            break
        g = math.gcd(g, c)
    if g != 1:
        num = [c // g for c in num]
        den //= g
    return tuple(num), den


def _fold(full: Sequence[int], p: int) -> list[int]:
    """Reduce a length-p vector (exponents mod p) to the power basis."""
    top = full[p - 1]
    if top == 0:
        return list(full[: p - 1])
    return [c - top for c in full[: p - 1]]


class CycloElem:
    """An element sum_j c_j xi_p^j of Q(xi_p), j = 0..p-2."""

    __slots__ = ("p", "_num", "_den", "_hash")

    def __init__(self, p: int, coeffs: Iterable[Fraction | int | str]):
        _checked(p)
        coeffs = [parse_rational(c) if isinstance(c, str) else Fraction(c) for c in coeffs]
        if len(coeffs) == p:
            # accept a vector indexed by all p exponents and fold it
            den = 1
            for c in coeffs:
                den = den * c.denominator // math.gcd(den, c.denominator)
            full = [c.numerator * (den // c.denominator) for c in coeffs]
            num = _fold(full, p)
        elif len(coeffs) == p - 1:
            den = 1
            for c in coeffs:
                den = den * c.denominator // math.gcd(den, c.denominator)
            num = [c.numerator * (den // c.denominator) for c in coeffs]
        else:
            raise ValueError(f"expected {p - 1} coefficients for p={p}, got {len(coeffs)}")
        self.p = p
        self._num, self._den = _normalize(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, p: int, num: Sequence[int], den: int) -> "CycloElem":
        obj = cls.__new__(cls)
        obj.p = p
        obj._num, obj._den = _normalize(list(num), den)
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "CycloElem":
        _checked(p)
        return cls._raw(p, [0] * (p - 1), 1)

    @classmethod
    def one(cls, p: int) -> "CycloElem":
        return cls.rational(p, 1)

    @classmethod
    def rational(cls, p: int, q: Fraction | int) -> "CycloElem":
        _checked(p)
        q = Fraction(q)
        return cls._raw(p, [q.numerator] + [0] * (p - 2), q.denominator)

    @classmethod
    def xi(cls, p: int, j: int = 1) -> "CycloElem":
        """The root of unity xi_p^j."""
        _checked(p)
        full = [0] * p
        full[j % p] = 1
        return cls._raw(p, _fold(full, p), 1)

    # -- views ----------------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self._num[0], self._den)

    def to_json(self) -> dict:
        return {"p": self.p, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "CycloElem":
        return cls(int(data["p"]), [parse_rational(c) for c in data["coeffs"]])

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "CycloElem":
        if isinstance(other, CycloElem):
            if other.p != self.p:
                raise ConductorMismatch("conductor mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloElem.rational(self.p, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d1, d2 = self._den, other._den
        den = d1 * d2 // math.gcd(d1, d2)
        a, b = den // d1, den // d2
        return CycloElem._raw(self.p, [a * x + b * y for x, y in zip(self._num, other._num)], den)

    __radd__ = __add__

    def __neg__(self):
        return CycloElem._raw(self.p, [-c for c in self._num], self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycloElem._raw(self.p, [c * q.numerator for c in self._num], self._den * q.denominator)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return cyclo_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / q)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return cyclo_mul(self, cyclo_inv(other))

    def __rtruediv__(self, other):
        return cyclo_inv(self) * other

    def __pow__(self, n: int):
        if n < 0:
            return cyclo_inv(self) ** (-n)
        result = CycloElem.one(self.p)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloElem.rational(self.p, other)
        if not isinstance(other, CycloElem):
            return NotImplemented
        return self.p == other.p and self._den == other._den and self._num == other._num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self._num, self._den))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if j == 0 else f"{c}*xi^{j}")
        body = " + ".join(terms) if terms else "0"
        return f"CycloElem(p={self.p}: {body})"


def cyclo_mul(a: CycloElem, b: CycloElem) -> CycloElem:
    """Product in Q(xi_p), reduced to the power basis."""
    if a.p != b.p:
        raise ConductorMismatch("conductor mismatch")
    p = a.p
    full = [0] * p
    an, bn = a._num, b._num
    nz = [(j, y) for j, y in enumerate(bn) if y]
    for i, x in enumerate(an):
        if not x:
            continue
        for j, y in nz:
            full[(i + j) % p] += x * y
    return CycloElem._raw(p, _fold(full, p), a._den * b._den)


# -- polynomials over Q, used for inversion -------------------------------------

def _poly_trim(f: list[Fraction]) -> list[Fraction]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_divmod(f: list[Fraction], g: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    f = list(f)
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    lead = g[-1]
    while len(f) >= len(g) and f:
        c = f[-1] / lead
        shift = len(f) - len(g)
        q[shift] = c
        for i, gi in enumerate(g):
            f[shift + i] -= c * gi
        _poly_trim(f)
    return q, f


def _poly_mul(f: list[Fraction], g: list[Fraction]) -> list[Fraction]:
    if not f or not g:
        return []
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                out[i + j] += x * y
    return out


def _poly_sub(f: list[Fraction], g: list[Fraction]) -> list[Fraction]:
    n = max(len(f), len(g))
    out = [(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(n)]
    return _poly_trim([Fraction(c) for c in out])


def cyclo_inv(a: CycloElem) -> CycloElem:
    """Inverse by the extended Euclidean algorithm against Phi_p(x)."""
    if a.is_zero():
        raise ZeroDivisionError("division by zero")
    p = a.p
    phi = [Fraction(1)] * p
    f = _poly_trim(list(a.coeffs))
    # invariant: s * a == r (mod phi)
    r0, r1 = phi, f
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, rem = _poly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    # r1 is a nonzero constant since phi is irreducible
    c = r1[0]
    s = [x / c for x in s1]
    return CycloElem(p, s + [Fraction(0)] * (p - 1 - len(s)))


# -- Galois action --------------------------------------------------------------

@dataclass(frozen=True)
class GaloisMap:
    """sigma_c : xi_p -> xi_p^c."""

    p: int
    c: int

    def __post_init__(self):
        if self.c % self.p == 0:
            raise ValueError("c must be coprime to p")
        object.__setattr__(self, "c", self.c % self.p)

    def __mul__(self, other: "GaloisMap") -> "GaloisMap":
        if other.p != self.p:
            raise ConductorMismatch("conductor mismatch")
        return GaloisMap(self.p, self.c * other.c % self.p)

    def __call__(self, a: CycloElem) -> CycloElem:
        return galois_apply(self, a)


def galois_apply(s: GaloisMap, a: CycloElem) -> CycloElem:
    if s.p != a.p:
        raise ConductorMismatch("conductor mismatch")
    p, c = a.p, s.c
    if c == 1:
        return a
    full = [0] * p
    for j, x in enumerate(a._num):
        if x:
            full[j * c % p] += x
    return CycloElem._raw(p, _fold(full, p), a._den)


def trace_Q(a: CycloElem) -> Fraction:
    """Tr_{Q(xi_p)/Q}(a) = (p-1) c_0 - sum_{j>=1} c_j."""
    n = a._num
    return Fraction((a.p - 1) * n[0] - sum(n[1:]), a._den)


# -- complex embedding --------------------------------------------------------

@lru_cache(maxsize=None)
def _roots(p: int, dps: int) -> tuple:
    with mpmath.workdps(dps):
        return tuple(mpmath.expjpi(mpmath.mpf(2 * j) / p) for j in range(p - 1))


def embed(a: CycloElem, digits: int = DEFAULT_DIGITS) -> mpmath.mpc:
    """Evaluate a at xi_p = exp(2 pi i / p) with ``digits`` significant digits.

    The result is an ``mpmath.mpc``; the working precision is raised by a
    guard of 10 digits internally.
    """
    if digits < 20:
        raise ValueError("digits must be >= 20")
    dps = digits + 10
    roots = _roots(a.p, dps)
    with mpmath.workdps(dps):
        total = mpmath.fsum(c * w for c, w in zip(a._num, roots) if c)
        return mpmath.mpc(total) / a._den
