"""The cotangent-product sums x_k(r; p).

For p an odd prime, k >= 1 and (r, p) = 1,

    x_k(r; p) = p^-k * sum over m_1 ... m_k = r (mod p), all m_j coprime to p,
                of cot(pi m_1 / p) ... cot(pi m_k / p).

Each i cot(pi m / p) = -(xi^m + 1) / (xi^m - 1) lies in Q(xi_p), so the
value ``z_k(r) = i^k x_k(r; p)`` is an exact :class:`CycloElem`.  Tables
store z_k; the factor i^-k is reapplied only when converting to floats.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from sympy import legendre_symbol, primitive_root

from chowla.exactalg import (
    DEFAULT_DIGITS,
    CycloElem,
    GaloisMap,
    check_odd_prime,
    cyclo_inv,
    embed,
    galois_apply,
    trace_Q,
)

NAIVE_LIMIT = 10**7


def smallest_primitive_root(p: int) -> int:
    return int(primitive_root(p))


@lru_cache(maxsize=None)
def dlog_table(p: int) -> tuple[int, dict[int, int]]:
    """(g, {residue: exponent}) for the smallest primitive root g mod p."""
    g = smallest_primitive_root(p)
    logs = {}
    x = 1
    for j in range(p - 1):
        logs[x] = j
        x = x * g % p
    return g, logs


def v2(n: int) -> int:
    """2-adic valuation of a nonzero integer."""
    n = abs(n)
    return (n & -n).bit_length() - 1


def legendre(r: int, p: int) -> int:
    return int(legendre_symbol(r % p, p))


@dataclass(frozen=True)
class CotElement:
    p: int
    m: int
    value: CycloElem


@lru_cache(maxsize=None)
def _cot_value(p: int, m: int) -> CycloElem:
    w = CycloElem.xi(p, m)
    return -(w + 1) * cyclo_inv(w - 1)


def cot_element(p: int, m: int) -> CotElement:
    """i cot(pi m / p) as an exact element of Q(xi_p)."""
    check_odd_prime(p)
    m %= p
    if m == 0:
        raise ValueError("cotangent pole")
    return CotElement(p, m, _cot_value(p, m))


def _check_residue(p: int, r: int) -> int:
    r %= p
    if r == 0:
        raise ValueError(f"r must be coprime to p={p}")
    return r


def xk_naive(p: int, k: int, r: int) -> CycloElem:
    """z_k(r) by enumerating all k-tuples; the testing oracle for xk_table."""
    check_odd_prime(p)
    if k < 1:
        raise ValueError("k must be >= 1")
    r = _check_residue(p, r)
    if p ** (k - 1) > NAIVE_LIMIT:
        raise ValueError("oracle too large")
    cots = [None] + [_cot_value(p, m) for m in range(1, p)]
    inv = [0] + [pow(m, -1, p) for m in range(1, p)]
    total = CycloElem.zero(p)

    def walk(depth: int, prod: int, acc: CycloElem):
        nonlocal total
        if depth == k - 1:
            last = r * inv[prod] % p
            total = total + acc * cots[last]
            return
        for m in range(1, p):
            walk(depth + 1, prod * m % p, acc * cots[m])

    walk(0, 1, CycloElem.one(p))
    return total / p**k


@dataclass(frozen=True)
class XkTable:
    """All z_k(r) = i^k x_k(r; p), r = 1..p-1."""

    p: int
    k: int
    z: dict

    def __getitem__(self, r: int) -> CycloElem:
        r %= self.p
        if r == 0:
            return CycloElem.zero(self.p)
        return self.z[r]

    @property
    def half(self) -> list[CycloElem]:
        """z_k(1), ..., z_k((p-1)/2)."""
        return [self.z[r] for r in range(1, (self.p - 1) // 2 + 1)]

    def fixed_subgroup(self) -> list[int]:
        """Residues c generating the subgroup of order gcd(k, p-1)."""
        p = self.p
        g, _ = dlog_table(p)
        u = math.gcd(self.k, p - 1)
        step = (p - 1) // u
        return sorted(pow(g, j * step, p) for j in range(u))

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "z": {str(r): self.z[r].to_json()["coeffs"] for r in sorted(self.z)},
        }

    @classmethod
    def from_json(cls, data: dict) -> "XkTable":
        p = int(data["p"])
        z = {int(r): CycloElem(p, c) for r, c in data["z"].items()}
        return cls(p, int(data["k"]), z)

    def to_csv(self, digits: int = DEFAULT_DIGITS) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "x_k(r;p)"])
        for r in range(1, self.p):
            w.writerow([r, mpmath.nstr(xk_float(self, r, digits), digits, strip_zeros=False)])
        return buf.getvalue()


@lru_cache(maxsize=64)
def xk_table(p: int, k: int) -> XkTable:
    """All z_k(r), by k-1 multiplicative convolutions over (Z/pZ)^*.

    Residues are indexed by discrete log base the smallest primitive root,
    turning the constraint m_1 ... m_k = r into a cyclic convolution of
    length p - 1.
    """
    check_odd_prime(p)
    if k < 1:
        raise ValueError("k must be >= 1")
    g, _ = dlog_table(p)
    n = p - 1
    powers = [pow(g, j, p) for j in range(n)]
    base = [_cot_value(p, powers[j]) / p for j in range(n)]
    cur = list(base)
    for _ in range(k - 1):
        nxt = [CycloElem.zero(p) for _ in range(n)]
        for i, a in enumerate(cur):
            if a.is_zero():
                continue
            for j, b in enumerate(base):
                idx = (i + j) % n
                nxt[idx] = nxt[idx] + a * b
        cur = nxt
    return XkTable(p, k, {powers[j]: cur[j] for j in range(n)})


def _i_pow(k: int) -> mpmath.mpc:
    return [mpmath.mpc(1), mpmath.mpc(0, 1), mpmath.mpc(-1), mpmath.mpc(0, -1)][k % 4]


def xk_float(table: XkTable, r: int, digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
    """x_k(r; p) as a real mpf, checking the imaginary residue."""
    r = _check_residue(table.p, r)
    with mpmath.workdps(digits + 10):
        val = embed(table[r], digits) * _i_pow(-table.k)
        if abs(val.imag) > mpmath.mpf(10) ** (-(digits - 10)):
            raise ArithmeticError("realness violation")
        return +val.real


def trace_xk(table: XkTable, r: int) -> Fraction:
    """Rational trace of x_k(r; p).

    For even k this is Tr over the real subfield Q(xi_p)^+ of x_k(r; p),
    i.e. half of the trace of i^-k z_k(r) over Q(xi_p).  For odd k, x_k is not
    in Q(xi_p) and the value returned is Tr_{Q(xi_p)/Q}(z_k(r)), which is 0.
    """
    r = _check_residue(table.p, r)
    t = trace_Q(table[r])
    k = table.k
    if k % 2:
        return t
    sign = -1 if (k // 2) % 2 else 1
    return sign * t / 2


def trace_closed_form(p: int, k: int, r: int, h: int) -> Fraction | None:
    """2^(k-1) (r/p) h^k p^(-k/2), valid when gcd(k, p-1) = 2 and p = 3 mod 4.

    ``h`` is the class number of Q(sqrt(-p)).  Returns None outside that case.
    """
    if math.gcd(k, p - 1) != 2 or p % 4 != 3:
        return None
    return Fraction(2 ** (k - 1) * legendre(r, p) * h**k, p ** (k // 2))


def equivariance_holds(table: XkTable, c: int, r: int) -> bool:
    """sigma_c(z_k(r)) == z_k(c^k r)."""
    p = table.p
    return galois_apply(GaloisMap(p, c), table[r]) == table[pow(c, table.k, p) * r % p]


def distinct_up_to_sign(table: XkTable) -> bool:
    """True when x_k(r) != +-x_k(l) for all r != +-l (r, l <= (p-1)/2)."""
    half = table.half
    seen = set()
    for z in half:
        if z in seen or -z in seen:
            return False
        seen.add(z)
    return True


def table_json(table: XkTable) -> str:
    return json.dumps(table.to_json(), sort_keys=True)
