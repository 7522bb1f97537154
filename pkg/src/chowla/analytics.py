"""Divisor sieves, symmetric congruence sums, and moments of x_k(r; p)."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from chowla.cotsum import xk_float, xk_table
from chowla.exactalg import DEFAULT_DIGITS, CycloElem


@dataclass(frozen=True)
class DivisorTable:
    k: int
    N: int
    values: np.ndarray  # index n holds d_k(n); index 0 unused

    def __getitem__(self, n: int) -> int:
        return int(self.values[n])


def _primes_upto(N: int) -> np.ndarray:
    sieve = np.ones(N + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, math.isqrt(N) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    return np.nonzero(sieve)[0]


def dk_sieve(k: int, N: int) -> DivisorTable:
    """d_k(n) for n <= N.

    d_k is multiplicative with d_k(q^a) = C(a + k - 1, k - 1), so each prime
    power q^a rescales the multiples of q^a by C(a+k-1, k-1) / C(a+k-2, k-1);
    the division is exact because the old factor is present.
    """
    if k < 1 or N < 1:
        raise ValueError("need k >= 1 and N >= 1")
    d = np.ones(N + 1, dtype=np.int64)
    d[0] = 0
    if k == 1:
        return DivisorTable(k, N, d)
    for q in _primes_upto(N):
        q = int(q)
        qa, a = q, 1
        while qa <= N:
            prev = math.comb(a + k - 2, k - 1)
            cur = math.comb(a + k - 1, k - 1)
            sl = d[qa::qa]
            sl //= prev
            sl *= cur
            qa *= q
            a += 1
    return DivisorTable(k, N, d)


def dk_convolve(k: int, N: int) -> DivisorTable:
    """d_k by k-1 rounds of Dirichlet convolution with 1 (slower reference)."""
    cur = np.zeros(N + 1, dtype=np.int64)
    cur[1:] = 1
    for _ in range(k - 1):
        nxt = np.zeros_like(cur)
        for m in range(1, N + 1):
            nxt[m::m] += cur[1 : N // m + 1]
        cur = nxt
    return DivisorTable(k, N, cur)


@dataclass
class CongruenceSum:
    estimate: float
    tolerance: float
    X: int
    raw: float
    history: list


def truncated_congruence_sum(p: int, k: int, r: int, X: int = 10**6, tol: float = 1e-3, x_max: int = 2**3 * 10**6):
    """sum over 0 < |n| <= X, n = r (mod p), of d_k(|n|) / n.

    Equal to D_k(1, f) for the odd f with f(r) = 1, f(-r) = -1, so the
    adaptive doubling of :func:`chowla.lseries.dk1_series` is reused.  If
    ``tol`` is not met by ``x_max`` the last estimate is returned with the
    achieved tolerance instead of raising.
    """
    from chowla.lseries import OddPeriodicFunction, SlowConvergence, dk1_series

    if r % p == 0:
        raise ValueError("r must be coprime to p")
    f = OddPeriodicFunction.indicator(p, r)
    try:
        res = dk1_series(f, k, X=X, tol=tol, x_max=x_max)
    except SlowConvergence as exc:
        res = exc.partial
    return CongruenceSum(res.estimate, res.tolerance, res.X, res.raw, res.history)


@dataclass
class PassReport:
    p: int
    k: int
    r: int
    series: float
    exact: float
    deviation: float
    tolerance: float
    passed: bool
    history: list

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "r": self.r,
            "series": repr(self.series),
            "exact": repr(self.exact),
            "deviation": repr(self.deviation),
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def verify_pass(p: int, k: int, r: int, X: int = 10**6, digits: int = DEFAULT_DIGITS, tol: float = 1e-3) -> PassReport:
    """Compare the truncated sum at n = r (mod p) with 2 (pi/2)^k x_k(r; p)."""
    cs = truncated_congruence_sum(p, k, r, X=X, tol=tol)
    with mpmath.workdps(digits):
        exact = float(2 * (mpmath.pi / 2) ** k * xk_float(xk_table(p, k), r, digits))
    dev = abs(cs.estimate - exact)
    return PassReport(p, k, r, cs.estimate, exact, dev, tol, dev < tol, cs.history)


def moment_exact(p: int, k: int, m: int) -> Fraction:
    """sum_{r mod p} x_k(r; p)^m as an exact rational, m even.

    For even m the sum of z_k(r)^m is Galois invariant, hence rational, and
    x_k^m = i^(-km) z_k^m with i^(-km) = (-1)^(km/2).
    """
    if m % 2:
        return Fraction(0)
    table = xk_table(p, k)
    total = CycloElem.zero(p)
    for r in range(1, p):
        total = total + table[r] ** m
    q = total.to_rational()
    return q if (k * m // 2) % 2 == 0 else -q


def moment_lhs(p: int, k: int, m: int, digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
    if m < 1:
        raise ValueError("m must be >= 1")
    if m % 2:
        return mpmath.mpf(0)
    q = moment_exact(p, k, m)
    with mpmath.workdps(digits):
        return mpmath.mpf(q.numerator) / q.denominator


@dataclass(frozen=True)
class MomentConstant:
    k: int
    m: int
    N: int
    constant: float  # (2^(k-1)/pi^k)^m sum_{n <= N} d_k(n)^m / n^m
    tail_bound: float
    doubled: float  # sum over n in Z \ {0}


def moment_rhs_constant(k: int, m: int, N: int = 10**6) -> MomentConstant:
    """(2^(k-1)/pi^k)^m sum_{n>=1} d_k(n)^m / n^m, truncated at N.

    The tail bound uses d_k(n) <= n^delta on n > N, with delta the largest
    log d_k(n) / log n seen on [N/2, N] plus 0.05 of slack, then integral
    comparison.
    """
    if m < 2 or m % 2:
        raise ValueError("m must be even and >= 2")
    d = dk_sieve(k, N).values[1:].astype(np.float64)
    n = np.arange(1, N + 1, dtype=np.float64)
    s = math.fsum((d / n) ** m)
    lo = max(N // 2, 2)
    delta = float(np.max(np.log(d[lo - 1 :]) / np.log(n[lo - 1 :]))) + 0.05
    expo = m * (1 - delta) - 1
    tail = N ** (-expo) / expo if expo > 0 else float("inf")
    scale = (2 ** (k - 1) / math.pi**k) ** m
    return MomentConstant(k, m, N, scale * s, scale * tail, 2 * scale * s)


@dataclass
class MomentReport:
    p: int
    k: int
    m: int
    lhs: float
    lhs_exact: Fraction
    rhs_constant: float
    rhs_doubled: float
    deviation: float
    bound: float
    passed: bool

    def to_row(self) -> list:
        return [self.p, self.k, self.m, repr(self.lhs), repr(self.rhs_doubled), repr(self.deviation), repr(self.bound), self.passed]


MOMENT_C = 4.0
MOMENT_EXPONENT = 0.9


def moment_report(p: int, k: int, m: int, N: int = 10**6) -> MomentReport:
    """Compare the m-th moment with the constant summed over n in Z minus 0.

    The deviation bound is MOMENT_C / p^MOMENT_EXPONENT.  A failure is
    reported, not raised.
    """
    if m % 2:
        raise ValueError("m must be even")
    q = moment_exact(p, k, m)
    lhs = q.numerator / q.denominator
    const = moment_rhs_constant(k, m, N)
    dev = abs(lhs - const.doubled)
    bound = MOMENT_C / p**MOMENT_EXPONENT
    return MomentReport(p, k, m, lhs, q, const.constant, const.doubled, dev, bound, dev < bound)


def moments_csv(reports: list[MomentReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "k", "m", "lhs", "rhs_doubled", "deviation", "bound", "pass"])
    for rep in reports:
        w.writerow(rep.to_row())
    return buf.getvalue()
