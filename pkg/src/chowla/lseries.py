"""Dirichlet characters mod p, L(1, chi), and three routes to D_k(1, f).

Characters are indexed by j = 0..p-2 with chi_j(g) = exp(2 pi i j / (p-1)),
g the smallest primitive root.  They carry mpmath complex values; exact
vanishing is only ever decided by :func:`dk1_via_xk`, which stays inside
Q(xi_p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np

from chowla.cotsum import XkTable, _i_pow, dlog_table, xk_table
from chowla.exactalg import DEFAULT_DIGITS, CycloElem, check_odd_prime, embed, format_rational


@dataclass(frozen=True)
class CharacterTable:
    p: int
    g: int
    dlog: dict

    @classmethod
    def build(cls, p: int) -> "CharacterTable":
        return _character_table(check_odd_prime(p))

    def chi(self, j: int, a: int, digits: int = DEFAULT_DIGITS) -> mpmath.mpc:
        a %= self.p
        if a == 0:
            return mpmath.mpc(0)
        e = (j * self.dlog[a]) % (self.p - 1)
        with mpmath.workdps(digits + 10):
            return mpmath.expjpi(mpmath.mpf(2 * e) / (self.p - 1))

    def is_odd(self, j: int) -> bool:
        return j % 2 == 1

    def quadratic_index(self) -> int:
        return (self.p - 1) // 2


@lru_cache(maxsize=None)
def _character_table(p: int) -> CharacterTable:
    g, logs = dlog_table(p)
    return CharacterTable(p, g, dict(logs))


@lru_cache(maxsize=None)
def _cot_floats(p: int, dps: int) -> tuple:
    with mpmath.workdps(dps):
        return (mpmath.mpf(0),) + tuple(mpmath.cot(mpmath.pi * m / p) for m in range(1, p))


def l1_odd(tbl: CharacterTable, j: int, digits: int = DEFAULT_DIGITS) -> mpmath.mpc:
    """L(1, chi_j) = pi/(2p) sum_m chi_j(m) cot(pi m / p), chi_j odd."""
    j %= tbl.p - 1
    if j % 2 == 0:
        raise ValueError("even character: formula yields zero")
    return _l1_odd(tbl.p, j, digits)


@lru_cache(maxsize=None)
def _l1_odd(p: int, j: int, digits: int) -> mpmath.mpc:
    tbl = _character_table(p)
    dps = digits + 10
    cots = _cot_floats(p, dps)
    with mpmath.workdps(dps):
        s = mpmath.fsum(tbl.chi(j, m, digits) * cots[m] for m in range(1, p))
        return mpmath.pi / (2 * p) * s


def gauss_sum(tbl: CharacterTable, j: int, digits: int = DEFAULT_DIGITS) -> mpmath.mpc:
    p = tbl.p
    with mpmath.workdps(digits + 10):
        return mpmath.fsum(tbl.chi(j, m, digits) * mpmath.expjpi(mpmath.mpf(2 * m) / p) for m in range(1, p))


def l1_even(tbl: CharacterTable, j: int, digits: int = DEFAULT_DIGITS) -> mpmath.mpc:
    """L(1, chi_j) for even nonprincipal chi_j via the log-sine formula.

    L(1, chi) = -(tau(chi)/p) sum_a conj(chi(a)) log(2 sin(pi a / p)).
    """
    j %= tbl.p - 1
    if j == 0:
        raise ValueError("principal character pole at s=1")
    if j % 2:
        raise ValueError("odd character: use l1_odd")
    return _l1_even(tbl.p, j, digits)


@lru_cache(maxsize=None)
def _l1_even(p: int, j: int, digits: int) -> mpmath.mpc:
    tbl = _character_table(p)
    with mpmath.workdps(digits + 10):
        tau = gauss_sum(tbl, j, digits)
        s = mpmath.fsum(
            mpmath.conj(tbl.chi(j, a, digits)) * mpmath.log(2 * mpmath.sin(mpmath.pi * a / p))
            for a in range(1, p)
        )
        return -tau / p * s


def l1(tbl: CharacterTable, j: int, digits: int = DEFAULT_DIGITS) -> mpmath.mpc:
    j %= tbl.p - 1
    return l1_odd(tbl, j, digits) if j % 2 else l1_even(tbl, j, digits)


def l1_direct(tbl: CharacterTable, j: int, terms: int = 10**6) -> complex:
    """Direct partial summation of sum chi_j(n)/n, averaged over one period.

    Averages the partial sums S(N), S(N+1), ..., S(N+p-1) so the periodic
    O(1/N) oscillation cancels to leading order.  Float precision only; an
    independent check for the finite formulas.
    """
    p = tbl.p
    vals = np.array([complex(tbl.chi(j, a, 20)) for a in range(p)])
    n = np.arange(1, terms + p + 1)
    a = vals[n % p] / n
    s = np.cumsum(a)
    return complex(s[terms - 1 : terms - 1 + p].mean())


@dataclass(frozen=True)
class OddPeriodicFunction:
    """An odd p-periodic rational function given by f(1), ..., f((p-1)/2)."""

    p: int
    values: tuple

    def __init__(self, p: int, values: Sequence):
        check_odd_prime(p)
        vals = tuple(Fraction(v) for v in values)
        if len(vals) != (p - 1) // 2:
            raise ValueError(f"need {(p - 1) // 2} values for p={p}, got {len(vals)}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "values", vals)

    def __call__(self, n: int) -> Fraction:
        r = n % self.p
        if r == 0:
            return Fraction(0)
        h = (self.p - 1) // 2
        return self.values[r - 1] if r <= h else -self.values[self.p - r - 1]

    def full(self) -> list[Fraction]:
        """f(0), f(1), ..., f(p-1)."""
        return [self(n) for n in range(self.p)]

    def average(self) -> Fraction:
        return sum(self.full(), Fraction(0)) / self.p

    @classmethod
    def indicator(cls, p: int, r: int) -> "OddPeriodicFunction":
        """The odd function equal to 1 at r and -1 at -r."""
        r %= p
        h = (p - 1) // 2
        vals = [0] * h
        if r <= h:
            vals[r - 1] = 1
        else:
            vals[p - r - 1] = -1
        return cls(p, vals)

    def to_json(self) -> list[str]:
        return [format_rational(v) for v in self.values]


@dataclass(frozen=True)
class DkResult:
    value: mpmath.mpf
    exact: CycloElem
    exact_zero: bool


def dk1_via_xk(f: OddPeriodicFunction, table: XkTable, digits: int = DEFAULT_DIGITS) -> DkResult:
    """D_k(1, f) = 2 (pi/2)^k sum_{r <= (p-1)/2} f(r) x_k(r; p).

    The combination sum f(r) z_k(r) is formed exactly first; its zero-ness is
    the exact vanishing certificate.
    """
    if f.p != table.p:
        raise ValueError("modulus mismatch")
    p, k = table.p, table.k
    comb = CycloElem.zero(p)
    for r, fr in enumerate(f.values, start=1):
        if fr:
            comb = comb + table[r] * fr
    with mpmath.workdps(digits + 10):
        x = embed(comb, digits) * _i_pow(-k)
        value = 2 * (mpmath.pi / 2) ** k * x.real
        return DkResult(+value, comb, comb.is_zero())


def character_coefficient(f: OddPeriodicFunction, tbl: CharacterTable, j: int, digits: int = DEFAULT_DIGITS):
    """c_chi(f) = sum_r f(r) conj(chi_j(r))."""
    with mpmath.workdps(digits + 10):
        return mpmath.fsum(
            mpmath.mpf(fr.numerator) / fr.denominator * mpmath.conj(tbl.chi(j, r, digits))
            for r, fr in enumerate(f.full())
            if fr
        )


def dk1_via_characters(f: OddPeriodicFunction, k: int, digits: int = DEFAULT_DIGITS) -> mpmath.mpc:
    """D_k(1, f) = (1/phi(p)) sum_{chi != chi_0} c_chi(f) L(1, chi)^k."""
    p = f.p
    tbl = CharacterTable.build(p)
    floor = mpmath.mpf(10) ** (-(digits - 5))
    with mpmath.workdps(digits + 10):
        total = mpmath.mpc(0)
        for j in range(1, p - 1):
            c = character_coefficient(f, tbl, j, digits)
            if j % 2 == 0:
                if abs(c) > floor:
                    raise ArithmeticError(f"c_chi(f) nonzero for even chi_{j}; f is not odd")
                continue
            total += c * l1_odd(tbl, j, digits) ** k
        return total / (p - 1)


@dataclass
class SeriesResult:
    estimate: float
    tolerance: float
    X: int
    raw: float
    history: list = field(default_factory=list)


class SlowConvergence(RuntimeError):
    def __init__(self, msg: str, partial: SeriesResult):
        super().__init__(msg)
        self.partial = partial


@lru_cache(maxsize=8)
def _dk_cached(k: int, N: int) -> np.ndarray:
    from chowla.analytics import dk_sieve

    return dk_sieve(k, N).values


@lru_cache(maxsize=64)
def _class_sums(p: int, k: int, X: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Per residue class r mod p: sum over n <= X, n = r, of d_k(n)/n, raw and
    with the Riesz weight (1 - n/X)^order."""
    d = _dk_cached(k, X)
    n = np.arange(1, X + 1, dtype=np.float64)
    terms = d[1:].astype(np.float64) / n
    cls = np.arange(1, X + 1) % p
    raw = np.bincount(cls, weights=terms, minlength=p)
    riesz = np.bincount(cls, weights=terms * (1.0 - n / X) ** order, minlength=p)
    return raw, riesz


def _series_estimates(coef: np.ndarray, p: int, k: int, X: int, order: int) -> tuple[float, float]:
    """(raw partial sum, Riesz mean of the given order) of sum d_k(n) f(n) / n, n <= X.

    f is p-periodic, so both are combinations of the per-class sums.
    """
    raw, riesz = _class_sums(p, k, X, order)
    return math.fsum(coef * raw), math.fsum(coef * riesz)


def dk1_series(
    f: OddPeriodicFunction,
    k: int,
    X: int = 10**6,
    tol: float = 1e-3,
    x_max: int = 10**8,
    order: int | None = None,
) -> SeriesResult:
    """sum_{n <= X} d_k(n) f(n) / n with adaptive doubling.

    Partial sums of a mean-zero series oscillate, so each estimate is the
    Riesz mean of order ``order`` (default k + 1) of the partial sums, which
    has the same limit.  X doubles until two successive estimates agree to
    ``tol``; the reported tolerance is that final difference.
    """
    if X < 10**3:
        raise ValueError("X must be >= 1000")
    p = f.p
    order = k + 1 if order is None else order
    coef = np.array([float(v) for v in f.full()])
    history = []
    raw, est = _series_estimates(coef, p, k, X, order)
    history.append((X, est))
    while True:
        X2 = 2 * X
        if X2 > x_max:
            res = SeriesResult(est, float("inf") if len(history) < 2 else abs(history[-1][1] - history[-2][1]), X, raw, history)
            raise SlowConvergence("slow convergence", res)
        raw2, est2 = _series_estimates(coef, p, k, X2, order)
        history.append((X2, est2))
        diff = abs(est2 - est)
        X, raw, est = X2, raw2, est2
        if diff < tol:
            return SeriesResult(est, diff, X, raw, history)


def evaluation_report(route: str, p: int, k: int, f: OddPeriodicFunction, value, exact_zero, tolerance) -> dict:
    value = mpmath.mpc(value)
    return {
        "route": route,
        "p": p,
        "k": k,
        "f": f.to_json(),
        "value_re": mpmath.nstr(value.real, 30),
        "value_im": mpmath.nstr(value.imag, 30),
        "exact_zero": exact_zero,
        "tolerance": tolerance,
    }


def l_values(p: int, digits: int = DEFAULT_DIGITS) -> list[tuple[int, mpmath.mpc]]:
    """L(1, chi_j) for every nonprincipal j."""
    tbl = CharacterTable.build(p)
    return [(j, l1(tbl, j, digits)) for j in range(1, p - 1)]


def default_table(p: int, k: int) -> XkTable:
    return xk_table(p, k)
