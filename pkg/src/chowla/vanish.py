"""The space V_0 of odd p-periodic rational f with D_k(1, f) = 0.

By the x_k representation of D_k(1, f), f lies in V_0 iff the element
sum_{r <= (p-1)/2} f(r) z_k(r) of Q(xi_p) vanishes.  Reading that element
coordinate-wise in the power basis gives p - 1 rational equations in the
(p-1)/2 unknowns f(1), ..., f((p-1)/2); every Galois-conjugate equation is
a Q-linear image of these, so this single system is complete.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from chowla.cotsum import legendre, v2, xk_table
from chowla.exactalg import CycloElem, check_odd_prime, format_rational


class TheoremViolation(AssertionError):
    pass


# -- exact rational matrices ----------------------------------------------------

@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples of Fraction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        ent = tuple(tuple(Fraction(x) for x in row) for row in rows)
        ncols = len(ent[0]) if ent else 0
        if any(len(r) != ncols for r in ent):
            raise ValueError("ragged rows")
        return cls(len(ent), ncols, ent)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else ())

    def integer_rows(self) -> list[list[int]]:
        """Each row scaled by the lcm of its denominators."""
        out = []
        for row in self.entries:
            den = 1
            for x in row:
                den = den * x.denominator // math.gcd(den, x.denominator)
            out.append([int(x * den) for x in row])
        return out

    def rank(self, pivot: str = "first") -> int:
        return bareiss_rank(self.integer_rows(), pivot=pivot)

    def nullspace(self, pivot: str = "first") -> list[tuple[Fraction, ...]]:
        return nullspace(self, pivot=pivot)


def _choose_pivot(m: list[list], start: int, col: int, pivot: str) -> int | None:
    cands = [i for i in range(start, len(m)) if m[i][col] != 0]
    if not cands:
        return None
    if pivot == "first":
        return cands[0]
    if pivot == "smallest":
        return min(cands, key=lambda i: (abs(m[i][col]), i))
    raise ValueError(f"unknown pivot strategy {pivot!r}")


def bareiss_rank(m: list[list[int]], pivot: str = "first") -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in m]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = _choose_pivot(m, r, c, pivot)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        for i in range(r + 1, nrows):
            a = m[i][c]
            row_i, row_r = m[i], m[r]
            for j in range(c, ncols):
                row_i[j] = (pv * row_i[j] - a * row_r[j]) // prev
        prev = pv
        r += 1
    return r


def rref(m: RationalMatrix, pivot: str = "first") -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [list(r) for r in m.entries]
    nrows, ncols = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = _choose_pivot(a, r, c, pivot)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def nullspace(m: RationalMatrix, pivot: str = "first") -> list[tuple[Fraction, ...]]:
    """Basis of {x : m x = 0}, itself returned in reduced echelon form."""
    red, pivots = rref(m, pivot)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * m.cols
        v[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    if not basis:
        return []
    echelon, _ = rref(RationalMatrix.from_rows(basis))
    return [tuple(v) for v in echelon]


def clear_denominators(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Smallest integer multiple of v with positive leading entry."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


# -- ranks of cyclotomic values ---------------------------------------------------

def coordinate_matrix(values: Sequence[CycloElem]) -> RationalMatrix:
    """Rows are the power-basis coordinates of each value."""
    if not values:
        return RationalMatrix(0, 0, ())
    p = values[0].p
    if any(v.p != p for v in values):
        raise ValueError("conductor mismatch")
    return RationalMatrix.from_rows([v.coeffs for v in values])


def rank_over_Q(values: Sequence[CycloElem], pivot: str = "first") -> int:
    """Dimension of the Q-span of the given elements of Q(xi_p)."""
    if not values:
        return 0
    return coordinate_matrix(values).rank(pivot)


# -- V_0 -----------------------------------------------------------------------

@dataclass(frozen=True)
class KernelBasis:
    p: int
    k: int
    dimV: int
    basis: tuple  # tuple of tuples of Fraction, reduced echelon form

    @property
    def dim(self) -> int:
        return len(self.basis)

    def integer_basis(self) -> list[tuple[int, ...]]:
        return [clear_denominators(v) for v in self.basis]

    def contains(self, f: Sequence) -> bool:
        """Exact membership of the vector (f(1), ..., f((p-1)/2)) in the span."""
        f = [Fraction(x) for x in f]
        if len(f) != self.dimV:
            raise ValueError("wrong length")
        if not self.basis:
            return not any(f)
        rows = [list(v) for v in self.basis]
        return RationalMatrix.from_rows(rows + [f]).rank() == len(rows)


def system_matrix(p: int, k: int) -> RationalMatrix:
    """(p-1) x (p-1)/2 matrix whose column r holds the coordinates of z_k(r)."""
    table = xk_table(p, k)
    return coordinate_matrix(table.half).transpose()


def v0_kernel(p: int, k: int, pivot: str = "first") -> KernelBasis:
    check_odd_prime(p)
    if k < 1:
        raise ValueError("k must be >= 1")
    basis = nullspace(system_matrix(p, k), pivot)
    return KernelBasis(p, k, (p - 1) // 2, tuple(basis))


def kernel_json(kb: KernelBasis, bound: int | None = None, case: str | None = None) -> dict:
    bound = dim_bound(kb.p, kb.k) if bound is None else bound
    case = classify(kb.p, kb.k) if case is None else case
    return {
        "p": kb.p,
        "k": kb.k,
        "dim": kb.dim,
        "bound": bound,
        "case": case,
        "basis": [[format_rational(x) for x in v] for v in kb.integer_basis()],
    }


def dim_bound(p: int, k: int) -> int:
    """Lower bound for dim V_0 in terms of r = gcd(k, p-1) and 2-adic valuations."""
    r = math.gcd(k, p - 1)
    half = Fraction(p - 1, 2)
    if v2(p - 1) > v2(k):
        b = half * Fraction(r - 1, r)
    else:
        b = half * Fraction(r - 2, r)
    if b.denominator != 1:
        raise ArithmeticError("formula inconsistency")
    return int(b)


EQUALITY_PROVEN = "EQUALITY-PROVEN"
BOUND_ONLY = "BOUND-ONLY"


def classify(p: int, k: int) -> str:
    r = math.gcd(k, p - 1)
    if r <= 2 or (r == 4 and p % 8 == 5):
        return EQUALITY_PROVEN
    return BOUND_ONLY


@dataclass(frozen=True)
class DimReport:
    p: int
    k: int
    dim: int
    bound: int
    case: str
    full_rank: bool

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "dim": self.dim, "bound": self.bound, "case": self.case}


def verify_dim(p: int, k: int) -> DimReport:
    """Compare the computed dim V_0 with the lower bound; raise if violated."""
    kb = v0_kernel(p, k)
    bound = dim_bound(p, k)
    case = classify(p, k)
    if kb.dim < bound:
        raise TheoremViolation(f"theorem violation: dim {kb.dim} < bound {bound} at p={p}, k={k}")
    if case == EQUALITY_PROVEN and kb.dim != bound:
        raise TheoremViolation(f"theorem violation: dim {kb.dim} != bound {bound} at p={p}, k={k}")
    return DimReport(p, k, kb.dim, bound, case, kb.dim == 0)


def independence_expected(p: int, k: int) -> bool:
    """Whether x_k(1), ..., x_k((p-1)/2) are predicted independent over Q."""
    r = math.gcd(k, p - 1)
    return r == 1 or (r == 2 and p % 4 == 3)


def subset_hypothesis(p: int, k: int) -> bool:
    r = math.gcd(k, p - 1)
    return (r == 2 and p % 4 == 1) or (r == 4 and p % 8 == 5)


def residue_subset(p: int, which: str) -> list[int]:
    """r <= (p-1)/2 with Legendre symbol +1 ("QR") or -1 ("QNR")."""
    sign = {"QR": 1, "QNR": -1}[which]
    return [r for r in range(1, (p - 1) // 2 + 1) if legendre(r, p) == sign]


@dataclass(frozen=True)
class SubsetRank:
    p: int
    k: int
    subset: str
    residues: tuple
    rank: int
    classification: str  # "THEOREM" inside the hypothesis, "OBSERVED-ONLY" outside

    @property
    def full(self) -> bool:
        return self.rank == len(self.residues)


def subset_rank(p: int, k: int, subset: str) -> SubsetRank:
    residues = residue_subset(p, subset)
    table = xk_table(p, k)
    rk = rank_over_Q([table[r] for r in residues])
    cls = "THEOREM" if subset_hypothesis(p, k) else "OBSERVED-ONLY"
    return SubsetRank(p, k, subset, tuple(residues), rk, cls)


def qr_support_check(p: int, k: int) -> bool:
    """True iff no nonzero f in V_0 is supported only on QRs or only on QNRs.

    Works from the kernel basis: a kernel element c . B supported on S must
    vanish on the complement, so such elements correspond to the null space
    of B restricted to the complementary columns.
    """
    kb = v0_kernel(p, k)
    if kb.dim == 0:
        return True
    for which, other in (("QR", "QNR"), ("QNR", "QR")):
        off = [r - 1 for r in residue_subset(p, other)]
        # columns of the restricted system are the kernel basis vectors
        restricted = RationalMatrix.from_rows([[v[c] for v in kb.basis] for c in off]) if off else None
        nullity = kb.dim - (restricted.rank() if restricted is not None else 0)
        if nullity > 0:
            return False
    return True


def full_rank(p: int, k: int) -> bool:
    table = xk_table(p, k)
    return rank_over_Q(table.half) == (p - 1) // 2
