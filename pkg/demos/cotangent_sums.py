"""Exact cotangent-product sums x_k(r;p) and their Galois action.

    python3 demos/cotangent_sums.py [p] [k]

Prints z_k(r) = i^k x_k(r;p) in the power basis of Q(xi_p), the numeric
values, one equivariance check and the traces down to Q.
"""

import sys

from chowla.cotsum import distinct_up_to_sign, equivariance_holds, trace_xk, xk_float, xk_table
from chowla.exactalg import format_rational

p = int(sys.argv[1]) if len(sys.argv) > 1 else 7
k = int(sys.argv[2]) if len(sys.argv) > 2 else 2

table = xk_table(p, k)
print(f"p={p} k={k}, values x_k(r;p) for r=1..{(p - 1) // 2}")
for r in range(1, (p - 1) // 2 + 1):
    z = table[r]
    coeffs = ", ".join(format_rational(c) for c in z.coeffs)
    print(f"  r={r}  x={float(xk_float(table, r)):+.12f}   z=[{coeffs}]")

# sigma_c(z_k(r)) = z_k(c^k r); c = 2 is enough to see it move
print("sigma_2 equivariance on every r:", all(equivariance_holds(table, 2, r) for r in range(1, p)))
print("values distinct up to sign:", distinct_up_to_sign(table))
print("traces to Q:", [format_rational(trace_xk(table, r)) for r in range(1, p)])
