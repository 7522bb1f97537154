"""Truncated divisor sums over congruence classes, and moments of x_k.

    python3 demos/series_and_moments.py
"""

import math

from chowla.analytics import moment_exact, moment_report, truncated_congruence_sum

res = truncated_congruence_sum(5, 2, 1, X=10**6)
target = 4 * math.pi**2 / (25 * math.sqrt(5))
print(f"sum d(|n|)/n, n = 1 mod 5: {res.estimate:.8f} (X={res.X})  target {target:.8f}")

for p in (11, 29, 101):
    print(f"p={p:3d} sum_r x_1(r)^2 = {moment_exact(p, 1, 2)}  (-> 1/3)")

for p in (29, 101):
    rep = moment_report(p, 2, 2)
    print(f"p={p:3d} sum_r x_2(r)^2 = {rep.lhs:.5f}  limit {rep.rhs_doubled:.5f}  dev {rep.deviation:.4f} bound {rep.bound:.4f}")
print("odd moment at (13,2,3):", moment_exact(13, 2, 3))
