"""The space V_0 of odd p-periodic f with D_k(1,f) = 0.

    python3 demos/vanishing_space.py

Computes the kernel for a few (p,k), compares its dimension with the
lower bound, and checks one basis vector through all three evaluation routes.
"""

from chowla.cotsum import xk_table
from chowla.lseries import OddPeriodicFunction, dk1_series, dk1_via_characters, dk1_via_xk
from chowla.vanish import classify, dim_bound, subset_rank, v0_kernel

for p, k in ((5, 2), (7, 2), (13, 2), (13, 4), (17, 4), (29, 2)):
    kb = v0_kernel(p, k)
    print(f"p={p:2d} k={k}  dim={kb.dim} bound={dim_bound(p, k)}  {classify(p, k)}")

kb = v0_kernel(13, 2)
print("\np=13 k=2 integer basis (f(1..6)):")
for v in kb.integer_basis():
    print("  ", v)

f = OddPeriodicFunction(13, kb.integer_basis()[0])
exact = dk1_via_xk(f, xk_table(13, 2))
print("\nexact route is zero:", exact.exact_zero)
print("character route:", dk1_via_characters(f, 2, digits=30))
print("series route   :", dk1_series(f, 2).estimate)

for which in ("QR", "QNR"):
    s = subset_rank(13, 4, which)
    print(f"rank of z_4(r) over the {which} half: {s.rank}")
