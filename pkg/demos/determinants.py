"""Galois matrices of x_k values and their closed-form determinants.

    python3 demos/determinants.py

The (7,2) determinant is an exact rational.  At p = 13 the matrices live in
Q(xi_13) and the comparison with the L-value products is numeric.
"""

from chowla.exactalg import format_rational
from chowla.structmat import galois_det, galois_matrix, relative_class_number, verify_fcd

gm = galois_matrix(7, 2, 1)
print(f"(7,2): variant {gm.variant}, size {gm.size}, shape {gm.kind}")
print("det =", format_rational(galois_det(gm).det_x_exact), " h_7^- =", relative_class_number(7))

for r in range(1, 7):
    rep = verify_fcd(7, 2, r, "fcd1b")
    print(f"  r={r} det={format_rational(rep.det_exact)} closed form matches: {rep.passed}")

for p, k, which in ((13, 2, "fcd2"), (13, 4, "fcd2b")):
    for corrected in (False, True):
        rep = verify_fcd(p, k, 1, which, corrected=corrected)
        tag = "corrected" if corrected else "as printed"
        print(f"{which} ({p},{k}) {tag:10s} rel dev {float(rep.rel_dev):.2e} pass={rep.passed}")
