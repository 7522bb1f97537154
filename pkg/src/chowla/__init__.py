"""Exact computations around the vanishing of D_k(1, f) for odd p-periodic f."""

from chowla.exactalg import CycloElem, GaloisMap, cyclo_inv, cyclo_mul, embed, galois_apply, trace_Q

__version__ = "0.1.0"

__all__ = ["CycloElem", "GaloisMap", "cyclo_inv", "cyclo_mul", "embed", "galois_apply", "trace_Q"]
