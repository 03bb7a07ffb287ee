"""Exact local epsilon factors, Gauss sums and p-adic Gamma values.

Everything in this package is computed by finite enumeration over residue
rings together with exact cyclotomic arithmetic, so identities are checked
with zero tolerance wherever the objects are algebraic.
"""

__version__ = "0.1.0"
