"""Truncated quotients of the antiholomorphic coordinate algebra.

Prints graded dimensions and the standard monomials of low degree, then
checks a couple of matrix identities inside the quotient.
"""
from fractions import Fraction

from qorbit.coordinate_algebra import build_quotient, verify_lemma
from qorbit.series_data import build_cell, build_series

for series, rank, r in [("C", 1, "1/2"), ("C", 2, "1/2"), ("D", 2, "3/2"), ("B", 2, "2")]:
    spec = build_series(series, rank)
    cell = build_cell(spec, Fraction(r))
    qb = build_quotient(spec, cell, 3)
    print(f"{spec.name} r={r}: {len(qb.gens)} generators, graded dims {qb.graded_dims()}")
    for w in qb.standard_monomials(2)[:4]:
        print("   ", qb.gens.word_str(w))

spec = build_series("C", 2)
cell = build_cell(spec, Fraction(1, 2))
for lid in ("3.4", "3.24", "5.1"):
    chk = verify_lemma(lid, spec, cell)
    print(f"lemma {lid} on {spec.name}: {chk.status}")
