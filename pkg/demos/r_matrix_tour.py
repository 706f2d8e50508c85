"""A short walk through the R-matrix data of one series.

Run with ``python3 demos/r_matrix_tour.py [series] [rank]``.
"""
import sys

from qorbit.identity_catalog import run_catalog
from qorbit.series_data import build_cell, build_R, build_series, q_rho2

series = sys.argv[1] if len(sys.argv) > 1 else "C"
rank = int(sys.argv[2]) if len(sys.argv) > 2 else 2

spec = build_series(series, rank)
print(spec.name, "N =", spec.N, "eps =", spec.eps)
print("labels:", [str(x) for x in spec.labels])
print("rho:   ", [str(x) for x in spec.rho])

R = build_R(spec)
print(f"R has {R.nnz()} nonzero entries out of {spec.N ** 4}")

# the diagonal of q^(2 rho) is what the quantum trace uses
print("q^(2 rho):", [str(q_rho2(spec).entry((i,), (i,))) for i in range(spec.N)])

for r in spec.valid_r():
    cell = build_cell(spec, r)
    checks = run_catalog(spec, cell)
    bad = [c.id for c in checks if not c.passed]
    print(f"r = {r}: Z block {cell.block_dims[0]}x{cell.block_dims[1]}, {len(checks)} identities, failing: {bad or 'none'}")
