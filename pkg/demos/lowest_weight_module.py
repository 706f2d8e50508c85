"""Build a finite dimensional module from the unit, factor its operator
matrix and read off the quantum group generators.
"""
from fractions import Fraction

from qorbit.chevalley import (
    admissible_sigma,
    commutator_factor,
    extract_generators,
    gauss_decompose,
    lowest_weight_checks,
    solve_ansatz,
    verify_uh_relations,
    weyl_dimension,
)
from qorbit.module_action import ModuleNotClosedError, build_module, verify_module_relations
from qorbit.series_data import build_cell, build_series


def show(series, rank, r, sigma):
    spec = build_series(series, rank)
    cell = build_cell(spec, Fraction(r))
    sigma = Fraction(sigma)
    rep = build_module(spec, cell, sigma)
    lam = admissible_sigma(spec, cell).lowest_weight(sigma)
    oracle = weyl_dimension(spec, [-x for x in lam])
    print(f"\n{spec.name} r={r} sigma={sigma}: dim {rep.dim} (Weyl formula: {oracle})")
    print("  basis:", [b.to_string(rep.table.qb.gens) for b in rep.basis])
    print("  M_jj . 1:", [str(x) for x in rep.unit_diagonal()])
    print("  operator relations:", verify_module_relations(rep).to_json())

    chev = extract_generators(gauss_decompose(rep))
    lw = lowest_weight_checks(chev, sigma)
    print("  q^H on the unit:", [str(x) for x in lw.cartan_on_unit], "kernel dim", lw.joint_kernel_dim)
    uh = verify_uh_relations(chev)
    print("  U_q relations:", "all pass" if uh.passed else uh.failures())
    print("  [X+,X-] = c (K - K^-1) with c =", [str(commutator_factor(chev, i)) for i in range(1, rank + 1)])


show("C", 1, "1/2", 1)
show("C", 1, "1/2", 2)
show("B", 2, "2", 1)
show("D", 2, "3/2", 1)

# sigma off the lattice: the cyclic span keeps growing
spec = build_series("C", 1)
try:
    build_module(spec, build_cell(spec, Fraction(1, 2)), Fraction(5, 4))
except ModuleNotClosedError as exc:
    print("\nC1 sigma=5/4:", exc)

sol = solve_ansatz(spec, build_cell(spec, Fraction(1, 2)))
print("\nscalar ansatz for C1: mu =", sol.mu, " consistent:", sol.consistent)
