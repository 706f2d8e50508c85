"""The seven acceptance criteria, one test each.

Every test records a ``criterion N: PASS|FAIL ...`` line that is printed in
the terminal summary (and immediately with ``-s``).
"""
import random
import time
from fractions import Fraction

import pytest
from conftest import ACCEPTANCE_LINES, ALL_SPECS, MODULE_INSTANCES, instance_id, module, spec_cell

from qorbit.chevalley import (
    NonGenericError,
    d_series_null_block,
    extract_generators,
    gauss_decompose,
    lowest_weight_checks,
    representation_report,
    solve_ansatz,
    verify_uh_relations,
    _BiFrac,
)
from qorbit.coordinate_algebra import build_quotient, relation_entries, verify_lemma
from qorbit.identity_catalog import DEFAULT_SEED, random_matrix, run_catalog
from qorbit.module_action import ModuleNotClosedError, build_module, parse_sigma
from qorbit.scalars import q_power
from qorbit.series_data import build_K, build_P, build_R, build_series, ymap


def record(n: int, failures: list, t0: float, detail: str = ""):
    status = "PASS" if not failures else "FAIL"
    extra = f" {detail}" if detail else ""
    if failures:
        extra += f" failures={failures[:5]}{'...' if len(failures) > 5 else ''}"
    line = f"criterion {n}: {status} ({time.time() - t0:.1f}s){extra}"
    ACCEPTANCE_LINES[n] = line
    print(line)
    assert not failures, line


def cells(series, rank):
    spec = build_series(series, rank)
    return [(spec, c) for c in (spec_cell(series, rank, r)[1] for r in spec.valid_r())]


SMALL = [(s, l) for s, l in ALL_SPECS if build_series(s, l).N <= 5]


def test_criterion_1_identity_catalog():
    t0 = time.time()
    failures, n = [], 0
    for series, rank in ALL_SPECS:
        spec = build_series(series, rank)
        for _, cell in cells(series, rank):
            for chk in run_catalog(spec, cell, DEFAULT_SEED):
                n += 1
                if not chk.passed:
                    failures.append(f"{spec.name} r={cell.r} {chk.id}")
    record(1, failures, t0, f"{n} checks over {len(ALL_SPECS)} series")


def test_criterion_2_ymap():
    t0 = time.time()
    failures = []
    for series, rank in ALL_SPECS:
        spec = build_series(series, rank)
        K, P, R = build_K(spec), build_P(spec), build_R(spec)
        K21, R21 = P * K * P, P * R * P
        rng = random.Random(DEFAULT_SEED)
        for k in range(20):
            X = random_matrix(rng, 1, spec.N)
            if k % 2:
                X = X + X.transpose()  # a Hermitian sample
            Y = ymap(spec, X)
            X2, Y2 = X.embed(2, (2,)), Y.embed(2, (2,))
            if not (K * X2 * P * R - K * Y2).is_zero():
                failures.append(f"{spec.name}#{k} defining")
            if not (Y2 * K21 - R21 * P * X2 * K21).is_zero():
                failures.append(f"{spec.name}#{k} mirror")
            if k % 2 and Y != Y.transpose():
                failures.append(f"{spec.name}#{k} hermitian")
    record(2, failures, t0, "20 samples per series")


BASE_LEMMAS = ["3.2", "3.4", "3.23", "3.24", "3.25", "3.26", "3.27", "5.1"]
SUB_LEMMAS = ["5.2", "5.8", "5.9a", "5.9b", "5.10a", "5.10b", "5.11", "5.12a", "5.12b", "5.12c", "5.13", "5.15a", "5.15b", "5.15c"]


def test_criterion_3_coordinate_algebra():
    t0 = time.time()
    failures, n = [], 0
    for series, rank in SMALL:
        for spec, cell in cells(series, rank):
            tag = f"{spec.name} r={cell.r}"
            qb = build_quotient(spec, cell, 4)
            if not qb.is_standard(()):
                failures.append(f"{tag} unit")
            if any(not v.constant().is_zero() for v in relation_entries(spec, cell)):
                failures.append(f"{tag} constant")
            ids = BASE_LEMMAS + (SUB_LEMMAS if spec.N <= 4 else [])
            for lid in ids:
                n += 1
                chk = verify_lemma(lid, spec, cell)
                if chk.status != "pass":
                    failures.append(f"{tag} {lid}")
    record(3, failures, t0, f"{n} lemma checks")


def test_criterion_4_module_suite():
    t0 = time.time()
    failures = []
    for inst in MODULE_INSTANCES:
        rep = module(*inst)
        out = representation_report(rep)
        for key in ("module:2.32", "module:2.33", "module:2.34", "module:2.35", "module:unit_diagonal", "weyl:dimension"):
            if out["checks"][key] != "pass":
                failures.append(f"{instance_id(inst)} {key}")
    record(4, failures, t0, f"{len(MODULE_INSTANCES)} modules")


def test_criterion_5_chevalley_suite():
    t0 = time.time()
    failures = []
    for inst in MODULE_INSTANCES:
        tag = instance_id(inst)
        rep = module(*inst)
        f = gauss_decompose(rep)
        chev = extract_generators(f)
        lw = lowest_weight_checks(chev, Fraction(inst[3]))
        if not lw.lowering_kills_unit:
            failures.append(f"{tag} lowering")
        if lw.cartan_on_unit != lw.expected_on_unit:
            failures.append(f"{tag} cartan")
        if lw.joint_kernel_dim != 1:
            failures.append(f"{tag} kernel={lw.joint_kernel_dim}")
        uh = verify_uh_relations(chev)
        failures += [f"{tag} {k}" for k in uh.failures()]
        if rep.spec.series == "D" and d_series_null_block(f):
            failures.append(f"{tag} alpha(-1/2,1/2)")
    record(5, failures, t0)


def test_criterion_6_ansatz():
    t0 = time.time()
    failures, n = [], 0
    for series, rank in ALL_SPECS:
        spec = build_series(series, rank)
        if spec.N > 6:
            continue
        for _, cell in cells(series, rank):
            n += 1
            sol = solve_ansatz(spec, cell)
            if not sol.mu_matches:
                failures.append(f"{spec.name} r={cell.r} mu")
            if not sol.trace_identity:
                failures.append(f"{spec.name} r={cell.r} trace")
            x0 = _BiFrac.from_ratfunc(q_power(spec.N - 2 * cell.r + 1))
            if not (sol.xi0 == x0 and sol.mu == (1 - x0) / (_BiFrac.xi() - x0)):
                failures.append(f"{spec.name} r={cell.r} closed form")
    record(6, failures, t0, f"{n} cells")


def test_criterion_7_negative_paths():
    t0 = time.time()
    failures = []
    try:
        parse_sigma(Fraction(1, 3))
        failures.append("sigma=1/3 accepted")
    except ValueError:
        pass
    for s, l, r, sg in [("C", 1, "1/2", "5/4"), ("C", 1, "1/2", "1/2"), ("B", 1, "1", "1/4"), ("D", 2, "1/2", "1/4")]:
        try:
            build_module(*spec_cell(s, l, r), Fraction(sg))
            failures.append(f"{s}{l} sigma={sg} closed")
        except ModuleNotClosedError as exc:
            if "module did not close" not in str(exc):
                failures.append(f"{s}{l} sigma={sg} message")
    # xi_+ = xi_0, and xi_- = xi_0 (zeta vanishes)
    for xi in (q_power(2), q_power(-2)):
        try:
            solve_ansatz(*spec_cell("C", 1, "1/2"), xi)
            failures.append(f"ansatz at {xi} solved")
        except NonGenericError as exc:
            if "non-generic parameters" not in str(exc):
                failures.append("ansatz message")
    record(7, failures, t0)


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(pytest.main([__file__, "-q"]))
