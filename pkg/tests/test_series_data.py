import random
from fractions import Fraction

import pytest

from qorbit.coordinate_algebra import AlgebraContext, NCPoly
from qorbit.identity_catalog import DEFAULT_SEED, random_matrix
from qorbit.scalars import ONE, q_power, qnum
from qorbit.series_data import (
    build_C,
    build_E,
    build_K,
    build_P,
    build_Q,
    build_R,
    build_cell,
    build_series,
    q_rho2,
    vcoeff_pattern,
    vmap,
    ymap,
)
from qorbit.tensor_space import LegError, LegMatrix

from conftest import ALL_SPECS

H = Fraction(1, 2)
q = q_power(1)


def specs(maxN=8):
    return [s for s in (build_series(a, l) for a, l in ALL_SPECS) if s.N <= maxN]


def cells(maxN=8):
    return [(s, build_cell(s, r)) for s in specs(maxN) for r in s.valid_r()]


def test_series_examples():
    b1 = build_series("B", 1)
    assert (b1.N, b1.eps, b1.labels, b1.rho) == (3, 1, (-1, 0, 1), (H, 0, -H))
    c1 = build_series("C", 1)
    assert (c1.N, c1.eps, c1.rho, c1.veps) == (2, -1, (1, -1), (-1, 1))
    d2 = build_series("D", 2)
    assert (d2.N, d2.eps, d2.rho) == (4, 1, (1, 0, 0, -1))
    assert b1.summary() == {"series": "B", "l": 1, "N": 3, "epsilon": 1, "labels": [-2, 0, 2], "rho": [1, 0, -1]}


@pytest.mark.parametrize("bad", [("A", 1), ("B", 0), ("C", -2)])
def test_series_rejects(bad):
    with pytest.raises(ValueError):
        build_series(*bad)


@pytest.mark.parametrize("spec", specs(), ids=str)
def test_label_symmetry_and_rho(spec):
    assert spec.labels == tuple(-x for x in reversed(spec.labels))
    for a, j in enumerate(spec.labels):
        assert spec.rho[spec.pos(-j)] == -spec.rho[a]


def test_R_entries():
    for spec in specs(5):
        R = build_R(spec)
        for a, j in enumerate(spec.labels):
            want = ONE if j == 0 else q
            assert R.entry((a, a), (a, a)) == want
        for a, j in enumerate(spec.labels):
            for b, k in enumerate(spec.labels):
                if j > k and j != -k:
                    assert R.entry((a, b), (b, a)) == q - q.inverse()


def test_R_lower_triangular_lexicographic():
    for spec in specs(5):
        R = build_R(spec)
        assert all(j <= i for i, r in R.rows.items() for j in r)


def test_C_matrix_C1():
    spec = build_series("C", 1)
    C = build_C(spec)
    assert C == LegMatrix.from_entries(1, 2, {((0,), (1,)): -q.inverse(), ((1,), (0,)): q})
    assert C * C.scale(spec.eps) == LegMatrix.identity(1, 2)


@pytest.mark.parametrize("spec", specs(), ids=str)
def test_C_and_q2rho(spec):
    C = build_C(spec)
    assert C.transpose() * C == q_rho2(spec)
    assert C.inverse() == C.scale(spec.eps)
    assert q_rho2(spec).trace() == qnum(spec.N - spec.eps) + spec.eps


def test_trace_B1():
    assert q_rho2(build_series("B", 1)).trace() == q + 1 + q.inverse()


@pytest.mark.parametrize("spec", specs(), ids=str)
def test_E_edges(spec):
    N = spec.N
    assert build_E(spec, -Fraction(N + 1, 2)).is_zero()
    assert build_E(spec, Fraction(N - 1, 2)) == LegMatrix.identity(1, N)


@pytest.mark.parametrize("spec,cell", cells(), ids=lambda x: str(x))
def test_cell_projectors(spec, cell):
    Em, E0, Ep = cell.E_minus, cell.E_zero, cell.E_plus
    assert Em + E0 + Ep == LegMatrix.identity(1, spec.N)
    for E in (Em, E0, Ep):
        assert E * E == E
    assert build_E(spec, -cell.r) * build_E(spec, cell.r - 1) == build_E(spec, -cell.r)
    a, b = cell.block_dims
    assert (a, b) == ((spec.N - 2 * cell.r + 1) / 2, (spec.N + 2 * cell.r - 1) / 2)


@pytest.mark.parametrize("spec,cell", cells(5), ids=lambda x: str(x))
def test_Q_block_form(spec, cell):
    R = build_R(spec)
    Q = build_Q(spec, cell, R)
    blocks = LegMatrix.zero(2, spec.N)
    for E in (cell.E_minus, cell.E_zero, cell.E_plus):
        E2 = E.embed(2, (2,))
        blocks = blocks + E2 * R * E2
    assert Q == blocks
    Em1 = cell.E_minus.embed(2, (1,))
    assert Em1 * R * Q.inverse() == Em1
    # Q at q^-1 is the inverse of Q
    assert Q.map(lambda v: v.invert_q()) == Q.inverse()


def _mirror_pair(spec, X, Y):
    K, P, R = build_K(spec), build_P(spec), build_R(spec)
    K21 = P * K * P
    R21 = P * R * P
    X2, Y2 = X.embed(2, (2,)), Y.embed(2, (2,))
    first = K * X2 * P * R - K * Y2
    mirror = Y2 * K21 - R21 * P * X2 * K21
    return first, mirror


@pytest.mark.parametrize("spec", specs(), ids=str)
def test_ymap_identity_is_scalar(spec):
    Y = ymap(spec, LegMatrix.identity(1, spec.N))
    c = Y.entry((0,), (0,))
    assert c.is_monomial()
    assert Y == LegMatrix.identity(1, spec.N, c)
    assert ymap(spec, LegMatrix.zero(1, spec.N)).is_zero()
    # with X = I the defining relation reads K R P = c K
    assert c == spec.eps * q_power(-spec.N + spec.eps)


@pytest.mark.parametrize("spec", specs(), ids=str)
def test_ymap_random_relations(spec):
    rng = random.Random(DEFAULT_SEED)
    for _ in range(3):
        X = random_matrix(rng, 1, spec.N)
        first, mirror = _mirror_pair(spec, X, ymap(spec, X))
        assert first.is_zero() and mirror.is_zero()


def test_ymap_shape_check():
    with pytest.raises(LegError):
        ymap(build_series("B", 1), LegMatrix.identity(2, 3))


def _derived_V(spec, cell):
    """``Y`` from ``Y_1 K_12 = p R P X_1 K_12`` with ``X = E^- + Z`` over the free algebra."""
    ctx = AlgebraContext(spec, cell)
    gens = ctx.gens
    ent = {((spec.pos(g.col),), (spec.pos(g.row),)): NCPoly.gen(i) for i, g in enumerate(gens.gens)}
    X = cell.E_minus.map(NCPoly.const) + LegMatrix.from_entries(1, spec.N, ent)
    R, P, K, C = build_R(spec), build_P(spec), build_K(spec), build_C(spec)
    rhs = (R * P * X.embed(2, (1,)) * K).scale(cell.p())
    Ci = C.inverse()
    (s, t), cv = next(iter(Ci.items()))
    YC = LegMatrix.from_entries(
        1, spec.N, {((rw[0],), (rw[1],)): v * cv.inverse() for (rw, cl), v in rhs.items() if cl == (s[0], t[0])}
    )
    Y = YC * C.transpose().inverse()
    assert Y.embed(2, (1,)) * K.map(NCPoly.const) == rhs
    Z = {(g.col, g.row): NCPoly.gen(i) for i, g in enumerate(gens.gens)}
    return Y, vmap(spec, cell, Z)


@pytest.mark.parametrize("spec,cell", cells(7), ids=lambda x: str(x))
def test_vmap_matches_direct_solution(spec, cell):
    Y, V = _derived_V(spec, cell)
    expect = {}
    for (j, k), v in V.items():
        expect[(spec.pos(j), spec.pos(k))] = v
    for j in cell.plus:
        a = spec.pos(j)
        expect[(a, a)] = expect.get((a, a), NCPoly()) + NCPoly.const(1)
    got = {(rw[0], cl[0]): v for (rw, cl), v in Y.items()}
    assert set(got) == {k for k, v in expect.items() if not v.is_zero()}
    for key, v in got.items():
        assert (v - expect[key]).is_zero()


def test_vmap_coefficients_C1():
    spec = build_series("C", 1)
    cell = build_cell(spec, H)
    pat = vcoeff_pattern(spec, cell)
    e, r = spec.eps, cell.r
    (zj, zk), c = pat[(-H, H)][0]
    a, b = spec.pos(-H), spec.pos(H)
    assert (zj, zk) == (-H, H)
    assert c == q_power(-2 * r + 1 + e) * (spec.veps[a] * spec.veps[b]) * q_power(-spec.rho[a] - spec.rho[b])
    assert vmap(spec, cell, {}) == {}


def test_vmap_middle_rows_single_term():
    spec = build_series("B", 2)
    cell = build_cell(spec, 2)
    for (j, k), terms in vcoeff_pattern(spec, cell).items():
        assert len(terms) == (2 if j <= -cell.r else 1)


def test_vmap_rejects_bad_index():
    spec = build_series("C", 1)
    with pytest.raises(LegError):
        vmap(spec, build_cell(spec, H), {(H, H): NCPoly.const(1)})


def test_ymap_hermitian_pattern():
    spec = build_series("C", 2)
    rng = random.Random(7)
    X = random_matrix(rng, 1, spec.N)
    X = X + X.transpose()
    Y = ymap(spec, X)
    assert Y == Y.transpose()
