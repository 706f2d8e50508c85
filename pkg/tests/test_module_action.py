from fractions import Fraction

import pytest
from conftest import MODULE_INSTANCES, instance_id, module, spec_cell

from qorbit.coordinate_algebra import NCPoly
from qorbit.module_action import (
    ModuleNotClosedError,
    build_module,
    check_well_defined,
    expected_unit_diagonal,
    parse_sigma,
    seed_action,
    verify_module_relations,
    verify_mirror,
)
from qorbit.scalars import ONE, parse_ratfunc, q_power

# dimensions confirmed by the Weyl dimension formula
DIMS = {
    ("B", 1, "1", "1/2"): 2,
    ("B", 1, "1", "1"): 3,
    ("B", 2, "1", "1/2"): 4,
    ("B", 2, "2", "1"): 5,
    ("C", 1, "1/2", "1"): 2,
    ("C", 1, "1/2", "2"): 3,
    ("C", 2, "1/2", "1"): 5,
    ("D", 2, "1/2", "1/2"): 2,
    ("D", 2, "3/2", "1"): 4,
}


def test_parse_sigma():
    assert parse_sigma("5/4") == Fraction(5, 4)
    assert parse_sigma(2) == 2
    with pytest.raises(ValueError, match="4\\*sigma"):
        parse_sigma(Fraction(1, 3))


def test_seed_c1(c1):
    spec, cell = c1
    t = seed_action(spec, cell, 1, 2)
    v = t.act(1)
    assert v.entry((0,), (0,)) == NCPoly.const(q_power(2))
    assert v.entry((1,), (1,)) == NCPoly.const(q_power(-2))
    assert v.entry((0,), (1,)) is None
    low = v.entry((1,), (0,))
    ((word, cf),) = low.terms.items()
    assert word == (t.qb.gens.gen("1/2", "-1/2"),)
    # (xi^-1 - 1) from the Z* part plus (xi - 1) times the -1 that V* carries here
    assert cf == q_power(2) - q_power(-2)
    assert t.ctx.Vs.entry((1,), (0,)) == NCPoly.gen(word[0], -ONE)


@pytest.mark.parametrize("series,rank,r", [("C", 1, "1/2"), ("B", 2, "1"), ("D", 2, "3/2")])
def test_seed_trivial_sigma(series, rank, r):
    spec, cell = spec_cell(series, rank, r)
    v = seed_action(spec, cell, 0, 2).act(1)
    for (a,), (b,) in [k for k, _ in v.items()]:
        assert a == b and v.entry((a,), (b,)) == NCPoly.const(1)
    assert len(list(v.items())) == spec.N


def test_action_linear(c1):
    spec, cell = c1
    t = seed_action(spec, cell, 2, 4)
    g = NCPoly.word((0,))
    a, b = parse_ratfunc("(t^4+2)/(t^2)"), parse_ratfunc("(3)")
    f = g.scale(a) + NCPoly.const(b)
    assert t.act(f) == t.act(g).scale(a) + t.act(1).scale(b)


@pytest.mark.parametrize("inst", MODULE_INSTANCES, ids=instance_id)
def test_dimension(inst):
    rep = module(*inst)
    assert rep.dim == DIMS[inst]
    js = rep.to_json()
    assert sum(js["graded_dimensions"]) == rep.dim
    assert js["basis"][0] == "((1))"


@pytest.mark.parametrize("inst", MODULE_INSTANCES, ids=instance_id)
def test_operator_relations(inst):
    rep = module(*inst)
    res = verify_module_relations(rep)
    assert res.passed, res.to_json()
    assert set(res.results) == {"2.32", "2.33", "2.34", "2.35"}


@pytest.mark.parametrize("inst", MODULE_INSTANCES, ids=instance_id)
def test_unit_diagonal(inst):
    rep = module(*inst)
    assert rep.unit_diagonal() == expected_unit_diagonal(rep.spec, rep.cell, rep.sigma)


def test_unit_diagonal_c1():
    rep = module("C", 1, "1/2", "1")
    assert [str(x) for x in rep.unit_diagonal()] == ["(t^8)", "(1)/(t^8)"]


@pytest.mark.parametrize("inst", MODULE_INSTANCES, ids=instance_id)
def test_weights_compatible(inst):
    # M_ab shifts weights by a fixed amount, so every nonzero entry links
    # basis vectors whose weight difference depends on (a, b) only
    rep = module(*inst)
    for (a, b), op in rep.ops.items():
        shifts = set()
        for (i,), (j,) in [k for k, _ in op.items()]:
            shifts.add(tuple(x - y for x, y in zip(rep.weights[i], rep.weights[j])))
        assert len(shifts) <= 1, (a, b, shifts)


def test_c1_basis_degrees():
    rep = module("C", 1, "1/2", "2")
    assert rep.degrees == [0, 1, 2]
    assert rep.to_json()["graded_dimensions"] == [1, 1, 1]


@pytest.mark.parametrize("series,rank,r,sigma", [("C", 1, "1/2", 1), ("B", 1, "1", 1), ("D", 2, "3/2", 1)])
def test_mirror_recursion(series, rank, r, sigma):
    spec, cell = spec_cell(series, rank, r)
    t = seed_action(spec, cell, sigma, 3)
    assert verify_mirror(t) == 0
    assert verify_mirror(t, NCPoly.word((0,))) == 0


@pytest.mark.parametrize("series,rank,r", [("C", 1, "1/2"), ("B", 1, "1"), ("C", 2, "1/2")])
def test_well_defined(series, rank, r):
    spec, cell = spec_cell(series, rank, r)
    t = seed_action(spec, cell, 1, 3)
    assert check_well_defined(t, 2) == 0


def test_not_closed():
    spec, cell = spec_cell("C", 1, "1/2")
    with pytest.raises(ModuleNotClosedError, match="module did not close"):
        build_module(spec, cell, Fraction(5, 4))


def test_dimension_budget():
    spec, cell = spec_cell("C", 1, "1/2")
    with pytest.raises(ModuleNotClosedError, match="dimension budget"):
        build_module(spec, cell, 2, max_dim=2)


def test_rejects_bad_sigma(c1):
    spec, cell = c1
    with pytest.raises(ValueError):
        build_module(spec, cell, Fraction(1, 3))


def test_trivial_module(c1):
    spec, cell = c1
    rep = build_module(spec, cell, 0)
    assert rep.dim == 1
    assert all(x == ONE for x in rep.unit_diagonal())
