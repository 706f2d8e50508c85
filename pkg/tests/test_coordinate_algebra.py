from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qorbit.coordinate_algebra import (
    LEMMAS,
    AlgebraContext,
    GeneratorSet,
    NCPoly,
    ResourceError,
    adjoint_relation_entries,
    build_quotient,
    normal_form,
    relation_entries,
    star_conjugate_coeffs,
    verify_lemma,
)
from qorbit.scalars import ONE, RatFunc, q_power
from qorbit.series_data import vcoeff_pattern

from conftest import spec_cell

H = Fraction(1, 2)

# graded dimensions of the degree-4 quotient, measured by row reduction and frozen
GRADED = {
    ("C", 1, "1/2"): [1, 1, 1, 1, 1],
    ("B", 1, "1"): [1, 2, 2, 2, 2],
    ("C", 2, "1/2"): [1, 3, 6, 10, 15],
    ("C", 2, "3/2"): [1, 3, 6, 10, 15],
    ("D", 2, "1/2"): [1, 1, 1, 1, 1],
    ("D", 2, "3/2"): [1, 3, 5, 7, 9],
    ("B", 2, "2"): [1, 4, 9, 16, 25],
}


@pytest.mark.parametrize("key", sorted(GRADED), ids=lambda k: f"{k[0]}{k[1]}-r{k[2]}")
def test_graded_dimensions(key):
    spec, cell = spec_cell(*key)
    qb = build_quotient(spec, cell, 4)
    assert qb.graded_dims() == GRADED[key]
    assert qb.is_standard(())


def test_graded_dimensions_B2_r1():
    spec, cell = spec_cell("B", 2, "1")
    assert build_quotient(spec, cell, 3).graded_dims() == [1, 6, 15, 28]


def test_one_generator_case():
    spec, cell = spec_cell("C", 1, "1/2")
    qb = build_quotient(spec, cell, 3)
    assert qb.graded_dims() == [1, 1, 1, 1]
    assert [str(g) for g in qb.gens.gens] == ["z*[1/2,-1/2]"]
    assert qb.degree1_relations == 0


def test_degree_zero_basis():
    for key in GRADED:
        spec, cell = spec_cell(*key)
        assert build_quotient(spec, cell, 0).graded_dims() == [1]


def test_degree_one_counts():
    spec, cell = spec_cell("B", 1, "1")
    qb = build_quotient(spec, cell, 2)
    assert qb.graded_dims()[1] == len(qb.gens) - qb.degree1_relations == 2
    spec, cell = spec_cell("D", 2, "1/2")
    qb = build_quotient(spec, cell, 2)
    assert len(qb.gens) == 4 and qb.graded_dims()[1] == 1


@pytest.mark.parametrize("key", sorted(GRADED), ids=lambda k: f"{k[0]}{k[1]}-r{k[2]}")
def test_relations_have_no_constant_and_are_weight_homogeneous(key):
    spec, cell = spec_cell(*key)
    gens = GeneratorSet(spec, cell)
    rels = relation_entries(spec, cell)
    assert rels or len(gens) == 1  # a single generator commutes with itself
    for v in rels:
        assert v.constant().is_zero()
        assert len({gens.word_weight(w) for w in v.terms}) == 1
        # finite classical limit
        for c in v.terms.values():
            c.at_one()


def test_relation_ideal_is_killed():
    spec, cell = spec_cell("C", 2, "1/2")
    qb = build_quotient(spec, cell, 4)
    for v in relation_entries(spec, cell):
        assert normal_form(qb, v).is_zero()
        for g in range(len(qb.gens)):
            assert normal_form(qb, NCPoly.gen(g) * v).is_zero()
            assert normal_form(qb, v * NCPoly.gen(g)).is_zero()
    for v in adjoint_relation_entries(spec, cell):
        assert normal_form(qb, v).is_zero()


def test_normal_form_overflow():
    spec, cell = spec_cell("C", 2, "1/2")
    qb = build_quotient(spec, cell, 2)
    with pytest.raises(ResourceError):
        normal_form(qb, NCPoly.word((0, 0, 0, 0, 0, 0)))


def _poly(draw, ngen, maxlen):
    words = draw(st.lists(st.lists(st.integers(0, ngen - 1), max_size=maxlen).map(tuple), min_size=1, max_size=4))
    coeffs = draw(st.lists(st.integers(-3, 3), min_size=len(words), max_size=len(words)))
    x = NCPoly()
    for w, c in zip(words, coeffs):
        x = x + NCPoly.word(w, RatFunc.monomial(c, len(w))) if c else x
    return x


@st.composite
def pairs(draw):
    return _poly(draw, 3, 2), _poly(draw, 3, 2)


_C2 = spec_cell("C", 2, "1/2")


@given(pairs())
def test_normal_form_properties(xy):
    qb = build_quotient(*_C2, 4)
    x, y = xy
    nx, ny = normal_form(qb, x), normal_form(qb, y)
    assert normal_form(qb, nx) == nx
    assert normal_form(qb, x + y) == nx + ny
    assert normal_form(qb, x * y) == normal_form(qb, nx * ny)
    for w in nx.terms:
        assert qb.is_standard(w)


def test_star_conjugation_involution():
    spec, cell = spec_cell("B", 2, "1")
    pat = vcoeff_pattern(spec, cell)
    assert star_conjugate_coeffs(star_conjugate_coeffs(pat)) == pat
    assert star_conjugate_coeffs({(0, 1): [((2, 3), ONE)]}) == {(1, 0): [((3, 2), ONE)]}


def test_context_pieces():
    spec, cell = spec_cell("C", 1, "1/2")
    ctx = AlgebraContext(spec, cell)
    assert ctx.p == spec.eps * q_power(-2 * cell.r + 1 + spec.eps)
    assert len(ctx.gens) == 1


@pytest.mark.parametrize(
    "lemma,key",
    [("3.4", ("C", 1, "1/2")), ("3.2", ("B", 1, "1")), ("5.2", ("C", 1, "1/2")), ("5.1", ("D", 2, "3/2"))],
)
def test_lemma_examples(lemma, key):
    spec, cell = spec_cell(*key)
    chk = verify_lemma(lemma, spec, cell)
    assert chk.passed and chk.to_json()["status"] == "pass"


@pytest.mark.parametrize("lemma", sorted(LEMMAS))
def test_every_lemma_C2(lemma):
    spec, cell = spec_cell("C", 2, "1/2")
    assert verify_lemma(lemma, spec, cell).passed


def test_lemma_needs_degree():
    spec, cell = spec_cell("C", 1, "1/2")
    with pytest.raises(ResourceError):
        verify_lemma("5.2", spec, cell, d=2)
    with pytest.raises(KeyError):
        verify_lemma("9.9", spec, cell)


def test_quotient_json():
    spec, cell = spec_cell("B", 1, "1")
    out = build_quotient(spec, cell, 2).to_json()
    assert out["graded_dimensions"] == [1, 2, 2]
    assert out["degree1_relations"] == 0
