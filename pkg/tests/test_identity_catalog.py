import json

import pytest

from qorbit.identity_catalog import (
    CATALOG,
    CELL_IDS,
    DEFAULT_SEED,
    RANDOM_COUNT,
    SAMPLED_IDS,
    Context,
    MissingCellError,
    UnknownIdentityError,
    check,
    run_catalog,
)
from qorbit.scalars import q_power, qnum
from qorbit.series_data import build_cell, build_series

from conftest import ALL_SPECS


def test_catalog_ids():
    want = {"yb", "2.36", "3.13", "3.14"} | {f"2.{k}" for k in range(8, 27)}
    assert want <= set(CATALOG)


def test_skein_B1():
    assert check("2.8", build_series("B", 1)).passed


def test_trace_value_C1():
    chk = check("2.36", build_series("C", 1))
    assert chk.passed
    (value,) = chk.values.values()
    q = q_power(1)
    assert value == str(q**2 + q ** (-2))
    assert q**2 + q ** (-2) == qnum(3) - 1


def test_yb_D2_and_projectors_B2():
    assert check("yb", build_series("D", 2)).passed
    b2 = build_series("B", 2)
    assert check("2.21", b2, build_cell(b2, 1)).passed


@pytest.mark.parametrize("series,rank", ALL_SPECS)
def test_full_catalog(series, rank):
    spec = build_series(series, rank)
    for r in spec.valid_r():
        for chk in run_catalog(spec, build_cell(spec, r)):
            assert chk.passed, (chk.id, str(r), chk.failures())


def test_inverse_r_on_k_is_checked():
    labels = check("2.14c", build_series("B", 2)).labels
    assert labels


def test_double_c_identity_has_two_residuals():
    chk = check("2.12", build_series("C", 2))
    assert len(chk.residuals) == 2 and chk.passed


@pytest.mark.parametrize("series,rank", [("B", 1), ("C", 1), ("C", 2), ("D", 2)])
def test_double_c_on_k_needs_eps(series, rank):
    # C_1 C_2 K_12 = P K_12 without a sign holds for B and D only; for C the
    # right side needs the factor eps = -1
    c = Context(build_series(series, rank))
    C1, C2 = c.C.embed(2, (1,)), c.C.embed(2, (2,))
    literal = C1 * C2 * c.K - c.P * c.K
    assert literal.is_zero() == (series != "C")
    assert (C1 * C2 * c.K - (c.P * c.K).scale(c.spec.eps)).is_zero()


def test_errors():
    spec = build_series("B", 1)
    with pytest.raises(UnknownIdentityError):
        check("9.99", spec)
    with pytest.raises(MissingCellError):
        check("2.20", spec)


def test_sampled_ids_record_seed():
    spec = build_series("D", 4)  # N = 8: random sampling branch
    for i in sorted(SAMPLED_IDS):
        chk = check(i, spec, seed=123)
        assert chk.seed == 123 and chk.passed
        assert len(chk.residuals) >= RANDOM_COUNT
    assert check("2.8", spec).seed is None


def test_run_catalog_without_cell_skips_cell_ids():
    ids = {c.id for c in run_catalog(build_series("C", 1))}
    assert not ids & CELL_IDS


def test_json_schema():
    spec = build_series("C", 2)
    out = check("2.20", spec, build_cell(spec, "3/2")).to_json()
    assert set(out) == {"id", "series", "rank", "r", "status", "residual_entry_count", "seed"}
    assert out["r"] == "3/2" and out["status"] == "pass"
    json.dumps(out)


def test_determinism():
    spec = build_series("D", 4)
    a = [c.to_json() for c in run_catalog(spec, build_cell(spec, "1/2"), DEFAULT_SEED, only=SAMPLED_IDS)]
    b = [c.to_json() for c in run_catalog(spec, build_cell(spec, "1/2"), DEFAULT_SEED, only=SAMPLED_IDS)]
    assert a == b


def test_corrupted_R_is_caught():
    # negative control: perturb one R entry and watch YB and the skein relation fail
    spec = build_series("B", 2)
    c = Context(spec)
    rows = {i: dict(r) for i, r in c.R.rows.items()}
    i = next(iter(rows))
    j = next(iter(rows[i]))
    rows[i][j] = rows[i][j] + q_power(1)
    c.__dict__["R"] = type(c.R)(2, spec.N, rows)
    assert not check("yb", spec, context=c).passed
