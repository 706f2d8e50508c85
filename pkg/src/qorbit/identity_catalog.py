"""Catalog of scalar matrix identities, each checked to an exact zero residual.

Every entry is a generator of ``(label, lhs, rhs)`` triples where ``lhs`` and
``rhs`` are built independently from the constructors in
:mod:`qorbit.series_data`; the residual of a check is the list of
``lhs - rhs`` differences.  Identities quantified over an arbitrary matrix
``X`` are checked on the full matrix-unit basis when ``N`` is small, and on
seeded random matrices otherwise.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

from .scalars import ONE, ZERO, RatFunc, q_power, qnum, to_ratfunc
from .series_data import (
    CellSplit,
    SeriesSpec,
    build_C,
    build_E,
    build_K,
    build_P,
    build_Q,
    build_R,
    q_rho2,
)
from .tensor_space import LegMatrix

__all__ = [
    "DEFAULT_SEED",
    "IdentityCheck",
    "UnknownIdentityError",
    "MissingCellError",
    "CATALOG",
    "CELL_IDS",
    "check",
    "run_catalog",
    "random_matrix",
    "Context",
]

DEFAULT_SEED = 0x9E3779B97F4A7C15
UNIT_BASIS_MAX_N = 6
RANDOM_COUNT = 5


class UnknownIdentityError(KeyError):
    pass


class MissingCellError(ValueError):
    pass


def scalar_matrix(v) -> LegMatrix:
    """A scalar as a zero-leg matrix, so scalar identities share the residual type."""
    return LegMatrix.from_entries(0, 1, {((), ()): to_ratfunc(v)})


def random_matrix(rng: random.Random, legs: int, dim: int, density: float = 1.0) -> LegMatrix:
    """Random matrix whose entries are small Laurent polynomials in ``t``."""
    n = dim**legs
    rows = {}
    for i in range(n):
        row = {}
        for j in range(n):
            if density < 1.0 and rng.random() > density:
                continue
            v = RatFunc.monomial(Fraction(rng.randint(-9, 9), rng.randint(1, 5)), rng.randint(-6, 6))
            if rng.random() < 0.3:
                v = v + RatFunc.monomial(rng.randint(1, 4), rng.randint(-6, 6))
            if not v.is_zero():
                row[j] = v
        if row:
            rows[i] = row
    return LegMatrix(legs, dim, rows)


def matrix_units(legs: int, dim: int):
    n = dim**legs
    for i in range(n):
        for j in range(n):
            yield LegMatrix(legs, dim, {i: {j: ONE}})


class Context:
    """Cached building blocks for one ``(spec, cell)`` pair."""

    def __init__(self, spec: SeriesSpec, cell: CellSplit | None = None):
        self.spec = spec
        self.cell = cell
        self.N = spec.N

    @cached_property
    def R(self):
        return build_R(self.spec)

    @cached_property
    def Ri(self):
        return self.R.inverse()

    @cached_property
    def P(self):
        return build_P(self.spec)

    @cached_property
    def K(self):
        return build_K(self.spec)

    @cached_property
    def R21(self):
        return self.P * self.R * self.P

    @cached_property
    def R21i(self):
        return self.P * self.Ri * self.P

    @cached_property
    def K21(self):
        return self.P * self.K * self.P

    @cached_property
    def C(self):
        return build_C(self.spec)

    @cached_property
    def Ci(self):
        return self.C.inverse()

    @cached_property
    def q2rho(self):
        return q_rho2(self.spec)

    @cached_property
    def gamma(self) -> RatFunc:
        return q_power(1) - q_power(-1)

    @property
    def I1(self):
        return LegMatrix.identity(1, self.N)

    @property
    def I2(self):
        return LegMatrix.identity(2, self.N)

    def E(self, s):
        return build_E(self.spec, s)

    def on(self, m: LegMatrix, legs: int, *where):
        return m.embed(legs, where)

    def thresholds(self):
        """All thresholds ``s`` from ``-(N+1)/2`` to ``(N-1)/2``."""
        lo = Fraction(-(self.N + 1), 2)
        return [lo + k for k in range(self.N + 1)]

    def x_samples(self, legs: int, seed: int):
        """Matrices standing in for a universally quantified ``X``."""
        if self.N <= UNIT_BASIS_MAX_N:
            yield from matrix_units(legs, self.N)
        else:
            rng = random.Random(seed)
            for _ in range(RANDOM_COUNT):
                yield random_matrix(rng, legs, self.N)


# the catalog ------------------------------------------------------------------


def _yb(c: Context, seed):
    R = c.R
    R12, R13, R23 = R.embed(3, (1, 2)), R.embed(3, (1, 3)), R.embed(3, (2, 3))
    yield "R12 R13 R23 = R23 R13 R12", R12 * R13 * R23, R23 * R13 * R12


def _2_8(c: Context, seed):
    yield "R12 - R21^-1 = (q-1/q)(P - K12)", c.R - c.R21.inverse(), (c.P - c.K).scale(c.gamma)


def _2_9(c: Context, seed):
    yield "P R12 P = R12^t", c.P * c.R * c.P, c.R.transpose()
    yield "R_q^-1 = R_(1/q)", c.R.inverse(), c.R.map(RatFunc.invert_q)


def _2_10(c: Context, seed):
    C2, C2i = c.C.embed(2, (2,)), c.Ci.embed(2, (2,))
    yield "C2^-1 R12 C2 = (R12^-1)^t2", C2i * c.R * C2, c.Ri.partial_transpose(2)
    C1t, C1it = c.C.transpose().embed(2, (1,)), c.Ci.transpose().embed(2, (1,))
    yield "(C1^-1)^t R12 C1^t = (R12^-1)^t1", C1it * c.R * C1t, c.Ri.partial_transpose(1)


def _2_11(c: Context, seed):
    CC = c.C.embed(2, (1,)) * c.C.embed(2, (2,))
    yield "C1 C2 R12 C1 C2 = R21", CC * c.R * CC, c.R21


def _2_12(c: Context, seed):
    CC = c.C.embed(2, (1,)) * c.C.embed(2, (2,))
    Ct = c.C.transpose()
    CCt = Ct.embed(2, (1,)) * Ct.embed(2, (2,))
    # (C^0)^2 = eps I, so the flip picks up eps; a plain P K12 only holds for B and D
    PK = (c.P * c.K).scale(c.spec.eps)
    yield "C1 C2 K12 = eps P K12", CC * c.K, PK
    yield "C1^t C2^t K12 = eps P K12", CCt * c.K, PK


def _2_13(c: Context, seed):
    yield "P K12 P = K12^t", c.K21, c.K.transpose()
    yield "K_(1/q) = K_q^t", c.K.map(RatFunc.invert_q), c.K.transpose()


def _2_14(c: Context, seed):
    e, N = c.spec.eps, c.N
    yield "R P K = eps q^(-N+eps) K", c.R * c.P * c.K, c.K.scale(q_power(-N + e) * e)


def _2_14c(c: Context, seed):
    e, N = c.spec.eps, c.N
    rhs = (c.P * c.K).scale(q_power(N - e) * e)
    yield "R12^-1 K12 = eps q^(N-eps) P K12", c.Ri * c.K, rhs
    yield "K21 R21^-1 = eps q^(N-eps) P K12", c.K21 * c.R21i, rhs


def _2_15(c: Context, seed):
    K = c.K
    for X in c.x_samples(2, seed):
        yield "K X K = tr(K X) K", K * X * K, K.scale((K * X).trace())


def _2_16(c: Context, seed):
    e = c.spec.eps
    KP = c.K * c.P
    for X in c.x_samples(1, seed):
        lhs = (KP * X.embed(2, (1,))).trace()
        rhs = (c.q2rho * X).trace() * e
        yield "tr(K12 P X1) = eps tr(q^2rho X)", scalar_matrix(lhs), scalar_matrix(rhs)


def _2_17(c: Context, seed):
    e = c.spec.eps
    KP = c.K * c.P
    for X in c.x_samples(1, seed):
        lhs = KP * X.embed(2, (1,)) * c.K
        yield "K12 P X1 K12 = eps tr(q^2rho X) K12", lhs, c.K.scale((c.q2rho * X).trace() * e)


def _2_18(c: Context, seed):
    K = c.K
    C2, C2i = c.C.embed(2, (2,)), c.Ci.embed(2, (2,))
    C1t = c.C.transpose().embed(2, (1,))
    C1it = c.Ci.transpose().embed(2, (1,))
    for X in c.x_samples(1, seed):
        Xt = X.transpose()
        yield "K12 X1 = K12 C2^-1 X2^t C2", K * X.embed(2, (1,)), K * C2i * Xt.embed(2, (2,)) * C2
        yield (
            "K12 X2 = K12 (C1^-1)^t X1^t C1^t",
            K * X.embed(2, (2,)),
            K * C1it * Xt.embed(2, (1,)) * C1t,
        )


def _2_19(c: Context, seed):
    K12 = c.K.embed(3, (1, 2))
    yield "K12 R31^-1 = K12 R32", K12 * c.Ri.embed(3, (3, 1)), K12 * c.R.embed(3, (3, 2))
    yield "K12 R23^-1 = K12 R13", K12 * c.Ri.embed(3, (2, 3)), K12 * c.R.embed(3, (1, 3))
    yield "K12 K32 = K12 P13", K12 * c.K.embed(3, (3, 2)), K12 * c.P.embed(3, (1, 3))
    yield "K12 K13 = K12 P23", K12 * c.K.embed(3, (1, 3)), K12 * c.P.embed(3, (2, 3))


def _2_20(c: Context, seed):
    for s in c.thresholds():
        lhs = c.K * c.E(s).embed(2, (1,))
        rhs = c.K * (c.I1 - c.E(-s - 1)).embed(2, (2,))
        yield f"K12 E({s})1 = K12 (I - E({-s - 1}))2", lhs, rhs


def _2_21(c: Context, seed):
    zero = LegMatrix.zero(2, c.N)
    for s, t in product(c.thresholds(), repeat=2):
        if s + t < 0:
            lhs = c.K * c.E(s).embed(2, (1,)) * c.E(t).embed(2, (2,))
            yield f"K12 E({s})1 E({t})2 = 0", lhs, zero


def _2_22(c: Context, seed):
    zero = LegMatrix.zero(2, c.N)
    for s in c.thresholds():
        E1, E2 = c.E(s).embed(2, (1,)), c.E(s).embed(2, (2,))
        F1, F2 = c.I2 - E1, c.I2 - E2
        yield f"E({s})1 R12 (I - E({s}))1 = 0", E1 * c.R * F1, zero
        yield f"(I - E({s}))2 R12 E({s})2 = 0", F2 * c.R * E2, zero
        yield f"R21 (I - E({s}))2 = (I - E)2 R21 (I - E)2", c.R21 * F2, F2 * c.R21 * F2


def _em(c: Context):
    """``E(-r)`` embedded on legs 1 and 2."""
    E = c.cell.E_minus
    return E.embed(2, (1,)), E.embed(2, (2,))


def _2_23(c: Context, seed):
    E1, E2 = _em(c)
    lhs = (c.I2 - E1) * c.R * E1 * E2
    yield "(I - E(-r))1 R12 E(-r)1 E(-r)2 = 0", lhs, LegMatrix.zero(2, c.N)


def _2_24(c: Context, seed):
    _E1, E2 = _em(c)
    p = c.cell.p()
    yield "R12^-1 E(-r)2 K12 = p E(-r)2 P K12", c.Ri * E2 * c.K, (E2 * c.P * c.K).scale(p)


def _2_25(c: Context, seed):
    E1, E2 = _em(c)
    p = c.cell.p()
    F2 = c.I2 - E2
    lhs = c.R21 * F2 * c.K
    rhs = (F2 * c.P * c.K).scale(p) - (E1 * c.P * c.K).scale(c.gamma)
    yield "R21 (I - E(-r))2 K12 = p (I-E)2 P K12 - (q-1/q) E1 P K12", lhs, rhs


def _2_26(c: Context, seed):
    E1, E2 = _em(c)
    p = c.cell.p()
    F = (c.I2 - E1) * (c.I2 - E2)
    yield "F R21 F K12 = p F P K12", F * c.R21 * F * c.K, (F * c.P * c.K).scale(p)


def _2_36(c: Context, seed):
    e, N = c.spec.eps, c.N
    yield "tr(q^2rho) = eps + [N - eps]", scalar_matrix(c.q2rho.trace()), scalar_matrix(
        qnum(N - e) + e
    )


def _cell_projectors(c: Context):
    cell = c.cell
    return cell.E_minus, cell.E_zero, cell.E_plus


def _3_13(c: Context, seed):
    Em, E0, Ep = _cell_projectors(c)
    Q = build_Q(c.spec, c.cell, c.R)
    R = c.R

    def sandwich(leg):
        return sum(
            (E.embed(2, (leg,)) * R * E.embed(2, (leg,)) for E in (Em, E0, Ep)),
            LegMatrix.zero(2, c.N),
        )

    yield "Q12 = sum_a E^a_2 R12 E^a_2", Q, sandwich(2)
    m2, z2, p2 = (E.embed(2, (2,)) for E in (Em, E0, Ep))
    yield "Q12 = R12 E^-_2 + E^0_2 R12 E^0_2 + E^+_2 R12", Q, R * m2 + z2 * R * z2 + p2 * R
    yield "Q12 = sum_a E^a_1 R12 E^a_1", Q, sandwich(1)
    yield "Q_(1/q) = Q_q^-1", Q.map(RatFunc.invert_q), Q.inverse()


def _3_14(c: Context, seed):
    Em = c.cell.E_minus.embed(2, (1,))
    Q = build_Q(c.spec, c.cell, c.R)
    yield "E^-_1 R12 Q12^-1 = E^-_1", Em * c.R * Q.inverse(), Em


CATALOG = {
    "yb": _yb,
    "2.8": _2_8,
    "2.9": _2_9,
    "2.10": _2_10,
    "2.11": _2_11,
    "2.12": _2_12,
    "2.13": _2_13,
    "2.14": _2_14,
    "2.14c": _2_14c,
    "2.15": _2_15,
    "2.16": _2_16,
    "2.17": _2_17,
    "2.18": _2_18,
    "2.19": _2_19,
    "2.20": _2_20,
    "2.21": _2_21,
    "2.22": _2_22,
    "2.23": _2_23,
    "2.24": _2_24,
    "2.25": _2_25,
    "2.26": _2_26,
    "2.36": _2_36,
    "3.13": _3_13,
    "3.14": _3_14,
}

# ids that take a cell index r (the projector family ones included)
CELL_IDS = frozenset({"2.20", "2.21", "2.22", "2.23", "2.24", "2.25", "2.26", "3.13", "3.14"})
# ids quantified over an arbitrary matrix X
SAMPLED_IDS = frozenset({"2.15", "2.16", "2.17", "2.18"})


@dataclass
class IdentityCheck:
    id: str
    spec: SeriesSpec
    cell: CellSplit | None
    seed: int | None
    residuals: list = field(default_factory=list)
    labels: list = field(default_factory=list)
    values: dict = field(default_factory=dict)  # label -> left side, scalar identities only

    @property
    def passed(self) -> bool:
        return all(m.is_zero() for m in self.residuals)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def residual(self) -> LegMatrix:
        """First nonzero residual (or an empty one when the check passes)."""
        for m in self.residuals:
            if not m.is_zero():
                return m
        return self.residuals[0] if self.residuals else LegMatrix.zero(0, 1)

    @property
    def residual_entry_count(self) -> int:
        return sum(m.nnz() for m in self.residuals)

    def failures(self) -> list[str]:
        return [lab for lab, m in zip(self.labels, self.residuals) if not m.is_zero()]

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "series": self.spec.series,
            "rank": self.spec.rank,
            "r": str(self.cell.r) if self.cell is not None else None,
            "status": self.status,
            "residual_entry_count": self.residual_entry_count,
            "seed": self.seed,
        }
        if self.values:
            out["values"] = dict(self.values)
        return out


def check(
    id: str,
    spec: SeriesSpec,
    cell: CellSplit | None = None,
    seed: int | None = DEFAULT_SEED,
    context: Context | None = None,
) -> IdentityCheck:
    """Evaluate one catalog identity exactly."""
    if id not in CATALOG:
        raise UnknownIdentityError(f"unknown identity id {id!r}")
    if id in CELL_IDS and cell is None:
        raise MissingCellError(f"identity {id} needs a cell index r")
    ctx = context if context is not None and context.cell is cell else Context(spec, cell)
    out = IdentityCheck(id, spec, cell, seed if id in SAMPLED_IDS else None)
    for label, lhs, rhs in CATALOG[id](ctx, seed):
        out.labels.append(label)
        out.residuals.append(lhs - rhs)
        if lhs.legs == 0:
            out.values[label] = str(lhs.get((), (), ZERO))
    return out


def run_catalog(
    spec: SeriesSpec,
    cell: CellSplit | None = None,
    seed: int = DEFAULT_SEED,
    only=None,
) -> list[IdentityCheck]:
    """Run every id valid for the inputs, in catalog order."""
    ctx = Context(spec, cell)
    ids = [i for i in CATALOG if cell is not None or i not in CELL_IDS]
    if only is not None:
        ids = [i for i in ids if i in set(only)]
    return [check(i, spec, cell, seed, ctx) for i in ids]
