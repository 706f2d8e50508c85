"""Truncated model of the antiholomorphic coordinate algebra on the big cell.

The algebra is generated by the entries of ``Z*``: one generator ``z*[a,b]``
for each matrix position ``(a, b)`` with ``a > -r >= b``.  With
``X = E^- + Z*`` the defining relation is

    X_1 R_12 X_2 R_21 = R_12 X_2 R_21 X_1,

whose ``N^4`` entries are (possibly inhomogeneous) elements of degree at most
two in the free algebra.  :func:`build_quotient` spans the two-sided ideal
slice ``{w1 * rel * w2 : degree <= d}`` and row-reduces it against the
graded-lexicographic word order (longer words lead, so reduction never raises
degree).  Words that are not pivots are the standard monomials, and the
reduced echelon rows give the normal form.

Everything is weight-graded: ``z*[a,b]`` has weight ``e_a - e_b`` with
``e_{-i} = -e_i`` and ``e_0 = 0``, every relation entry is weight-homogeneous,
and elimination runs separately per weight.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

from .linalg import RowEchelon
from .scalars import ONE, ZERO, RatFunc, q_power, to_ratfunc
from .series_data import (
    CellSplit,
    SeriesSpec,
    build_K,
    build_P,
    build_R,
    sgn,
    vstar_terms,
)
from .tensor_space import LegMatrix

__all__ = [
    "Gen",
    "GeneratorSet",
    "NCPoly",
    "QuotientBasis",
    "ResourceError",
    "TrivialQuotientError",
    "InconsistentConstantError",
    "relation_entries",
    "adjoint_relation_entries",
    "build_quotient",
    "normal_form",
    "star_conjugate_coeffs",
    "AlgebraContext",
    "LEMMAS",
    "verify_lemma",
    "LemmaCheck",
]

DEFAULT_MAX_ENTRIES = 20_000_000


class ResourceError(RuntimeError):
    """A degree or memory budget was exceeded."""

    def __init__(self, msg, degree=None):
        super().__init__(msg)
        self.degree = degree


class TrivialQuotientError(ArithmeticError):
    pass


class InconsistentConstantError(ArithmeticError):
    pass


def max_entries_budget() -> int:
    """Row-reduction budget: stored nonzero coefficients, ``QORBIT_MAX_MEM`` overrides."""
    raw = os.environ.get("QORBIT_MAX_MEM")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"QORBIT_MAX_MEM must be an integer, got {raw!r}") from None
    return DEFAULT_MAX_ENTRIES


# generators ------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Gen:
    """``z*`` at matrix position ``(row, col)``; valid when ``col <= -r < row``."""

    row: Fraction
    col: Fraction

    def __str__(self):
        return f"z*[{self.row},{self.col}]"


def _label_weight(spec: SeriesSpec, label) -> tuple[int, ...]:
    w = [0] * spec.rank
    if label != 0:
        k = abs(Fraction(label))
        i = int(k - 1) if spec.series == "B" else int(k - Fraction(1, 2))
        w[i] = sgn(label)
    return tuple(w)


class GeneratorSet:
    """Ordered generators of the algebra for one ``(spec, cell)``."""

    def __init__(self, spec: SeriesSpec, cell: CellSplit):
        self.spec = spec
        self.cell = cell
        r = cell.r
        gens = [Gen(a, b) for a in spec.labels for b in spec.labels if b <= -r < a]
        self.gens: tuple[Gen, ...] = tuple(sorted(gens))
        self.index = {(g.row, g.col): i for i, g in enumerate(self.gens)}
        self.weights = tuple(
            tuple(x - y for x, y in zip(_label_weight(spec, g.row), _label_weight(spec, g.col)))
            for g in self.gens
        )

    def __len__(self):
        return len(self.gens)

    def gen(self, row, col) -> int:
        key = (Fraction(row), Fraction(col))
        if key not in self.index:
            raise ValueError(f"no generator at position ({row}, {col}) for r = {self.cell.r}")
        return self.index[key]

    def word_weight(self, word) -> tuple[int, ...]:
        w = [0] * self.spec.rank
        for i in word:
            for a, x in enumerate(self.weights[i]):
                w[a] += x
        return tuple(w)

    def word_str(self, word) -> str:
        return "*".join(str(self.gens[i]) for i in word) if word else "1"


# noncommutative polynomials ----------------------------------------------------


def _scalar(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, (int, Fraction)):
        return to_ratfunc(x)
    return None


class NCPoly:
    """Element of the free algebra: ``{word: coefficient}`` with words as tuples
    of generator indices.  Scalars are central."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: dict = terms if terms is not None else {}

    @classmethod
    def const(cls, c) -> "NCPoly":
        c = to_ratfunc(c)
        return cls({(): c} if not c.is_zero() else {})

    @classmethod
    def gen(cls, i: int, c=ONE) -> "NCPoly":
        c = to_ratfunc(c)
        return cls({(i,): c} if not c.is_zero() else {})

    @classmethod
    def word(cls, w, c=ONE) -> "NCPoly":
        return cls({tuple(w): to_ratfunc(c)})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def part(self, k: int) -> "NCPoly":
        return NCPoly({w: c for w, c in self.terms.items() if len(w) == k})

    def constant(self) -> RatFunc:
        return self.terms.get((), ZERO)

    def _coerce(self, other):
        if isinstance(other, NCPoly):
            return other
        s = _scalar(other)
        if s is None:
            return None
        return NCPoly.const(s)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w)
            if v is None:
                out[w] = c
            else:
                v = v + c
                if v.is_zero():
                    del out[w]
                else:
                    out[w] = v
        return NCPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "NCPoly":
        c = to_ratfunc(c)
        if c.is_zero():
            return NCPoly()
        if c.is_one():
            return self
        return NCPoly({w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            out: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    v = out.get(w)
                    out[w] = c1 * c2 if v is None else v + c1 * c2
            return NCPoly({w: c for w, c in out.items() if not c.is_zero()})
        s = _scalar(other)
        if s is None:
            return NotImplemented
        return self.scale(s)

    def __rmul__(self, other):
        s = _scalar(other)
        if s is None:
            return NotImplemented
        return self.scale(s)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def to_string(self, gens: GeneratorSet | None = None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            ws = gens.word_str(w) if gens is not None else ("*".join(f"g{i}" for i in w) or "1")
            parts.append(f"({self.terms[w]})" + ("" if not w else "*" + ws))
        return " + ".join(parts)

    def __repr__(self):
        return f"NCPoly({self.to_string()})"


def word_key(word):
    return (len(word), word)


# star conjugation ----------------------------------------------------------------


def star_conjugate_coeffs(linear_map: dict) -> dict:
    """Adjoint of a linear index map ``{(j, k): [((a, b), c), ...]}``.

    ``q`` is real, so coefficients are unchanged and only the index pattern is
    transposed: ``(M*)_{kj} = (M_{jk})*`` and ``(z_ab)* `` sits at ``(b, a)``.
    """
    return {
        (k, j): [((b, a), c) for (a, b), c in terms] for (j, k), terms in linear_map.items()
    }


# matrices of algebra elements ----------------------------------------------------


class AlgebraContext:
    """The matrices ``X = E^- + Z*``, ``Y = E^+ + V*`` and their scalar partners."""

    def __init__(self, spec: SeriesSpec, cell: CellSplit):
        self.spec = spec
        self.cell = cell
        self.N = spec.N
        self.gens = GeneratorSet(spec, cell)

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
    def gamma(self):
        return q_power(1) - q_power(-1)

    @cached_property
    def p(self):
        return self.cell.p()

    def _diag_nc(self, labels) -> dict:
        return {(self.spec.pos(a), self.spec.pos(a)): NCPoly.const(1) for a in labels}

    @cached_property
    def Zs(self) -> LegMatrix:
        """``Z*``: generator ``z*[a,b]`` at position ``(a, b)``."""
        spec = self.spec
        ent = {
            ((spec.pos(g.row),), (spec.pos(g.col),)): NCPoly.gen(i)
            for i, g in enumerate(self.gens.gens)
        }
        return LegMatrix.from_entries(1, self.N, ent)

    @cached_property
    def Vs(self) -> LegMatrix:
        """``V*`` as linear combinations of generators."""
        spec = self.spec
        ent = {}
        for (a, b), terms in vstar_terms(spec, self.cell).items():
            acc = NCPoly()
            for (row, col), c in terms:
                acc = acc + NCPoly.gen(self.gens.gen(row, col), c)
            if not acc.is_zero():
                ent[((spec.pos(a),), (spec.pos(b),))] = acc
        return LegMatrix.from_entries(1, self.N, ent)

    @cached_property
    def X(self) -> LegMatrix:
        ent = {((i,), (j,)): v for (i, j), v in self._diag_nc(self.cell.minus).items()}
        return LegMatrix.from_entries(1, self.N, ent) + self.Zs

    @cached_property
    def Y(self) -> LegMatrix:
        ent = {((i,), (j,)): v for (i, j), v in self._diag_nc(self.cell.plus).items()}
        return LegMatrix.from_entries(1, self.N, ent) + self.Vs

    @property
    def Em(self):
        return self.cell.E_minus

    @property
    def Ep(self):
        return self.cell.E_plus


def relation_entries(spec: SeriesSpec, cell: CellSplit, ctx: AlgebraContext | None = None):
    """Nonzero entries of ``X_1 R_12 X_2 R_21 - R_12 X_2 R_21 X_1`` in position order."""
    c = ctx or AlgebraContext(spec, cell)
    X1, X2 = c.X.embed(2, (1,)), c.X.embed(2, (2,))
    rel = X1 * c.R * X2 * c.R21 - c.R * X2 * c.R21 * X1
    out = []
    for _pos, v in rel.items():
        v = v if isinstance(v, NCPoly) else NCPoly.const(v)
        if not v.constant().is_zero():
            raise InconsistentConstantError(
                f"inconsistent constant term {v.constant()} in relation entry at {_pos}"
            )
        if not v.is_zero():
            out.append(v)
    return out


def adjoint_relation_entries(spec: SeriesSpec, cell: CellSplit, ctx=None):
    """Entries of ``R_21^-1 X_2 R_21 X_1 - X_1 R_12 X_2 R_12^-1`` (the adjoint form)."""
    c = ctx or AlgebraContext(spec, cell)
    X1, X2 = c.X.embed(2, (1,)), c.X.embed(2, (2,))
    rel = c.R21i * X2 * c.R21 * X1 - X1 * c.R * X2 * c.Ri
    return [v if isinstance(v, NCPoly) else NCPoly.const(v) for _pos, v in rel.items()]


# the quotient --------------------------------------------------------------------


@dataclass
class QuotientBasis:
    """Echelon data of the ideal slice up to degree ``d``."""

    spec: SeriesSpec
    cell: CellSplit
    d: int
    gens: GeneratorSet
    echelons: dict = field(default_factory=dict)
    relation_count: int = 0
    degree1_relations: int = 0
    slice_dims: list = field(default_factory=list)

    def _weight_groups(self, x: NCPoly) -> dict:
        groups: dict = {}
        for w, c in x.terms.items():
            groups.setdefault(self.gens.word_weight(w), {})[w] = c
        return groups

    def normal_form(self, x) -> NCPoly:
        if not isinstance(x, NCPoly):
            x = NCPoly.const(x)
        out = {}
        for wt, part in self._weight_groups(x).items():
            ech = self.echelons.get(wt)
            if ech is None:
                raise ResourceError(f"weight {wt} lies outside the computed blocks", self.d)
            out.update(ech.reduce(part))
        return NCPoly(out)

    def is_standard(self, word) -> bool:
        word = tuple(word)
        ech = self.echelons.get(self.gens.word_weight(word))
        if ech is None:
            raise ResourceError(f"word {word} lies outside the computed blocks", len(word))
        return word not in ech.rows

    def standard_monomials(self, k: int) -> list:
        if k > self.d:
            raise ResourceError(f"degree {k} exceeds truncation degree {self.d}", k)
        return [w for w in product(range(len(self.gens)), repeat=k) if self.is_standard(w)]

    def graded_dims(self) -> list[int]:
        return [len(self.standard_monomials(k)) for k in range(self.d + 1)]

    def reduce_matrix(self, m: LegMatrix) -> LegMatrix:
        return m.map(lambda v: self.normal_form(v) if isinstance(v, NCPoly) else v)

    def to_json(self) -> dict:
        return {
            "series": self.spec.series,
            "rank": self.spec.rank,
            "r": str(self.cell.r),
            "degree": self.d,
            "generators": [str(g) for g in self.gens.gens],
            "graded_dimensions": self.graded_dims(),
            "relation_entries": self.relation_count,
            "degree1_relations": self.degree1_relations,
            "weight_blocks": self.slice_dims[0],
            "ideal_rows": self.slice_dims[1],
        }

    def dump(self) -> str:
        lines = []
        for k in range(self.d + 1):
            words = self.standard_monomials(k)
            lines.append(f"degree {k}: {len(words)}")
            for w in words:
                lines.append("  " + self.gens.word_str(w))
        return "\n".join(lines)


_QCACHE: dict = {}


def _height_functional(gens: GeneratorSet) -> tuple[int, ...]:
    """Coefficients ``c`` with ``<c, weight> > 0`` on every generator.

    Generator weights are ``e_|b| +- e_|a|`` with ``|a| < |b|`` whenever the sign
    is negative, so increasing coefficients ``1, 2, ..., l`` work.
    """
    c = tuple(range(1, gens.spec.rank + 1))
    for w in gens.weights:
        if sum(x * y for x, y in zip(c, w)) <= 0:
            raise ArithmeticError(f"generator weight {w} is not positive")
    return c


def _needed_weights(gens: GeneratorSet, d: int) -> list:
    """Weights of all words of length ``<= d`` plus every weight below them.

    A block of weight ``w`` needs the blocks ``w - wt(g)`` because the ideal
    part of weight ``w`` is spanned by the relations of that weight and by
    ``g * I`` and ``I * g`` for the smaller blocks.
    """
    c = _height_functional(gens)
    ht = lambda w: sum(x * y for x, y in zip(c, w))  # noqa: E731
    wts = gens.weights
    zero = tuple(0 for _ in c)

    def sub(w, g):
        return tuple(x - y for x, y in zip(w, g))

    reach: dict = {zero: True}

    def reachable(w) -> bool:
        if w in reach:
            return reach[w]
        ok = ht(w) > 0 and any(reachable(sub(w, g)) for g in wts)
        reach[w] = ok
        return ok

    frontier = {zero}
    targets = {zero}
    for _ in range(d):
        frontier = {tuple(x + y for x, y in zip(w, g)) for w in frontier for g in wts}
        targets |= frontier
    needed = set()
    stack = list(targets)
    while stack:
        w = stack.pop()
        if w in needed:
            continue
        needed.add(w)
        for g in wts:
            v = sub(w, g)
            if v not in needed and reachable(v):
                stack.append(v)
    return sorted(needed, key=lambda w: (ht(w), w))


def build_quotient(spec: SeriesSpec, cell: CellSplit, d: int, ctx=None) -> QuotientBasis:
    """Row-reduce the ideal, one complete weight block at a time (memoized).

    Every block whose weight occurs among words of length ``<= d`` is computed
    in full, so normal forms of such words are exact rather than truncated.
    """
    if d < 0:
        raise ValueError("truncation degree must be >= 0")
    key = (spec.series, spec.rank, cell.r, d)
    if key in _QCACHE:
        return _QCACHE[key]
    ctx = ctx or AlgebraContext(spec, cell)
    gens = ctx.gens
    rels = relation_entries(spec, cell, ctx)
    qb = QuotientBasis(spec, cell, d, gens, relation_count=len(rels))
    qb.degree1_relations = sum(1 for v in rels if v.degree() == 1)
    by_weight: dict = {}
    for v in rels:
        by_weight.setdefault(gens.word_weight(next(iter(v.terms))), []).append(v.terms)
    budget = max_entries_budget()
    stored = 0
    ng = len(gens)
    for wt in _needed_weights(gens, d):
        ech = RowEchelon(word_key)
        for row in by_weight.get(wt, ()):
            ech.add(row)
        for g in range(ng):
            below = qb.echelons.get(tuple(x - y for x, y in zip(wt, gens.weights[g])))
            if below is None:
                continue
            for row in list(below.rows.values()):
                ech.add({(g,) + w: c for w, c in row.items()})
                ech.add({w + (g,): c for w, c in row.items()})
        if () in ech.rows:
            raise TrivialQuotientError("trivial quotient: the unit lies in the ideal")
        qb.echelons[wt] = ech
        stored += sum(len(r) for r in ech.rows.values())
        if stored > budget:
            raise ResourceError(
                f"row-reduction budget exceeded at degree {d} ({stored} stored entries)", d
            )
    qb.slice_dims = [len(qb.echelons), sum(len(e) for e in qb.echelons.values())]
    _QCACHE[key] = qb
    return qb


def normal_form(basis: QuotientBasis, x) -> NCPoly:
    return basis.normal_form(x)


# lemma checks ----------------------------------------------------------------------


class _Lemma:
    """Embedding and reducing multiplication for lemma expressions."""

    def __init__(self, ctx: AlgebraContext, basis: QuotientBasis, legs: int):
        self.c = ctx
        self.qb = basis
        self.legs = legs

    def at(self, m: LegMatrix, *where):
        return m.embed(self.legs, where)

    def mul(self, *ms) -> LegMatrix:
        out = ms[0]
        for m in ms[1:]:
            out = out * m
            out = self.qb.reduce_matrix(out)
        return out


def _zero(ctx, legs):
    return LegMatrix.zero(legs, ctx.N)


def _l_3_2(L: _Lemma):
    c = L.c
    yield "K21 X1 R12 X2 = 0", L.mul(c.K21, L.at(c.X, 1), c.R, L.at(c.X, 2)), _zero(c, 2)


def _l_3_4(L: _Lemma):
    c = L.c
    yield "Y X = 0", L.mul(c.Y, c.X), _zero(c, 1)
    yield "X Y = 0", L.mul(c.X, c.Y), _zero(c, 1)


def _l_3_23(L: _Lemma):
    c = L.c
    yield "X1 R12 X2 K21 = 0", L.mul(L.at(c.X, 1), c.R, L.at(c.X, 2), c.K21), _zero(c, 2)


def _l_3_24(L: _Lemma):
    c = L.c
    Y1, Y2 = L.at(c.Y, 1), L.at(c.Y, 2)
    yield (
        "Y1 R21^-1 Y2 R12^-1 = R21^-1 Y2 R12^-1 Y1",
        L.mul(Y1, c.R21i, Y2, c.Ri),
        L.mul(c.R21i, Y2, c.Ri, Y1),
    )


def _l_3_25(L: _Lemma):
    c = L.c
    Y1, Y2 = L.at(c.Y, 1), L.at(c.Y, 2)
    yield "Y1 R21^-1 Y2 K21 = 0", L.mul(Y1, c.R21i, Y2, c.K21), _zero(c, 2)


def _l_3_26(L: _Lemma):
    c = L.c
    X1, Y2 = L.at(c.X, 1), L.at(c.Y, 2)
    yield (
        "R21 X1 R12 Y2 = Y2 R21 X1 R12",
        L.mul(c.R21, X1, c.R, Y2),
        L.mul(Y2, c.R21, X1, c.R),
    )


def _l_3_27(L: _Lemma):
    c = L.c
    X1, Y2 = L.at(c.X, 1), L.at(c.Y, 2)
    yield (
        "X1 R21^-1 Y2 R12^-1 = R21^-1 Y2 R12^-1 X1",
        L.mul(X1, c.R21i, Y2, c.Ri),
        L.mul(c.R21i, Y2, c.Ri, X1),
    )


def closed_form_x12(L: _Lemma, i: int = 1, j: int = 2) -> LegMatrix:
    """``R_ij X_j R_ji - g X_i R_ij P_ij X_i + g p R_ij X_j K_ji P_ij X_j R_ji``."""
    c = L.c
    Rij, Rji = L.at(c.R, i, j), L.at(c.R, j, i)
    Kji, Pij = L.at(c.K, j, i), L.at(c.P, i, j)
    Xi, Xj = L.at(c.X, i), L.at(c.X, j)
    t1 = L.mul(Rij, Xj, Rji)
    t2 = L.mul(Xi, Rij, Pij, Xi).scale(c.gamma)
    t3 = L.mul(Rij, Xj, Kji, Pij, Xj, Rji).scale(c.gamma * c.p)
    return t1 - t2 + t3


def _l_5_1(L: _Lemma):
    c = L.c
    I2 = LegMatrix.identity(2, c.N)
    E2 = L.at(c.Em, 2)
    Z2 = L.at(c.Zs, 2)
    left = I2 - L.mul(I2 - E2, c.R, Z2, c.Ri)
    yield "[I - (I-E2) R12 Z*2 R12^-1] X12 = E^-_2", L.mul(left, closed_form_x12(L)), E2


def _ctx3(L: _Lemma):
    c = L.c
    a = L.at
    return dict(
        R12=a(c.R, 1, 2), R21=a(c.R, 2, 1), R13=a(c.R, 1, 3), R31=a(c.R, 3, 1),
        R23=a(c.R, 2, 3), R32=a(c.R, 3, 2),
        K21=a(c.K, 2, 1), K31=a(c.K, 3, 1),
        P12=a(c.P, 1, 2), P13=a(c.P, 1, 3), P23=a(c.P, 2, 3),
        X1=a(c.X, 1), X2=a(c.X, 2), X3=a(c.X, 3),
    )  # fmt: skip


def _l_5_7(L: _Lemma):
    m = _ctx3(L)
    A12 = closed_form_x12(L, 1, 2)
    A13 = closed_form_x12(L, 1, 3)
    yield (
        "A12 R23 A13 R32 = R23 A13 R32 A12",
        L.mul(A12, m["R23"], A13, m["R32"]),
        L.mul(m["R23"], A13, m["R32"], A12),
    )


def _sub(spec_list):
    """Build a sub-id check from ``(label, lhs_terms, rhs_terms)`` word lists."""

    def run(L: _Lemma):
        m = _ctx3(L)
        c = L.c
        scal = {"g": c.gamma, "p": c.p, "-g": -c.gamma, "1": ONE, "-1": -ONE}
        for label, lhs, rhs in spec_list:
            sides = []
            for terms in (lhs, rhs):
                acc = _zero(c, 3)
                for coef, names in terms:
                    acc = acc + L.mul(*[m[n] for n in names.split()]).scale(scal[coef])
                sides.append(acc)
            yield label, sides[0], sides[1]

    return run


_SUBIDS = {
    "5.8": [(
        "R12 X2 R21 R23 R13 X3 R31 R32 = R23 R13 X3 R31 R32 R12 X2 R21",
        [("1", "R12 X2 R21 R23 R13 X3 R31 R32")],
        [("1", "R23 R13 X3 R31 R32 R12 X2 R21")],
    )],
    "5.9a": [(
        "R12 X2 K21 P12 X2 R21 R23 X1 R13 P13 X1 R32 = 0",
        [("1", "R12 X2 K21 P12 X2 R21 R23 X1 R13 P13 X1 R32")],
        [],
    )],
    "5.9b": [(
        "R23 X1 R13 P13 X1 R32 R12 X2 K21 P12 X2 R21 = 0",
        [("1", "R23 X1 R13 P13 X1 R32 R12 X2 K21 P12 X2 R21")],
        [],
    )],
    "5.10a": [(
        "X1 R12 P12 X1 R23 R13 X3 K31 P13 X3 R31 R32 = 0",
        [("1", "X1 R12 P12 X1 R23 R13 X3 K31 P13 X3 R31 R32")],
        [],
    )],
    "5.10b": [(
        "R23 R13 X3 K31 P13 X3 R31 R32 X1 R12 P12 X1 = 0",
        [("1", "R23 R13 X3 K31 P13 X3 R31 R32 X1 R12 P12 X1")],
        [],
    )],
    "5.11": [(
        "X1 R12 P12 X1 R23 R13 X3 R31 R32 = R23 R13 X3 R31 R32 X1 R12 P12 X1",
        [("1", "X1 R12 P12 X1 R23 R13 X3 R31 R32")],
        [("1", "R23 R13 X3 R31 R32 X1 R12 P12 X1")],
    )],
    "5.12a": [(
        "[R12 X2 R21, R23 X1 R13 P13 X1 R32] = g X1 R12 R13 X2 R23 X3 (R21 P12 P13 - R32 P13 P12)",
        [("1", "R12 X2 R21 R23 X1 R13 P13 X1 R32"), ("-1", "R23 X1 R13 P13 X1 R32 R12 X2 R21")],
        [
            ("g", "X1 R12 R13 X2 R23 X3 R21 P12 P13"),
            ("-g", "X1 R12 R13 X2 R23 X3 R32 P13 P12"),
        ],
    )],
    "5.12b": [(
        "X1 R12 P12 X1 R23 X1 R13 P13 X1 R32 = X1 R12 R13 X2 R23 X3 R21 P12 P13",
        [("1", "X1 R12 P12 X1 R23 X1 R13 P13 X1 R32")],
        [("1", "X1 R12 R13 X2 R23 X3 R21 P12 P13")],
    )],
    "5.12c": [(
        "R23 X1 R13 P13 X1 R32 X1 R12 P12 X1 = X1 R12 R13 X2 R23 X3 R32 P13 P12",
        [("1", "R23 X1 R13 P13 X1 R32 X1 R12 P12 X1")],
        [("1", "X1 R12 R13 X2 R23 X3 R32 P13 P12")],
    )],
    "5.13": [(
        "R12 X2 K21 P12 X2 R21 R23 R13 X3 R31 R32 = R23 R13 X3 R31 R32 R12 X2 K21 P12 X2 R21",
        [("1", "R12 X2 K21 P12 X2 R21 R23 R13 X3 R31 R32")],
        [("1", "R23 R13 X3 R31 R32 R12 X2 K21 P12 X2 R21")],
    )],
    "5.15a": [(
        "[R12 X2 R21, R23 R13 X3 K31 P13 X3 R31 R32] = -g P23 R13 X3 K31 X2 X1 R13 R12 P13"
        " + g R23 R13 X3 K31 X2 X1 R13 P12 P13",
        [
            ("1", "R12 X2 R21 R23 R13 X3 K31 P13 X3 R31 R32"),
            ("-1", "R23 R13 X3 K31 P13 X3 R31 R32 R12 X2 R21"),
        ],
        [
            ("-g", "P23 R13 X3 K31 X2 X1 R13 R12 P13"),
            ("g", "R23 R13 X3 K31 X2 X1 R13 P12 P13"),
        ],
    )],
    "5.15b": [(
        "p R12 X2 K21 P12 X2 R21 R23 R13 X3 K31 P13 X3 R31 R32 = P23 R13 X3 K31 X2 X1 R13 R12 P13",
        [("p", "R12 X2 K21 P12 X2 R21 R23 R13 X3 K31 P13 X3 R31 R32")],
        [("1", "P23 R13 X3 K31 X2 X1 R13 R12 P13")],
    )],
    "5.15c": [(
        "p R23 R13 X3 K31 P13 X3 R31 R32 R12 X2 K21 P12 X2 R21 = R23 R13 X3 K31 X2 X1 R13 P12 P13",
        [("p", "R23 R13 X3 K31 P13 X3 R31 R32 R12 X2 K21 P12 X2 R21")],
        [("1", "R23 R13 X3 K31 X2 X1 R13 P12 P13")],
    )],
}  # fmt: skip

# (lemma function, legs, minimum truncation degree)
LEMMAS = {
    "3.2": (_l_3_2, 2, 2),
    "3.4": (_l_3_4, 1, 2),
    "3.23": (_l_3_23, 2, 2),
    "3.24": (_l_3_24, 2, 2),
    "3.25": (_l_3_25, 2, 2),
    "3.26": (_l_3_26, 2, 2),
    "3.27": (_l_3_27, 2, 2),
    "5.1": (_l_5_1, 2, 3),
    "5.2": (_l_5_7, 3, 4),
}
for _k, _v in _SUBIDS.items():
    LEMMAS[_k] = (_sub(_v), 3, 4)


@dataclass
class LemmaCheck:
    id: str
    spec: SeriesSpec
    cell: CellSplit
    d: int
    labels: list = field(default_factory=list)
    residuals: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(m.is_zero() for m in self.residuals)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def residual_entry_count(self) -> int:
        return sum(m.nnz() for m in self.residuals)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "series": self.spec.series,
            "rank": self.spec.rank,
            "r": str(self.cell.r),
            "degree": self.d,
            "status": self.status,
            "residual_entry_count": self.residual_entry_count,
        }


def verify_lemma(id: str, spec: SeriesSpec, cell: CellSplit, d: int | None = None) -> LemmaCheck:
    """Evaluate both sides of a lemma in the truncated quotient."""
    if id not in LEMMAS:
        raise KeyError(f"unknown lemma id {id!r}")
    fn, legs, need = LEMMAS[id]
    if d is None:
        d = need
    if d < need:
        raise ResourceError(f"lemma {id} needs truncation degree >= {need}, got {d}", d)
    ctx = AlgebraContext(spec, cell)
    qb = build_quotient(spec, cell, d, ctx)
    L = _Lemma(ctx, qb, legs)
    out = LemmaCheck(id, spec, cell, d)
    for label, lhs, rhs in fn(L):
        out.labels.append(label)
        out.residuals.append(qb.reduce_matrix(lhs - rhs))
    return out
