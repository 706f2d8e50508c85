"""Left action of the matrix entries ``M_ab`` on the coordinate algebra.

The action is fixed by its value on the unit,

    M . 1 = I + (xi^-1 - 1) X + (xi - 1) Y,        xi = q^(-2 sigma),

and by the recursion

    M_1 R_21^-1 . (X_2 f) = X_12 (M_1 R_21^-1 . f),

where ``X_12`` is the closed form ``R X_2 R_21 - g X_1 R P X_1 + g p R X_2 K_21 P X_2 R_21``
(``g = q - 1/q``).  Entrywise the left side is a linear system with scalar
coefficients from ``R_21^-1`` in the unknowns ``M_ae . (z*_hd f)``; the same
coefficient matrix serves every ``f``, so it is eliminated once and reused.
Redundant equations are kept as consistency conditions.

:func:`build_module` grows the cyclic span of ``1`` until it closes and
returns the operator matrices on that span.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .coordinate_algebra import (
    AlgebraContext,
    NCPoly,
    QuotientBasis,
    ResourceError,
    _Lemma,
    build_quotient,
    closed_form_x12,
)
from .linalg import NotInvertibleError, add_scaled
from .scalars import ONE, RatFunc, q_power, to_ratfunc
from .series_data import CellSplit, SeriesSpec, q_rho2
from .tensor_space import LegMatrix

__all__ = [
    "ActionTable",
    "ModuleRep",
    "ModuleNotClosedError",
    "RecursionSingularError",
    "RecursionInconsistentError",
    "seed_action",
    "extend_action",
    "build_module",
    "verify_module_relations",
    "verify_mirror",
    "check_well_defined",
    "parse_sigma",
    "block_inverse",
]

DEFAULT_MAX_DIM = 512


class ModuleNotClosedError(RuntimeError):
    pass


class RecursionSingularError(ArithmeticError):
    pass


class RecursionInconsistentError(ArithmeticError):
    pass


def parse_sigma(sigma) -> Fraction:
    """``sigma`` as a Fraction; rejects values with ``4 sigma`` not an integer."""
    s = Fraction(sigma)
    if (4 * s).denominator != 1:
        raise ValueError(f"sigma = {s}: 4*sigma must be an integer so that q^(-2 sigma) is exact")
    return s


def _nc(v) -> NCPoly:
    return v if isinstance(v, NCPoly) else NCPoly.const(v)


class ActionTable:
    """Memoized values ``M . u`` (a one-leg matrix of algebra elements) for
    standard monomials ``u``."""

    def __init__(self, spec: SeriesSpec, cell: CellSplit, sigma, degree: int):
        self.spec = spec
        self.cell = cell
        self.sigma = parse_sigma(sigma)
        self.xi = q_power(-2 * self.sigma)
        self.ctx = AlgebraContext(spec, cell)
        self.qb: QuotientBasis = build_quotient(spec, cell, degree, self.ctx)
        self.N = spec.N
        self._values: dict = {}
        self._gen_tables: dict = {}
        self._setup_system()
        self._values[()] = self._seed()

    # unit -----------------------------------------------------------------

    def _seed(self) -> LegMatrix:
        c = self.ctx
        xi = self.xi
        one = LegMatrix.identity(1, self.N).map(_nc)
        m = one + c.X.scale(xi.inverse() - ONE) + c.Y.scale(xi - ONE)
        return self.qb.reduce_matrix(m)

    # the linear system ------------------------------------------------------

    def _setup_system(self):
        spec, c = self.spec, self.ctx
        N = self.N
        r = self.cell.r
        self.upper = [i for i, lab in enumerate(spec.labels) if lab > -r]
        self.lower = [i for i, lab in enumerate(spec.labels) if lab <= -r]
        Rp = c.R21i
        self._Rp = Rp
        # unknown (e, h) -> column index; equation (b, c) -> row index
        self.unk = [(e, h) for e in range(N) for h in self.upper]
        col = {u: k for k, u in enumerate(self.unk)}
        rows = {}
        for (eb, ch), v in Rp.items():
            e, b = eb
            cc, h = ch
            if h in self.upper:
                rows.setdefault(b * N + cc, {})[col[(e, h)]] = v
        for i in range(N * N):
            rows.setdefault(i, {})
        try:
            self._solve, self._null = linalg.left_solve_plan(rows, len(self.unk))
        except NotInvertibleError as exc:
            raise RecursionSingularError(f"recursion system singular: {exc}") from None
        g = self.qb.gens
        self.gen_pos = [(spec.pos(x.row), spec.pos(x.col)) for x in g.gens]

    @property
    def X12(self) -> LegMatrix:
        if not hasattr(self, "_X12"):
            self._X12 = closed_form_x12(_Lemma(self.ctx, self.qb, 2))
        return self._X12

    def _gen_values(self, u: tuple) -> dict:
        """``{generator index: M . (z*_g u)}`` for a standard monomial ``u``."""
        if u in self._gen_tables:
            return self._gen_tables[u]
        N = self.N
        qb = self.qb
        A = self.value(u)
        # W = (A (x) I) R_21^-1, then RHS = X_12 W with algebra products
        W = A.embed(2, (1,)) * self._Rp
        rhs = qb.reduce_matrix(self.X12 * W)
        # known part of the left side: h = d <= -r
        known = qb.reduce_matrix(A.embed(2, (1,)) * self._Rp)
        Xm = self.cell.E_minus
        out: dict = {}
        for d in range(N):
            if d in self.upper:
                # no unknowns in these columns: the right side itself must vanish
                for a in range(N):
                    for b in range(N):
                        for cc in range(N):
                            v = rhs.entry((a, b), (cc, d))
                            if v is not None and not v.is_zero():
                                raise RecursionInconsistentError(
                                    f"recursion inconsistent at column {d} for word {u}"
                                )
                continue
            for a in range(N):
                vec = {}
                for b in range(N):
                    for cc in range(N):
                        v = rhs.get((a, b), (cc, d), NCPoly())
                        k = known.get((a, b), (cc, d), NCPoly()) if Xm.entry((d,), (d,)) else NCPoly()
                        w = _nc(v) - _nc(k)
                        if not w.is_zero():
                            vec[b * N + cc] = w
                for cond in self._null:
                    acc = NCPoly()
                    for i, cf in cond.items():
                        if i in vec:
                            acc = acc + vec[i].scale(cf)
                    if not acc.is_zero():
                        raise RecursionInconsistentError(
                            f"recursion inconsistent (row {a}, column {d}) for word {u}"
                        )
                for j, comb in self._solve.items():
                    acc = NCPoly()
                    for i, cf in comb.items():
                        if i in vec:
                            acc = acc + vec[i].scale(cf)
                    if acc.is_zero():
                        continue
                    e, h = self.unk[j]
                    out.setdefault((h, d), {})[(a, e)] = acc
        table = {}
        for gi, (h, d) in enumerate(self.gen_pos):
            ent = out.get((h, d), {})
            table[gi] = LegMatrix(1, N, _rows(ent))
        self._gen_tables[u] = table
        return table

    # public ---------------------------------------------------------------

    def value(self, word) -> LegMatrix:
        """``M . w`` for a word ``w`` (reduced to standard monomials first)."""
        word = tuple(word)
        if word in self._values:
            return self._values[word]
        if self.qb.is_standard(word):
            g, rest = word[0], word[1:]
            x = self.qb.normal_form(NCPoly.word(rest))
            acc = LegMatrix.zero(1, self.N)
            for u, cf in x.terms.items():
                acc = acc + self._gen_values(u)[g].scale(cf)
            self._values[word] = acc
            return acc
        return self.act(NCPoly.word(word))

    def act(self, f) -> LegMatrix:
        """``M . f`` for an algebra element ``f``."""
        f = self.qb.normal_form(_nc(f))
        acc = LegMatrix.zero(1, self.N)
        for u, cf in f.terms.items():
            acc = acc + self.value(u).scale(cf)
        return acc

    def act_entry(self, a: int, b: int, f) -> NCPoly:
        v = self.act(f).entry((a,), (b,))
        return v if v is not None else NCPoly()


def _rows(ent: dict) -> dict:
    rows: dict = {}
    for (a, e), v in ent.items():
        if not v.is_zero():
            rows.setdefault(a, {})[e] = v
    return rows


def seed_action(spec: SeriesSpec, cell: CellSplit, sigma, degree: int | None = None) -> ActionTable:
    """Action table holding ``M . 1`` (later values are computed on demand)."""
    s = parse_sigma(sigma)
    if degree is None:
        degree = max(2, int(2 * abs(s)) + 2)
    return ActionTable(spec, cell, s, degree)


def extend_action(table: ActionTable, degree: int) -> ActionTable:
    """Fill in ``M . w`` for every standard monomial of length ``<= degree``."""
    for k in range(1, degree + 1):
        for w in table.qb.standard_monomials(k):
            table.value(w)
    return table


# the cyclic module ------------------------------------------------------------------


class _SpanTracker:
    """Row echelon of vectors with coordinates relative to the inserted vectors."""

    def __init__(self, key):
        self.key = key
        self.rows: dict = {}  # pivot -> (row, coords)

    def reduce(self, vec: dict):
        vec = dict(vec)
        coords: dict = {}
        for p in [p for p in vec if p in self.rows]:
            c = vec.get(p)
            if c is None:
                continue
            row, rc = self.rows[p]
            add_scaled(vec, row, -c)
            add_scaled(coords, rc, c)
        return vec, coords

    def add(self, vec: dict, index: int) -> None:
        rest, coords = self.reduce(vec)
        # rest = vec - sum coords * basis, so rest has coordinates e_index - coords
        rc = {index: ONE}
        add_scaled(rc, coords, -ONE)
        p = max(rest, key=self.key)
        inv = rest[p].inverse()
        rest = {k: v * inv for k, v in rest.items()}
        rc = {k: v * inv for k, v in rc.items()}
        for q, (row, c2) in self.rows.items():
            f = row.get(p)
            if f is not None:
                add_scaled(row, rest, -f)
                add_scaled(c2, rc, -f)
        self.rows[p] = (rest, rc)


@dataclass
class ModuleRep:
    spec: SeriesSpec
    cell: CellSplit
    sigma: Fraction
    basis: list
    ops: dict
    weights: list
    degrees: list
    table: ActionTable = field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def op(self, a, b) -> LegMatrix:
        """Operator of ``M_ab`` (label or position arguments accepted as labels)."""
        return self.ops[(self.spec.pos(a), self.spec.pos(b))]

    def block_matrix(self) -> LegMatrix:
        """``M`` as an ``N x N`` matrix of ``m x m`` operator blocks."""
        rows: dict = {}
        for (a, b), m in self.ops.items():
            if not m.is_zero():
                rows.setdefault(a, {})[b] = m
        return LegMatrix(1, self.spec.N, rows)

    def unit_diagonal(self) -> list:
        """``M_jj . 1`` as scalars, in label order."""
        out = []
        for j in range(self.spec.N):
            v = self.ops[(j, j)].entry((0,), (0,))
            out.append(v if v is not None else to_ratfunc(0))
        return out

    def to_json(self) -> dict:
        g = self.table.qb.gens if self.table else None
        return {
            "series": self.spec.series,
            "rank": self.spec.rank,
            "r": str(self.cell.r),
            "sigma": str(self.sigma),
            "dimension": self.dim,
            "graded_dimensions": [self.degrees.count(k) for k in range(max(self.degrees) + 1)],
            "basis": [b.to_string(g) for b in self.basis],
            "weights": [list(w) for w in self.weights],
            "degrees": list(self.degrees),
        }


def expected_unit_diagonal(spec: SeriesSpec, cell: CellSplit, sigma) -> list:
    """``M_jj . 1`` in label order: ``q^(2 sigma)`` below the cell, ``q^(-2 sigma)`` above, 1 between."""
    s = parse_sigma(sigma)
    out = []
    for lab in spec.labels:
        blk = cell.block(lab)
        out.append(q_power(2 * s) if blk == "-" else q_power(-2 * s) if blk == "+" else ONE)
    return out


def _weight_of(qb: QuotientBasis, v: NCPoly):
    ws = {qb.gens.word_weight(w) for w in v.terms}
    if len(ws) != 1:
        raise ArithmeticError("module vector is not a weight vector")
    return ws.pop()


def build_module(
    spec: SeriesSpec,
    cell: CellSplit,
    sigma,
    max_dim: int = DEFAULT_MAX_DIM,
    max_degree: int | None = None,
) -> ModuleRep:
    """Cyclic span of ``1`` under all ``M_ab`` with its operator matrices.

    Raises :class:`ModuleNotClosedError` ("module did not close") when the
    span outgrows ``max_dim`` vectors or ``max_degree`` word length.
    """
    s = parse_sigma(sigma)
    if max_degree is None:
        # admissible modules top out at degree rank * sigma (C series, r = 1/2)
        max_degree = int(max(2, spec.rank) * abs(s)) + 4
    degree = max(2, int(2 * abs(s)) + 2)
    while True:
        table = ActionTable(spec, cell, s, degree)
        try:
            return _close(table, max_dim, max_degree)
        except ResourceError:
            # a needed weight block lies above the current truncation
            if degree >= max_degree + 2:
                raise ModuleNotClosedError(
                    f"module did not close within degree budget {max_degree}"
                ) from None
            degree += 2


def _close(table: ActionTable, max_dim: int, max_degree: int) -> ModuleRep:
    N = table.N
    qb = table.qb
    span = _SpanTracker(lambda w: (len(w), w))
    basis: list[NCPoly] = []

    def insert(v: NCPoly):
        if v.degree() > max_degree:
            raise ModuleNotClosedError(
                f"module did not close: vector of degree {v.degree()} exceeds budget {max_degree}"
            )
        if len(basis) >= max_dim:
            raise ModuleNotClosedError(f"module did not close within dimension budget {max_dim}")
        span.add(v.terms, len(basis))
        basis.append(v)

    insert(NCPoly.const(1))
    images: list = []
    k = 0
    while k < len(basis):
        img = table.act(basis[k])
        images.append(img)
        for (_ab, v) in img.items():
            rest, _ = span.reduce(v.terms)
            if rest:
                insert(NCPoly(rest))
        k += 1
    m = len(basis)
    ops = {(a, b): {} for a in range(N) for b in range(N)}
    for j, img in enumerate(images):
        for ((a,), (b,)), v in img.items():
            rest, coords = span.reduce(v.terms)
            if rest:
                raise ArithmeticError("closure bookkeeping failed")
            for i, cf in coords.items():
                ops[(a, b)].setdefault(i, {})[j] = cf
    ops = {ab: LegMatrix(1, m, rows) for ab, rows in ops.items()}
    weights = [_weight_of(qb, v) for v in basis]
    degrees = [v.degree() for v in basis]
    return ModuleRep(table.spec, table.cell, table.sigma, basis, ops, weights, degrees, table)


# relation checks ----------------------------------------------------------------------


def _flat(blk: LegMatrix, m: int) -> dict:
    rows: dict = {}
    for a, r in blk.rows.items():
        for b, op in r.items():
            if isinstance(op, RatFunc):
                op = LegMatrix.identity(1, m, op)
            for i, orow in op.rows.items():
                tgt = rows.setdefault(a * m + i, {})
                for j, v in orow.items():
                    tgt[b * m + j] = v
    return rows


def _unflat(rows: dict, N: int, m: int) -> LegMatrix:
    blocks: dict = {}
    for I, r in rows.items():
        a, i = divmod(I, m)
        for J, v in r.items():
            b, j = divmod(J, m)
            blocks.setdefault((a, b), {}).setdefault(i, {})[j] = v
    out: dict = {}
    for (a, b), br in blocks.items():
        out.setdefault(a, {})[b] = LegMatrix(1, m, br)
    return LegMatrix(1, N, out)


def block_inverse(blk: LegMatrix, m: int) -> LegMatrix:
    """Inverse of an ``N x N`` matrix of ``m x m`` blocks."""
    N = blk.dim
    inv = linalg.inverse(_flat(blk, m), N * m)
    return _unflat(inv, N, m)


@dataclass
class RelationReport:
    results: dict = field(default_factory=dict)  # id -> residual entry count (None if not run)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v == 0 for v in self.results.values())

    def to_json(self) -> dict:
        return {
            k: {"status": "pass" if v == 0 else "fail", "residual_entry_count": v}
            for k, v in self.results.items()
        }


def _count(m: LegMatrix) -> int:
    n = 0
    for r in m.rows.values():
        for v in r.values():
            n += v.nnz() if isinstance(v, LegMatrix) else 1
    return n


def verify_module_relations(rep: ModuleRep) -> RelationReport:
    """Check the defining relations of the operator matrix exactly."""
    spec = rep.spec
    N, m = spec.N, rep.dim
    c = rep.table.ctx
    M = rep.block_matrix()
    M1, M2 = M.embed(2, (1,)), M.embed(2, (2,))
    rep_out = RelationReport()
    lhs = M2 * c.Ri * M1 * c.R21i
    rhs = c.Ri * M1 * c.R21i * M2
    rep_out.results["2.32"] = _count(lhs - rhs)
    try:
        Minv = block_inverse(M, m)
    except NotInvertibleError:
        rep_out.results["2.33"] = None
        rep_out.results["2.35"] = None
        rep_out.notes["2.33"] = "operator matrix not invertible"
        Minv = None
    e = spec.eps
    if Minv is not None:
        lhs = M1 * c.K
        rhs = (c.R * Minv.embed(2, (2,)) * c.P * c.K).scale(q_power(N - e) * e)
        rep_out.results["2.33"] = _count(lhs - rhs)
    q2r = q_rho2(spec)
    tr = (q2r * M).trace()
    tr = tr if isinstance(tr, LegMatrix) else LegMatrix.identity(1, m, tr)
    c0 = tr.entry((0,), (0,))
    c0 = c0 if c0 is not None else to_ratfunc(0)
    rep_out.results["2.34"] = _count(tr - LegMatrix.identity(1, m, c0))
    rep_out.notes["2.34"] = str(c0)
    if Minv is not None:
        tri = (q2r * Minv).trace()
        tri = tri if isinstance(tri, LegMatrix) else LegMatrix.identity(1, m, tri)
        rep_out.results["2.35"] = _count(tr - tri)
    return rep_out


def verify_mirror(table: ActionTable, f=None) -> int:
    """Residual count of the mirror recursion ``M_1 R_21^-1 . (Y_2 f) = Y_12 (M_1 R_21^-1 . f)``.

    ``Y_12`` is the closed form in the ``Y`` matrix.  ``Y`` is linear in the
    generators, so the left side comes from values already in the table.
    """
    f = NCPoly.const(1) if f is None else _nc(f)
    c = table.ctx
    qb = table.qb
    N = table.N
    L = _Lemma(c, qb, 2)
    Y1, Y2 = c.Y.embed(2, (1,)), c.Y.embed(2, (2,))
    p_inv = c.p.inverse()
    # P^+_2 [I - R V*_2 R^-1 (I - P^+_2)]^-1 in closed form
    Y12 = (
        L.mul(c.R21i, Y2, c.Ri)
        + L.mul(Y1, c.R21i, c.P, Y1).scale(c.gamma)
        - L.mul(c.R21i, Y2, c.K21, c.P, Y2, c.Ri).scale(c.gamma * p_inv)
    )
    A = table.act(f)
    W = A.embed(2, (1,)) * c.R21i
    rhs = qb.reduce_matrix(Y12 * W)
    # left side entry (ab, cd) = sum_{e,h} (R21^-1)_{eb,ch} M_ae . (Y_hd f)
    Yf = {}
    for (h,), (d,) in [(k[0], k[1]) for k, _ in c.Y.items()]:
        Yf[(h, d)] = table.act(qb.normal_form(_nc(c.Y.entry((h,), (d,))) * f))
    ent = {}
    for (eb, ch), rv in c.R21i.items():
        e, b = eb
        cc, h = ch
        for d in range(N):
            mv = Yf.get((h, d))
            if mv is None:
                continue
            for a in range(N):
                x = mv.entry((a,), (e,))
                if x is None:
                    continue
                key = ((a, b), (cc, d))
                ent[key] = ent.get(key, NCPoly()) + x.scale(rv)
    lhs = LegMatrix.from_entries(2, N, {k: v for k, v in ent.items() if not v.is_zero()})
    return _count(qb.reduce_matrix(lhs - rhs))


def check_well_defined(table: ActionTable, degree: int) -> int:
    """Compare ``M . (g u)`` from the recursion with ``M . NF(g u)``.

    For every standard ``u`` of length ``< degree`` and every generator ``g``
    the recursion gives ``M . (g u)`` directly; rewriting ``g u`` in standard
    monomials first and acting term by term must give the same matrix.
    Returns the number of mismatching entries.
    """
    bad = 0
    qb = table.qb
    for k in range(degree):
        for u in qb.standard_monomials(k):
            tab = table._gen_values(u)
            for g in range(len(qb.gens)):
                direct = tab[g]
                via = LegMatrix.zero(1, table.N)
                for w, cf in qb.normal_form(NCPoly.word((g,) + u)).terms.items():
                    via = via + table.value(w).scale(cf)
                bad += (direct - via).nnz()
    return bad
