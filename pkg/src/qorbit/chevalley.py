"""Chevalley generators on a module, weight bookkeeping and the scalar ansatz.

The operator matrix ``M`` of a module is factored as ``L . diag(Delta) . U``
with unit triangular ``L``, ``U`` over ``m x m`` operator blocks.  Writing
``M = Lambda* Lambda`` with ``Lambda`` upper triangular and positive diagonal
``alpha_jj`` gives ``Delta_j = alpha_jj^2`` and ``alpha_jk = alpha_jj U_jk``;
the lower factor carries the starred entries, ``alpha_kj* = L_jk alpha_kk``.
From these the Cartan elements ``q^H_j`` and the scaled root vectors are
assembled.

Relation conventions (fixed here, checked by :func:`verify_uh_relations`):

* ``K_i = q^H_i`` and ``K_i X_j^+- K_i^-1 = q^(+-<a_i,a_j>) X_j^+-``;
* ``[X_i^+, X_j^-] = delta_ij (K_i - K_i^-1) / (q - q^-1)`` for the
  unscaled generators, the same denominator on every node (the ``q_i``
  version is available as ``convention="root-length"`` but does not hold
  on the short B node or the long C node);
* quantum Serre relations with ``q_i``-binomials, ``q_i = q^(<a_i,a_i>/2)``.

Root lengths follow the normalization where ``B`` has ``<a_1,a_1> = 1``,
``C`` has ``<a_1,a_1> = 4`` and all other simple roots have length 2.  Node 1
is the short (B) or long (C) root; in ``D`` nodes 1 and 2 both attach to
node 3.  In terms of the usual Bourbaki numbering this is the reversed order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import flint

from . import linalg
from .linalg import NotInvertibleError
from .module_action import ModuleRep, parse_sigma
from .scalars import ONE, ZERO, IrrationalSqrtError, RatFunc, q_power, sqrt_monomial, to_ratfunc
from .series_data import CellSplit, SeriesSpec
from .tensor_space import LegMatrix

__all__ = [
    "DecompositionError",
    "NonMonomialCartanError",
    "NonGenericError",
    "InadmissibleError",
    "GaussFactors",
    "ChevalleyRep",
    "UhReport",
    "WeightRule",
    "AnsatzSolution",
    "gauss_decompose",
    "extract_generators",
    "verify_uh_relations",
    "lowest_weight_checks",
    "admissible_sigma",
    "expected_cartan_on_unit",
    "root_pairing",
    "commutator_factor",
    "CONVENTIONS",
    "weyl_dimension",
    "solve_ansatz",
    "representation_report",
]


class DecompositionError(ArithmeticError):
    """Singular leading block minor."""


class NonMonomialCartanError(ArithmeticError):
    """A diagonal Gauss block has an entry without a monomial square root."""


class NonGenericError(ArithmeticError):
    """The ansatz system degenerates at the requested parameters."""


class InadmissibleError(ValueError):
    pass


# small helpers on diagonal operators, stored as lists of RatFunc ------------------


def _diag(values) -> LegMatrix:
    return LegMatrix.diagonal(len(values), values)


def _dmul(a, b):
    return [x * y for x, y in zip(a, b)]


def _dinv(a):
    return [x.inverse() for x in a]


def _dsqrt(a, what: str):
    try:
        return [sqrt_monomial(x) for x in a]
    except IrrationalSqrtError as exc:
        raise NonMonomialCartanError(f"non-monomial Cartan eigenvalue in {what}: {exc}") from None


def _lmul(d, blk: LegMatrix) -> LegMatrix:
    """``diag(d) . blk``"""
    rows = {}
    for i, r in blk.rows.items():
        rows[i] = {j: d[i] * v for j, v in r.items()}
    return LegMatrix(1, blk.dim, rows)


def _rmul(blk: LegMatrix, d) -> LegMatrix:
    """``blk . diag(d)``"""
    rows = {}
    for i, r in blk.rows.items():
        rows[i] = {j: v * d[j] for j, v in r.items()}
    return LegMatrix(1, blk.dim, rows)


def _count(m: LegMatrix) -> int:
    return m.nnz()


# Gauss decomposition -----------------------------------------------------------------


@dataclass
class GaussFactors:
    spec: SeriesSpec
    cell: CellSplit
    m: int
    delta: dict  # position -> m x m block
    lower: dict  # (i, k), i > k -> block
    upper: dict  # (k, j), k < j -> block
    residual: int = 0

    def block(self, which: str, a, b) -> LegMatrix:
        """Block of ``L`` or ``U`` at labels ``a``, ``b`` (zero when absent)."""
        src = self.lower if which == "L" else self.upper
        i, j = self.spec.pos(a), self.spec.pos(b)
        return src.get((i, j), LegMatrix.zero(1, self.m))

    def delta_diagonal(self, label) -> list:
        """Diagonal entries of ``Delta`` at ``label``; it must be diagonal."""
        blk = self.delta[self.spec.pos(label)]
        out = []
        for i in range(self.m):
            r = blk.rows.get(i, {})
            if any(j != i for j in r):
                raise NonMonomialCartanError(f"Delta at label {label} is not diagonal")
            out.append(r.get(i, ZERO))
        return out

    def alpha_diagonal(self, label) -> list:
        return _dsqrt(self.delta_diagonal(label), f"alpha at label {label}")

    def alpha(self, a, b) -> LegMatrix:
        """Upper entry ``alpha_ab = alpha_aa U_ab`` for ``a < b``."""
        return _lmul(self.alpha_diagonal(a), self.block("U", a, b))

    def alpha_star(self, a, b) -> LegMatrix:
        """``(alpha_ab)* = L_ba alpha_aa`` for ``a < b``."""
        return _rmul(self.block("L", b, a), self.alpha_diagonal(a))


def gauss_decompose(rep: ModuleRep) -> GaussFactors:
    """Block LDU factorization of the module's operator matrix.

    Labels are processed in ascending order.  Raises
    :class:`DecompositionError` ("decomposition failed") on a singular
    leading block minor.
    """
    spec, m = rep.spec, rep.dim
    N = spec.N
    zero = LegMatrix.zero(1, m)
    S = {ab: blk for ab, blk in rep.ops.items() if not blk.is_zero()}
    delta, lower, upper = {}, {}, {}
    for k in range(N):
        dk = S.get((k, k), zero)
        try:
            dinv = dk.inverse()
        except NotInvertibleError:
            raise DecompositionError(
                f"decomposition failed: singular pivot block at label {spec.labels[k]}"
            ) from None
        delta[k] = dk
        col = {i: S[(i, k)] * dinv for i in range(k + 1, N) if (i, k) in S}
        row = {j: dinv * S[(k, j)] for j in range(k + 1, N) if (k, j) in S}
        lower.update({(i, k): v for i, v in col.items() if not v.is_zero()})
        upper.update({(k, j): v for j, v in row.items() if not v.is_zero()})
        for i, li in col.items():
            for j in range(k + 1, N):
                skj = S.get((k, j))
                if skj is None:
                    continue
                new = S.get((i, j), zero) - li * skj
                if new.is_zero():
                    S.pop((i, j), None)
                else:
                    S[(i, j)] = new
    out = GaussFactors(spec, rep.cell, m, delta, lower, upper)
    out.residual = _reassembly_residual(out, rep)
    return out


def _reassembly_residual(f: GaussFactors, rep: ModuleRep) -> int:
    N, m = f.spec.N, f.m
    zero = LegMatrix.zero(1, m)
    eye = LegMatrix.identity(1, m)
    bad = 0
    for a in range(N):
        for b in range(N):
            acc = zero
            for k in range(min(a, b) + 1):
                lk = eye if k == a else f.lower.get((a, k))
                uk = eye if k == b else f.upper.get((k, b))
                if lk is None or uk is None:
                    continue
                acc = acc + lk * f.delta[k] * uk
            bad += _count(acc - rep.ops[(a, b)])
    return bad


# generators -------------------------------------------------------------------------


@dataclass
class ChevalleyRep:
    spec: SeriesSpec
    cell: CellSplit
    m: int
    cartan: list  # node -> diagonal list
    lowering: list  # node -> block (scaled)
    raising: list
    s_squared: list
    alpha00: list | None = None

    @property
    def rank(self) -> int:
        return len(self.cartan)

    def K(self, i: int) -> LegMatrix:
        """``q^H_i`` for node ``i`` (1-based)."""
        return _diag(self.cartan[i - 1])

    def Xm(self, i: int) -> LegMatrix:
        return self.lowering[i - 1]

    def Xp(self, i: int) -> LegMatrix:
        return self.raising[i - 1]

    def cartan_on_unit(self) -> list:
        return [k[0] for k in self.cartan]


def _gamma():
    return q_power(1) - q_power(-1)


def _pair(f: GaussFactors, a, b, pre):
    """Lowering and raising pieces ``pre . alpha_ab`` and ``alpha_ab* . pre``."""
    return _lmul(pre, f.alpha(a, b)), _rmul(f.alpha_star(a, b), pre)


def extract_generators(factors: GaussFactors, spec: SeriesSpec | None = None) -> ChevalleyRep:
    """Cartan elements and scaled root vectors from the Gauss factors."""
    f = factors
    spec = spec or f.spec
    l, m = spec.rank, f.m
    ginv = _gamma().inverse()
    H = Fraction(1, 2)
    a = f.alpha_diagonal
    cartan, low, high, s2 = [], [], [], []
    alpha00 = None

    def chain(prev_label, cur_label):
        prev, cur = a(prev_label), a(cur_label)
        root = _dsqrt(_dmul(prev, cur), f"node product at {prev_label},{cur_label}")
        pre = [q_power(-H) * ginv * x for x in _dinv(root)]
        lo, hi = _pair(f, prev_label, cur_label, pre)
        return _dmul(_dinv(prev), cur), lo, hi

    if spec.series == "B":
        alpha00 = a(0)
        for j in range(1, l + 1):
            if j == 1:
                # alpha_00 = 1, so alpha_01 = U_01
                cur = a(1)
                pre = [q_power(-H) * ginv * x for x in _dinv(_dsqrt(cur, "node 1"))]
                lo = _lmul(pre, f.block("U", 0, 1))
                hi = _rmul(f.block("L", 1, 0), pre)
                K = cur
            else:
                K, lo, hi = chain(j - 1, j)
            cartan.append(K)
            low.append(lo)
            high.append(hi)
            s2.append(ONE)
    elif spec.series == "C":
        for j in range(1, l + 1):
            if j == 1:
                K = _dmul(a(H), a(H))
                pre = [q_power(-1) * ginv] * m
                lo, hi = _pair(f, -H, H, pre)
                s = (q_power(1) + q_power(-1)).inverse()
            else:
                K, lo, hi = chain(j - Fraction(3, 2), j - H)
                s = ONE
            cartan.append(K)
            low.append(lo)
            high.append(hi)
            s2.append(s)
    elif spec.series == "D":
        for j in range(1, l + 1):
            if j == 1:
                a1, a3 = a(H), a(Fraction(3, 2))
                K = _dmul(a1, a3)
                ratio = _dsqrt(_dmul(a1, _dinv(a3)), "node 1 ratio")
                pre = [q_power(-H) * ginv * x for x in ratio]
                lo, hi = _pair(f, -H, Fraction(3, 2), pre)
            else:
                K, lo, hi = chain(j - Fraction(3, 2), j - H)
            cartan.append(K)
            low.append(lo)
            high.append(hi)
            s2.append(ONE)
    else:
        raise ValueError(f"unknown series {spec.series!r}")
    return ChevalleyRep(spec, f.cell, m, cartan, low, high, s2, alpha00)


def d_series_null_block(factors: GaussFactors) -> int:
    """Entries of ``alpha_{-1/2,1/2}`` (must vanish for D)."""
    H = Fraction(1, 2)
    return _count(factors.alpha(-H, H))


# root data ----------------------------------------------------------------------------


def _simple_roots(series: str, l: int):
    """Simple roots in the orthonormal basis, in node order 1..l.

    Node ``j`` here is Bourbaki node ``l + 1 - j``.
    """
    def e(i):
        v = [Fraction(0)] * l
        v[i] = Fraction(1)
        return v

    def sub(u, v):
        return [x - y for x, y in zip(u, v)]

    bourbaki = [sub(e(i), e(i + 1)) for i in range(l - 1)]
    if series == "B":
        bourbaki.append(e(l - 1))
    elif series == "C":
        bourbaki.append([2 * x for x in e(l - 1)])
    elif series == "D":
        if l < 2:
            raise ValueError("D needs rank >= 2")
        bourbaki.append([x + y for x, y in zip(e(l - 2), e(l - 1))])
    else:
        raise ValueError(f"unknown series {series!r}")
    return bourbaki[::-1]


def _dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def root_pairing(spec: SeriesSpec) -> list:
    """``<a_i, a_j>`` for nodes ``i, j = 1..l`` (0-based lists)."""
    roots = _simple_roots(spec.series, spec.rank)
    return [[_dot(u, v) for v in roots] for u in roots]


def _positive_roots(series: str, l: int):
    out = []
    for i, j in combinations(range(l), 2):
        for s in (-1, 1):
            v = [Fraction(0)] * l
            v[i], v[j] = Fraction(1), Fraction(s)
            out.append(v)
    for i in range(l):
        v = [Fraction(0)] * l
        if series == "B":
            v[i] = Fraction(1)
            out.append(v)
        elif series == "C":
            v[i] = Fraction(2)
            out.append(v)
    return out


def _fundamental_weights(series: str, l: int):
    """Bourbaki-ordered fundamental weights in the orthonormal basis."""
    out = []
    for i in range(1, l + 1):
        w = [Fraction(1) if k < i else Fraction(0) for k in range(l)]
        out.append(w)
    half = Fraction(1, 2)
    if series == "B":
        out[l - 1] = [half] * l
    elif series == "D":
        out[l - 1] = [half] * l
        if l >= 2:
            out[l - 2] = [half] * (l - 1) + [-half]
    return out


def weyl_dimension(spec: SeriesSpec, highest_weight) -> int:
    """Dimension of the irreducible module with the given highest weight.

    ``highest_weight`` lists coordinates in the fundamental weights, node
    order as in this module.  Classical product over positive roots.
    """
    l = spec.rank
    hw = [Fraction(c) for c in highest_weight]
    if len(hw) != l:
        raise ValueError(f"need {l} coordinates, got {len(hw)}")
    if any(c < 0 or c.denominator != 1 for c in hw):
        raise ValueError(f"weight {highest_weight} is not dominant integral")
    fund = _fundamental_weights(spec.series, l)[::-1]
    lam = [sum(c * w[k] for c, w in zip(hw, fund)) for k in range(l)]
    rho = [sum(w[k] for w in fund) for k in range(l)]
    num = den = Fraction(1)
    for a in _positive_roots(spec.series, l):
        num *= _dot([x + y for x, y in zip(lam, rho)], a)
        den *= _dot(rho, a)
    d = num / den
    assert d.denominator == 1
    return int(d)


@dataclass(frozen=True)
class WeightRule:
    """Admissible ``sigma`` and the lowest weight ``-sigma * direction``."""

    series: str
    rank: int
    r: Fraction
    step: Fraction
    direction: tuple

    def admits(self, sigma) -> bool:
        s = parse_sigma(sigma)
        return s >= 0 and (s / self.step).denominator == 1

    def lowest_weight(self, sigma) -> tuple:
        s = parse_sigma(sigma)
        return tuple(-s * c for c in self.direction)

    def to_json(self) -> dict:
        return {
            "lattice": "1/2 Z+" if self.step == Fraction(1, 2) else "Z+",
            "direction": list(self.direction),
        }


def admissible_sigma(spec: SeriesSpec, cell: CellSplit) -> WeightRule:
    l, r = spec.rank, Fraction(cell.r)
    if r not in spec.valid_r():
        raise InadmissibleError(f"r={r} is not valid for {spec.name}")
    d = [0] * l
    half = Fraction(1, 2)
    step = Fraction(1)
    if spec.series == "B":
        if r == 1:
            d[0], step = 2, half
        else:
            d[int(r) - 1] = 1
    elif spec.series == "C":
        d[int(r + half) - 1] = 1
    else:
        if r == half:
            d[0], step = 2, half
        elif r == Fraction(3, 2):
            d[0] = d[1] = 1
        else:
            d[int(r + half) - 1] = 1
    return WeightRule(spec.series, l, r, step, tuple(d))


def expected_cartan_on_unit(spec: SeriesSpec, cell: CellSplit, sigma) -> list:
    """``q^H_j . 1`` for each node, read off the lowest-weight tables."""
    s = parse_sigma(sigma)
    l, r = spec.rank, Fraction(cell.r)
    half = Fraction(1, 2)
    out = [ONE] * l
    if spec.series == "B":
        out[int(r) - 1] = q_power(-s)
    elif spec.series == "C":
        if r == half:
            out[0] = q_power(-2 * s)
        else:
            out[int(r + half) - 1] = q_power(-s)
    else:
        if r == half:
            out[0] = q_power(-2 * s)
        elif r == Fraction(3, 2):
            out[0] = out[1] = q_power(-s)
        else:
            out[int(r + half) - 1] = q_power(-s)
    return out


# relation checks ----------------------------------------------------------------------


@dataclass
class UhReport:
    residuals: dict = field(default_factory=dict)  # relation id -> nonzero entry count

    @property
    def passed(self) -> bool:
        return all(v == 0 for v in self.residuals.values())

    def failures(self) -> list:
        return [k for k, v in self.residuals.items() if v]

    def to_json(self) -> dict:
        return {k: ("pass" if v == 0 else f"fail ({v})") for k, v in self.residuals.items()}


def _conj(K, X: LegMatrix) -> LegMatrix:
    rows = {}
    for i, r in X.rows.items():
        rows[i] = {j: K[i] * v * K[j].inverse() for j, v in r.items()}
    return LegMatrix(1, X.dim, rows)


def _qi_num(n: int, qi_exp: Fraction) -> RatFunc:
    a, b = q_power(n * qi_exp), q_power(-n * qi_exp)
    return (a - b) / (q_power(qi_exp) - q_power(-qi_exp))


def _qi_binom(n: int, k: int, qi_exp: Fraction) -> RatFunc:
    out = ONE
    for i in range(k):
        out = out * _qi_num(n - i, qi_exp) / _qi_num(i + 1, qi_exp)
    return out


def _power(X: LegMatrix, n: int) -> LegMatrix:
    out = LegMatrix.identity(1, X.dim)
    for _ in range(n):
        out = out * X
    return out


CONVENTIONS = ("uniform", "root-length")


def _cartan_term(rep: ChevalleyRep, i: int, convention: str) -> LegMatrix:
    """Right side of the diagonal commutator for the scaled generators."""
    B = root_pairing(rep.spec)
    K = rep.cartan[i - 1]
    s2 = rep.s_squared[i - 1]
    if convention == "uniform":
        den, c = q_power(1) - q_power(-1), s2.inverse()
    elif convention == "root-length":
        qi = B[i - 1][i - 1] / 2
        den, c = q_power(qi) - q_power(-qi), s2
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return (_diag(K) - _diag(_dinv(K))).scale(c / den)


def commutator_factor(rep: ChevalleyRep, i: int):
    """``c`` with ``[X~_i^+, X~_i^-] = c (K_i - K_i^-1)``, or None if no such scalar."""
    K = rep.cartan[i - 1]
    comm = rep.Xp(i) * rep.Xm(i) - rep.Xm(i) * rep.Xp(i)
    cart = _diag(K) - _diag(_dinv(K))
    if cart.is_zero():
        return None if not comm.is_zero() else ZERO
    (a, b), v = next(iter(cart.items()))
    c = (comm.entry(a, b) or ZERO) / v
    return c if (comm - cart.scale(c)).is_zero() else None


def verify_uh_relations(rep: ChevalleyRep, spec: SeriesSpec | None = None, convention: str = "uniform") -> UhReport:
    """Residual entry counts for conjugation, commutator and Serre relations.

    ``convention`` fixes the diagonal commutator of the unscaled generators:
    ``"uniform"`` is ``(K_i - K_i^-1)/(q - q^-1)``, so the scaled generators
    pick up ``1/s_i^2``; ``"root-length"`` is ``(K_i - K_i^-1)/(q_i - q_i^-1)``
    with the factor ``s_i^2``.  The modules built here satisfy the first.
    """
    spec = spec or rep.spec
    B = root_pairing(spec)
    l = rep.rank
    rep_out = UhReport()
    res = rep_out.residuals
    for i in range(1, l + 1):
        K = rep.cartan[i - 1]
        for j in range(1, l + 1):
            b = B[i - 1][j - 1]
            res[f"conj+({i},{j})"] = _count(_conj(K, rep.Xp(j)) - rep.Xp(j).scale(q_power(b)))
            res[f"conj-({i},{j})"] = _count(_conj(K, rep.Xm(j)) - rep.Xm(j).scale(q_power(-b)))
    for i in range(1, l + 1):
        cart = _cartan_term(rep, i, convention)
        for j in range(1, l + 1):
            comm = rep.Xp(i) * rep.Xm(j) - rep.Xm(j) * rep.Xp(i)
            if i == j:
                comm = comm - cart
            res[f"comm({i},{j})"] = _count(comm)
    for i in range(1, l + 1):
        qi = B[i - 1][i - 1] / 2
        for j in range(1, l + 1):
            if i == j:
                continue
            aij = 2 * B[i - 1][j - 1] / B[i - 1][i - 1]
            n = int(1 - aij)
            for sign, get in (("+", rep.Xp), ("-", rep.Xm)):
                Xi, Xj = get(i), get(j)
                acc = LegMatrix.zero(1, rep.m)
                for k in range(n + 1):
                    term = _power(Xi, n - k) * Xj * _power(Xi, k)
                    c = _qi_binom(n, k, qi)
                    acc = acc + term.scale(c if k % 2 == 0 else -c)
                res[f"serre{sign}({i},{j})"] = _count(acc)
    return rep_out


def _rank(rows: list) -> int:
    ech = linalg.RowEchelon()
    return sum(1 for r in rows if r and ech.add(r))


@dataclass
class LowestWeightReport:
    lowering_kills_unit: bool
    joint_kernel_dim: int
    cartan_on_unit: list
    expected_on_unit: list
    weight_offsets: list  # per basis vector, simple-root multiplicities
    weights_ok: bool

    @property
    def passed(self) -> bool:
        return (
            self.lowering_kills_unit
            and self.joint_kernel_dim == 1
            and self.cartan_on_unit == self.expected_on_unit
            and self.weights_ok
        )


def lowest_weight_checks(chev: ChevalleyRep, sigma) -> LowestWeightReport:
    spec, cell, m = chev.spec, chev.cell, chev.m
    kills = all(not any(0 in r for r in X.rows.values()) for X in chev.lowering)
    # rows of the stacked lowering operators, as rows of a (l*m) x m matrix
    rows = []
    for X in chev.lowering:
        rows.extend(dict(r) for r in X.rows.values())
    kernel = m - _rank(rows)
    lam = admissible_sigma(spec, cell).lowest_weight(sigma)
    B = root_pairing(spec)
    l = spec.rank
    lam_h = [lam[i] * B[i][i] / 2 for i in range(l)]
    offsets, ok = [], True
    for v in range(m):
        d = []
        for i in range(l):
            c, e = chev.cartan[i][v].monomial_data()
            if c != 1:
                ok = False
            d.append(Fraction(e, 4) - lam_h[i])
        n = _solve_fractions(B, d)
        offsets.append(n)
        if any(x < 0 or x.denominator != 1 for x in n):
            ok = False
    return LowestWeightReport(
        kills,
        kernel,
        chev.cartan_on_unit(),
        expected_cartan_on_unit(spec, cell, sigma),
        offsets,
        ok,
    )


def _solve_fractions(A, b):
    n = len(b)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        p = next(i for i in range(c, n) if M[i][c] != 0)
        M[c], M[p] = M[p], M[c]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [M[i][n] / M[i][i] for i in range(n)]


# scalar ansatz ------------------------------------------------------------------------

_BICTX = flint.fmpq_mpoly_ctx.get(("t", "x"), "lex")


class _BiFrac:
    """Element of Q(t)(xi) as a reduced fraction of polynomials in ``t``, ``x``."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = _BICTX.from_dict({(0, 0): 1})
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        g = num.gcd(den)
        if g != 1 and g != 0:
            num, den = num / g, den / g
        lc = den.leading_coefficient()
        self.num, self.den = num / lc, den / lc

    @classmethod
    def from_ratfunc(cls, x: RatFunc) -> "_BiFrac":
        x = to_ratfunc(x)
        num = _BICTX.from_dict({(i, 0): c for i, c in enumerate(x.num.coeffs()) if c != 0})
        den = _BICTX.from_dict({(i, 0): c for i, c in enumerate(x.den.coeffs()) if c != 0})
        t = _BICTX.gens()[0]
        if x.shift >= 0:
            num = num * t ** x.shift
        else:
            den = den * t ** (-x.shift)
        return cls(num, den)

    @classmethod
    def xi(cls) -> "_BiFrac":
        return cls(_BICTX.gens()[1])

    def _wrap(self, o):
        if isinstance(o, _BiFrac):
            return o
        return _BiFrac.from_ratfunc(to_ratfunc(o))

    def __add__(self, o):
        o = self._wrap(o)
        return _BiFrac(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return _BiFrac(-self.num, self.den)

    def __sub__(self, o):
        return self + (-self._wrap(o))

    def __rsub__(self, o):
        return self._wrap(o) - self

    def __mul__(self, o):
        o = self._wrap(o)
        return _BiFrac(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num == 0:
            raise ZeroDivisionError("inverse of zero")
        return _BiFrac(self.den, self.num)

    def __truediv__(self, o):
        return self * self._wrap(o).inverse()

    def is_zero(self) -> bool:
        return self.num == 0

    def __eq__(self, o):
        return (self - o).is_zero()

    __hash__ = None

    def __str__(self):
        t, x = _BICTX.gens()
        return f"({self.num})/({self.den})".replace("x", "xi")


@dataclass
class AnsatzSolution:
    spec: SeriesSpec
    cell: CellSplit
    xi0: object
    mu: object
    eta: object
    zeta: object
    t_minus_unit: object
    mu_from_trace: object
    mu_matches: bool
    trace_identity: bool

    @property
    def consistent(self) -> bool:
        return self.mu_matches and self.trace_identity

    def to_json(self) -> dict:
        return {
            "series": self.spec.series,
            "rank": self.spec.rank,
            "r": str(self.cell.r),
            "xi0": str(self.xi0),
            "mu": str(self.mu),
            "eta": str(self.eta),
            "zeta": str(self.zeta),
            "mu_matches": self.mu_matches,
            "trace_identity": self.trace_identity,
        }


def solve_ansatz(spec: SeriesSpec, cell: CellSplit, xi=None) -> AnsatzSolution:
    """Solve the scalar coefficient system of the projector ansatz.

    Parameters are ``xi_0 = q^(N-2r+1)``, ``xi_+ = xi``, ``xi_- = 1/xi``.
    With ``xi=None`` it is a free indeterminate; otherwise ``xi`` is a
    ``RatFunc`` (or anything convertible).  ``(eta, zeta)`` solve the two
    equations linear in them, ``mu`` is fixed by the unit-diagonal
    requirement, and the third equation is checked after substituting the
    trace of the lower projector on the unit.  Also solves that third
    equation for ``mu`` on its own and compares.  Raises
    :class:`NonGenericError` ("non-generic parameters") when the system
    degenerates.
    """
    F = _BiFrac
    N, eps, r = spec.N, spec.eps, Fraction(cell.r)
    one = F.from_ratfunc(ONE)
    q = F.from_ratfunc(q_power(1))
    qi = F.from_ratfunc(q_power(-1))
    g = q - qi
    k = Fraction(N - 2 * r + 1, 2)
    xi0 = F.from_ratfunc(q_power(N - 2 * r + 1))
    qNe = F.from_ratfunc(q_power(N - eps))
    xp = F.xi() if xi is None else F.from_ratfunc(to_ratfunc(xi))
    if xp.is_zero():
        raise NonGenericError("non-generic parameters: xi = 0")
    xm = xp.inverse()
    xp_i, xm_i, x0_i = xp.inverse(), xm.inverse(), xi0.inverse()

    if (xp - xi0).is_zero():
        raise NonGenericError("non-generic parameters: xi_+ coincides with xi_0")
    mu = (one - xi0) / (xp - xi0)

    # (eta, zeta) from the two equations linear in them
    a11, a12 = xp_i - x0_i, -eps * qNe * (xp - xi0) + g * (xp_i - xm_i)
    b1 = -(xm_i - x0_i)
    a21, a22 = xp - xi0, -eps * qNe * (xp_i - x0_i)
    b2 = -(xm - xi0)
    det = a11 * a22 - a12 * a21
    if det.is_zero():
        raise NonGenericError("non-generic parameters: singular (eta, zeta) system")
    eta = (b1 * a22 - a12 * b2) / det
    zeta = (a11 * b2 - b1 * a21) / det
    if zeta.is_zero():
        raise NonGenericError("non-generic parameters: zeta vanishes")

    # trace of the lower projector on the unit, times zeta (zeta cancels)
    qk = F.from_ratfunc(q_power(k))
    bracket = F.from_ratfunc((q_power(k) - q_power(-k)) / (q_power(1) - q_power(-1)))
    tz = lambda m_: eps * (one - m_) * qk * bracket  # noqa: E731
    t_minus = tz(mu) / zeta

    def third(m_):
        return (
            x0_i - xi0
            + ((xp_i - x0_i) - (xp - xi0)) * m_
            - eps * g * (xp_i - x0_i) * tz(m_)
        )

    identity = third(mu).is_zero()
    # the third equation is affine in mu: c0 + c1 mu = 0
    c0 = third(F.from_ratfunc(ZERO))
    c1 = third(one) - c0
    if c1.is_zero():
        raise NonGenericError("non-generic parameters: mu undetermined")
    mu_alt = -c0 / c1
    return AnsatzSolution(spec, cell, xi0, mu, eta, zeta, t_minus, mu_alt, mu_alt == mu, identity)


# one-stop report ----------------------------------------------------------------------


def representation_report(rep: ModuleRep, convention: str = "uniform") -> dict:
    """Full check of a module: Gauss factors, generators, relations, weights."""
    from .module_action import expected_unit_diagonal, verify_module_relations

    spec, cell = rep.spec, rep.cell
    rule = admissible_sigma(spec, cell)
    lam = rule.lowest_weight(rep.sigma)
    hw = [-x for x in lam]
    try:
        oracle = weyl_dimension(spec, hw)
    except ValueError:
        oracle = None
    rel = verify_module_relations(rep)
    f = gauss_decompose(rep)
    chev = extract_generators(f, spec)
    uh = verify_uh_relations(chev, spec, convention=convention)
    lw = lowest_weight_checks(chev, rep.sigma)
    checks = {f"module:{k}": v for k, v in rel.results.items()}
    want = expected_unit_diagonal(spec, cell, rep.sigma)
    checks["module:unit_diagonal"] = sum(1 for a, b in zip(rep.unit_diagonal(), want) if a != b)
    checks["gauss:reassembly"] = f.residual
    if spec.series == "D":
        checks["gauss:alpha(-1/2,1/2)"] = d_series_null_block(f)
    if chev.alpha00 is not None:
        checks["gauss:alpha00"] = sum(1 for x in chev.alpha00 if not x.is_one())
    checks.update({f"uh:{k}": v for k, v in uh.residuals.items()})
    checks["lw:lowering_kills_unit"] = 0 if lw.lowering_kills_unit else 1
    checks["lw:joint_kernel"] = abs(lw.joint_kernel_dim - 1)
    checks["lw:cartan_on_unit"] = sum(
        1 for a, b in zip(lw.cartan_on_unit, lw.expected_on_unit) if a != b
    )
    checks["lw:weights"] = 0 if lw.weights_ok else 1
    checks["weyl:dimension"] = 0 if oracle == rep.dim else 1
    status = {k: ("pass" if not v else f"fail ({v})") for k, v in checks.items()}
    return {
        "series": spec.series,
        "rank": spec.rank,
        "r": str(cell.r),
        "sigma": str(rep.sigma),
        "lambda": [str(x) for x in lam],
        "dimension": rep.dim,
        "oracle_dimension": oracle,
        "s_squared": [str(s) for s in chev.s_squared],
        "uh_convention": convention,
        "commutator_factor": [str(commutator_factor(chev, i)) for i in range(1, spec.rank + 1)],
        "cartan_on_unit": [str(x) for x in lw.cartan_on_unit],
        "checks": status,
        "passed": all(v == 0 for v in checks.values()),
    }
