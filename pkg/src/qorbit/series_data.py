"""Series constants and matrix constructors for B_l, C_l, D_l.

Index labels run over ``-l..l`` (series B, ``N = 2l+1``) or over the
half-integers ``-(l-1/2)..(l-1/2)`` (series C and D, ``N = 2l``).  Matrices
are indexed by *position* ``0..N-1`` in ascending label order; use
:meth:`SeriesSpec.pos` and :attr:`SeriesSpec.labels` to convert.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .scalars import ONE, ZERO, RatFunc, q_power, to_ratfunc
from .tensor_space import LegError, LegMatrix

__all__ = [
    "SeriesSpec",
    "CellSplit",
    "build_series",
    "build_cell",
    "build_R",
    "build_C0",
    "build_C",
    "build_K",
    "build_P",
    "build_E",
    "build_Q",
    "q_rho2",
    "ymap",
    "vmap",
    "vstar_terms",
    "sgn",
]

HALF = Fraction(1, 2)


def sgn(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class SeriesSpec:
    """Series label, rank and all derived index data."""

    series: str
    rank: int
    N: int = field(init=False)
    eps: int = field(init=False)
    labels: tuple[Fraction, ...] = field(init=False)
    veps: tuple[int, ...] = field(init=False)
    rho: tuple[Fraction, ...] = field(init=False)

    def __post_init__(self):
        s, l = self.series, self.rank
        if s not in ("B", "C", "D"):
            raise ValueError(f"unknown series {s!r}; expected B, C or D")
        if not isinstance(l, int) or l < 1:
            raise ValueError(f"rank must be a positive integer, got {l!r}")
        if s == "B":
            labels = tuple(Fraction(j) for j in range(-l, l + 1))
        else:
            labels = tuple(Fraction(2 * j + 1, 2) for j in range(-l, l))
        eps = -1 if s == "C" else 1
        veps = tuple(sgn(j) if s == "C" else 1 for j in labels)
        rho = tuple(-j + eps * HALF * sgn(j) for j in labels)
        object.__setattr__(self, "N", len(labels))
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "veps", veps)
        object.__setattr__(self, "rho", rho)

    @cached_property
    def _pos(self) -> dict:
        return {j: i for i, j in enumerate(self.labels)}

    def pos(self, label) -> int:
        try:
            return self._pos[Fraction(label)]
        except KeyError:
            raise LegError(f"label {label} not in series {self.name}") from None

    def has_label(self, label) -> bool:
        return Fraction(label) in self._pos

    @property
    def name(self) -> str:
        return f"{self.series}{self.rank}"

    @property
    def labels2(self) -> tuple[int, ...]:
        return tuple(int(2 * j) for j in self.labels)

    def valid_r(self) -> tuple[Fraction, ...]:
        """The admissible cell indices ``r``."""
        if self.series == "B":
            return tuple(Fraction(r) for r in range(1, self.rank + 1))
        return tuple(Fraction(2 * r + 1, 2) for r in range(self.rank))

    def summary(self) -> dict:
        return {
            "series": self.series,
            "l": self.rank,
            "N": self.N,
            "epsilon": self.eps,
            "labels": list(self.labels2),
            "rho": [int(2 * x) for x in self.rho],
        }

    def __str__(self):
        return self.name


def build_series(series: str, rank: int) -> SeriesSpec:
    return SeriesSpec(series, rank)


@dataclass(frozen=True)
class CellSplit:
    """The index ``r`` splitting ``C^N`` into the blocks ``E^-``, ``E^0``, ``E^+``."""

    spec: SeriesSpec
    r: Fraction

    def __post_init__(self):
        r = Fraction(self.r)
        object.__setattr__(self, "r", r)
        if r not in self.spec.valid_r():
            raise ValueError(
                f"r={r} is not admissible for {self.spec.name}; "
                f"expected one of {[str(x) for x in self.spec.valid_r()]}"
            )

    def block(self, label) -> str:
        """``'-'``, ``'0'`` or ``'+'`` according to the projector containing ``label``."""
        j = Fraction(label)
        if j <= -self.r:
            return "-"
        if j >= self.r:
            return "+"
        return "0"

    @cached_property
    def minus(self) -> tuple[Fraction, ...]:
        return tuple(j for j in self.spec.labels if j <= -self.r)

    @cached_property
    def middle(self) -> tuple[Fraction, ...]:
        return tuple(j for j in self.spec.labels if -self.r < j < self.r)

    @cached_property
    def plus(self) -> tuple[Fraction, ...]:
        return tuple(j for j in self.spec.labels if j >= self.r)

    @property
    def E_minus(self) -> LegMatrix:
        return build_E(self.spec, -self.r)

    @property
    def E_zero(self) -> LegMatrix:
        return build_E(self.spec, self.r - 1) - build_E(self.spec, -self.r)

    @property
    def E_plus(self) -> LegMatrix:
        return LegMatrix.identity(1, self.spec.N) - build_E(self.spec, self.r - 1)

    @property
    def block_dims(self) -> tuple[int, int]:
        """``((N-2r+1)/2, (N+2r-1)/2)``: rows and columns of the Z block."""
        N, r = self.spec.N, self.r
        return int((N - 2 * r + 1) / 2), int((N + 2 * r - 1) / 2)

    def p(self) -> RatFunc:
        """The constant ``eps * q**(-2r+1+eps)``."""
        e = self.spec.eps
        return q_power(-2 * self.r + 1 + e) * e

    def __str__(self):
        return f"{self.spec.name}(r={self.r})"


def build_cell(spec: SeriesSpec, r) -> CellSplit:
    return CellSplit(spec, Fraction(r))


# matrices -------------------------------------------------------------------


def build_R(spec: SeriesSpec) -> LegMatrix:
    """The R-matrix on two legs."""
    L = spec.labels
    N = spec.N
    q = q_power(1)
    qi = q_power(-1)
    entries = {}

    def put(key, v):
        w = entries.get(key)
        entries[key] = v if w is None else w + v

    for a, j in enumerate(L):
        for b, k in enumerate(L):
            # delta_js delta_kt
            put(((a, b), (a, b)), ONE)
            # (q - q^sgn(k-t)) delta_jt delta_ks, i.e. s = k, t = j
            put(((a, b), (b, a)), q - q_power(sgn(k - j)))
            # third summand needs j + k = 0 and s + t = 0
            if j + k == 0:
                for c, t in enumerate(L):
                    s = -t
                    coef = q_power(-sgn(k - t)) - qi
                    if coef.is_zero():
                        continue
                    extra = 1 if (k == 0 and t == 0) else 0
                    val = coef * q_power(-spec.rho[b] + spec.rho[c] + extra)
                    val = val * (-(spec.veps[b] * spec.veps[c]))
                    put(((a, b), (spec.pos(s), c)), val)
    return LegMatrix.from_entries(2, N, entries)


def build_C0(spec: SeriesSpec) -> LegMatrix:
    entries = {}
    for a, j in enumerate(spec.labels):
        entries[((a,), (spec.pos(-j),))] = to_ratfunc(spec.veps[a])
    return LegMatrix.from_entries(1, spec.N, entries)


def build_C(spec: SeriesSpec) -> LegMatrix:
    """``C = C0 q**rho``."""
    entries = {}
    for a, j in enumerate(spec.labels):
        b = spec.pos(-j)
        entries[((a,), (b,))] = q_power(spec.rho[b]) * spec.veps[a]
    return LegMatrix.from_entries(1, spec.N, entries)


def q_rho2(spec: SeriesSpec) -> LegMatrix:
    """The diagonal matrix ``q**(2 rho)``."""
    return LegMatrix.diagonal(spec.N, [q_power(2 * x) for x in spec.rho])


def build_K(spec: SeriesSpec) -> LegMatrix:
    """``K_{jk,st} = (C^t)_{jk} (C^{-1})_{st}``, a rank-one matrix."""
    C = build_C(spec)
    Ct = C.transpose()
    Cinv = C.scale(spec.eps)
    entries = {}
    for ((j,), (k,)), a in Ct.items():
        for ((s,), (t,)), b in Cinv.items():
            entries[((j, k), (s, t))] = a * b
    return LegMatrix.from_entries(2, spec.N, entries)


def build_P(spec_or_dim) -> LegMatrix:
    """The flip operator on two legs."""
    N = spec_or_dim.N if isinstance(spec_or_dim, SeriesSpec) else int(spec_or_dim)
    return LegMatrix(2, N, {a * N + b: {b * N + a: ONE} for a in range(N) for b in range(N)})


def build_E(spec: SeriesSpec, s) -> LegMatrix:
    """Diagonal projector onto ``span{e_j : j <= s}``."""
    s = Fraction(s)
    return LegMatrix.diagonal(spec.N, [ONE if j <= s else ZERO for j in spec.labels])


def build_Q(spec: SeriesSpec, cell: CellSplit, R: LegMatrix | None = None) -> LegMatrix:
    """Block-diagonal restriction of ``R`` along the cell split of the first index."""
    if R is None:
        R = build_R(spec)
    L = spec.labels
    entries = {}
    for ((j, k), (s, t)), v in R.items():
        if cell.block(L[j]) == cell.block(L[s]):
            entries[((j, k), (s, t))] = v
    return LegMatrix.from_entries(2, spec.N, entries)


# linear maps ------------------------------------------------------------------


def ymap(spec: SeriesSpec, X: LegMatrix) -> LegMatrix:
    """Closed-form ``Y`` with ``K_12 X_2 P R_12 = K_12 Y_2``.

    Works for entries from any algebra over Q(t): the map is linear.
    """
    if X.legs != 1 or X.dim != spec.N:
        raise LegError("ymap expects an N x N matrix")
    L = spec.labels
    N = spec.N
    e = spec.eps
    q = q_power(1)
    gamma = q - q_power(-1)
    # sum_{s > -j} q^{2 rho_s} X_ss, accumulated from the top label down
    diag_terms = [(spec.rho[a], X.entry((a,), (a,))) for a in range(N)]
    entries: dict = {}

    def put(key, v):
        if v is None or v.is_zero():
            return
        w = entries.get(key)
        entries[key] = v if w is None else w + v

    for a, j in enumerate(L):
        for b, k in enumerate(L):
            x1 = X.entry((spec.pos(-k),), (spec.pos(-j),))
            if x1 is not None:
                c = q_power(-spec.rho[a] - spec.rho[b] - (1 if a == b else 0))
                c = c * (e * spec.veps[a] * spec.veps[b])
                put(((a,), (b,)), c * x1)
            x2 = X.entry((a,), (b,))
            if x2 is not None:
                c = (q - q_power(-sgn(j + k))) * q_power(-1 if (j == 0 and k == 0) else 0)
                put(((a,), (b,)), c * x2)
        acc = None
        for c_idx, (rho_s, xs) in enumerate(diag_terms):
            if L[c_idx] > -j and xs is not None:
                term = q_power(2 * rho_s) * xs
                acc = term if acc is None else acc + term
        if acc is not None:
            put(((a,), (a,)), (gamma * (-e)) * acc)
    entries = {k: v for k, v in entries.items() if not v.is_zero()}
    return LegMatrix.from_entries(1, N, entries)


def vmap(spec: SeriesSpec, cell: CellSplit, Z: dict) -> dict:
    """``V`` block from the ``Z`` block.

    ``Z`` maps label pairs ``(j, k)`` with ``j <= -r < k`` to algebra elements;
    the result maps ``(j, k)`` with ``j < r <= k`` to ``v_jk``.
    """
    r = cell.r
    for j, k in Z:
        if not (Fraction(j) <= -r < Fraction(k)):
            raise LegError(f"Z index ({j},{k}) outside j <= -r < k")
    out = {}
    for j, k in vcoeff_pattern(spec, cell):
        acc = None
        for (zj, zk), c in vcoeff_pattern(spec, cell)[(j, k)]:
            z = Z.get((zj, zk))
            if z is None:
                continue
            term = c * z
            acc = term if acc is None else acc + term
        if acc is not None and not acc.is_zero():
            out[(j, k)] = acc
    return out


def vcoeff_pattern(spec: SeriesSpec, cell: CellSplit) -> dict:
    """``{(j, k): [((zj, zk), coeff), ...]}``: ``v_jk`` as a combination of ``z``'s."""
    return _vcoeffs(spec, cell.r)


_VCACHE: dict = {}


def _vcoeffs(spec: SeriesSpec, r: Fraction) -> dict:
    key = (spec.series, spec.rank, r)
    if key in _VCACHE:
        return _VCACHE[key]
    e = spec.eps
    q = q_power(1)
    pre = q_power(-2 * r + 1 + e)
    out = {}
    for j in spec.labels:
        if not j < r:
            continue
        for k in spec.labels:
            if not r <= k:
                continue
            a, b = spec.pos(j), spec.pos(k)
            s = pre * (spec.veps[a] * spec.veps[b])
            terms = [((-k, -j), s * q_power(-spec.rho[a] - spec.rho[b]))]
            if j <= -r:
                # p times the second Y-map term: the sign is eps alone, with no
                # veps_j veps_k (the two differ for the C series, where j < 0 < k)
                terms.append(((j, k), pre * (q - q_power(-sgn(j + k))) * e))
            out[(j, k)] = terms
    _VCACHE[key] = out
    return out


def vstar_terms(spec: SeriesSpec, cell: CellSplit) -> dict:
    """Adjoint pattern: ``(V*)`` at matrix position ``(k, j)`` as a combination of
    ``Z*`` positions ``(row, col)``.

    Star conjugation keeps the (real) coefficients and transposes indices:
    ``(v_jk)^*`` sits at ``(k, j)`` and ``(z_ab)^*`` at ``(b, a)``.
    """
    out = {}
    for (j, k), terms in vcoeff_pattern(spec, cell).items():
        out[(k, j)] = [((zk, zj), c) for (zj, zk), c in terms]
    return out
