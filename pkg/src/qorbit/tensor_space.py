"""Sparse matrices on tensor powers ``(C^N)^{(x)k}`` with leg bookkeeping.

A :class:`LegMatrix` on ``k`` legs stores its entries by flattened
multi-index: position ``(i1, ..., ik)`` (each ``0 <= ia < N``) flattens to
``sum ia * N**(k-a)``, so integer order is the lexicographic order of
multi-indices with leg 1 most significant.  Legs are numbered from 1 as in
the usual subscript notation ``R_12``, ``K_31`` and so on.

Entries are any ring elements supporting ``+``, ``*`` and ``is_zero()``:
exact scalars (:class:`~qorbit.scalars.RatFunc`) or noncommutative
polynomials.  Matrix products keep the factor order, so matrices over a
noncommutative algebra multiply correctly.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product

from . import linalg
from .scalars import ONE, RatFunc, to_ratfunc

__all__ = ["LegMatrix", "LegError", "embed", "partial_transpose", "partial_trace"]


class LegError(ValueError):
    """Bad leg numbers or mismatched shapes."""


@lru_cache(maxsize=64)
def _digits(legs: int, dim: int) -> tuple[tuple[int, ...], ...]:
    return tuple(product(range(dim), repeat=legs))


def _flat(idx, dim: int) -> int:
    out = 0
    for i in idx:
        out = out * dim + i
    return out


class LegMatrix:
    """Immutable sparse matrix acting on ``legs`` copies of ``C^dim``."""

    __slots__ = ("legs", "dim", "rows")

    def __init__(self, legs: int, dim: int, rows: dict | None = None):
        self.legs = legs
        self.dim = dim
        self.rows = rows if rows is not None else {}

    # construction ---------------------------------------------------------

    @classmethod
    def from_entries(cls, legs: int, dim: int, entries: dict) -> "LegMatrix":
        """Build from ``{(row_tuple, col_tuple): value}``; zeros are dropped."""
        rows: dict = {}
        for (r, c), v in entries.items():
            if len(r) != legs or len(c) != legs:
                raise LegError("multi-index length does not match leg count")
            if isinstance(v, int):
                v = to_ratfunc(v)
            if v.is_zero():
                continue
            rows.setdefault(_flat(r, dim), {})[_flat(c, dim)] = v
        return cls(legs, dim, rows)

    @classmethod
    def identity(cls, legs: int, dim: int, value=ONE) -> "LegMatrix":
        n = dim**legs
        return cls(legs, dim, {i: {i: value} for i in range(n)})

    @classmethod
    def zero(cls, legs: int, dim: int) -> "LegMatrix":
        return cls(legs, dim, {})

    @classmethod
    def diagonal(cls, dim: int, values) -> "LegMatrix":
        """One-leg diagonal matrix."""
        rows = {}
        for i, v in enumerate(values):
            v = to_ratfunc(v) if isinstance(v, int) else v
            if not v.is_zero():
                rows[i] = {i: v}
        return cls(1, dim, rows)

    # access ---------------------------------------------------------------

    @property
    def size(self) -> int:
        return self.dim**self.legs

    def index(self, flat: int) -> tuple[int, ...]:
        return _digits(self.legs, self.dim)[flat]

    def entry(self, row, col):
        """Entry at multi-indices ``row``, ``col`` (tuples of positions)."""
        r = self.rows.get(_flat(row, self.dim))
        if r is None:
            return None
        return r.get(_flat(col, self.dim))

    def get(self, row, col, default=None):
        v = self.entry(row, col)
        return default if v is None else v

    def items(self):
        """Yield ``((row_tuple, col_tuple), value)`` in lexicographic order."""
        digits = _digits(self.legs, self.dim)
        for i in sorted(self.rows):
            r = self.rows[i]
            for j in sorted(r):
                yield (digits[i], digits[j]), r[j]

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    def _check(self, other: "LegMatrix"):
        if self.legs != other.legs or self.dim != other.dim:
            raise LegError(
                f"shape mismatch: {self.legs} legs/dim {self.dim} vs "
                f"{other.legs} legs/dim {other.dim}"
            )

    # arithmetic -----------------------------------------------------------

    def __add__(self, other: "LegMatrix") -> "LegMatrix":
        self._check(other)
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            tgt = rows.setdefault(i, {})
            for j, v in r.items():
                w = tgt.get(j)
                if w is None:
                    tgt[j] = v
                else:
                    w = w + v
                    if w.is_zero():
                        del tgt[j]
                    else:
                        tgt[j] = w
            if not tgt:
                del rows[i]
        return LegMatrix(self.legs, self.dim, rows)

    def __neg__(self) -> "LegMatrix":
        return LegMatrix(
            self.legs, self.dim, {i: {j: -v for j, v in r.items()} for i, r in self.rows.items()}
        )

    def __sub__(self, other: "LegMatrix") -> "LegMatrix":
        return self + (-other)

    def scale(self, c) -> "LegMatrix":
        """Multiply every entry by the scalar ``c`` (central, so side is irrelevant)."""
        c = to_ratfunc(c)
        if c.is_zero():
            return LegMatrix(self.legs, self.dim, {})
        if c.is_one():
            return self
        rows = {}
        for i, r in self.rows.items():
            nr = {j: v * c for j, v in r.items()}
            nr = {j: v for j, v in nr.items() if not v.is_zero()}
            if nr:
                rows[i] = nr
        return LegMatrix(self.legs, self.dim, rows)

    def __mul__(self, other):
        if not isinstance(other, LegMatrix):
            return self.scale(other)
        self._check(other)
        orows = other.rows
        rows = {}
        for i, r in self.rows.items():
            acc: dict = {}
            for j, a in r.items():
                br = orows.get(j)
                if not br:
                    continue
                for k, b in br.items():
                    w = acc.get(k)
                    acc[k] = a * b if w is None else w + a * b
            acc = {k: v for k, v in acc.items() if not v.is_zero()}
            if acc:
                rows[i] = acc
        return LegMatrix(self.legs, self.dim, rows)

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other):
        return self * other

    def map(self, fn) -> "LegMatrix":
        """Apply ``fn`` entrywise, dropping entries that become zero."""
        rows = {}
        for i, r in self.rows.items():
            nr = {}
            for j, v in r.items():
                w = fn(v)
                if not w.is_zero():
                    nr[j] = w
            if nr:
                rows[i] = nr
        return LegMatrix(self.legs, self.dim, rows)

    def __eq__(self, other):
        if not isinstance(other, LegMatrix):
            return NotImplemented
        return (self.legs, self.dim) == (other.legs, other.dim) and (self - other).is_zero()

    __hash__ = None

    def inverse(self) -> "LegMatrix":
        """Exact inverse; raises :class:`linalg.NotInvertibleError` if singular."""
        inv = linalg.inverse(self.rows, self.size)
        out = LegMatrix(self.legs, self.dim, inv)
        return out

    def transpose(self) -> "LegMatrix":
        rows: dict = {}
        for i, r in self.rows.items():
            for j, v in r.items():
                rows.setdefault(j, {})[i] = v
        return LegMatrix(self.legs, self.dim, rows)

    @property
    def T(self) -> "LegMatrix":
        return self.transpose()

    def trace(self):
        out = None
        for i, r in self.rows.items():
            v = r.get(i)
            if v is not None:
                out = v if out is None else out + v
        return out if out is not None else to_ratfunc(0)

    # leg operations -------------------------------------------------------

    def _check_leg(self, leg: int):
        if not 1 <= leg <= self.legs:
            raise LegError(f"leg {leg} out of range 1..{self.legs}")

    def partial_transpose(self, leg: int) -> "LegMatrix":
        self._check_leg(leg)
        digits = _digits(self.legs, self.dim)
        a = leg - 1
        entries: dict = {}
        for i, r in self.rows.items():
            ri = digits[i]
            for j, v in r.items():
                cj = digits[j]
                nr = ri[:a] + (cj[a],) + ri[a + 1 :]
                nc = cj[:a] + (ri[a],) + cj[a + 1 :]
                entries[(nr, nc)] = v
        return LegMatrix.from_entries(self.legs, self.dim, entries)

    def partial_trace(self, leg: int) -> "LegMatrix":
        self._check_leg(leg)
        if self.legs == 1:
            raise LegError("partial trace of a one-leg matrix; use trace()")
        digits = _digits(self.legs, self.dim)
        a = leg - 1
        acc: dict = {}
        for i, r in self.rows.items():
            ri = digits[i]
            for j, v in r.items():
                cj = digits[j]
                if ri[a] != cj[a]:
                    continue
                key = (ri[:a] + ri[a + 1 :], cj[:a] + cj[a + 1 :])
                w = acc.get(key)
                acc[key] = v if w is None else w + v
        return LegMatrix.from_entries(self.legs - 1, self.dim, acc)

    def embed(self, legs: int, where) -> "LegMatrix":
        """Act on legs ``where`` (1-based, in order) of a ``legs``-leg space."""
        where = tuple(where)
        if len(where) != self.legs:
            raise LegError(f"need {self.legs} target legs, got {len(where)}")
        if len(set(where)) != len(where) or not all(1 <= w <= legs for w in where):
            raise LegError(f"invalid target legs {where} for a {legs}-leg space")
        dim = self.dim
        digits = _digits(self.legs, dim)
        others = [a for a in range(legs) if a + 1 not in where]
        pos = [w - 1 for w in where]
        weight_in = [dim ** (legs - 1 - p) for p in pos]
        weight_out = [dim ** (legs - 1 - a) for a in others]
        offsets = [
            sum(x * w for x, w in zip(combo, weight_out))
            for combo in product(range(dim), repeat=len(others))
        ]
        rows: dict = {}
        for i, r in self.rows.items():
            ri = sum(x * w for x, w in zip(digits[i], weight_in))
            cols = [(sum(x * w for x, w in zip(digits[j], weight_in)), v) for j, v in r.items()]
            for off in offsets:
                rows[ri + off] = {cj + off: v for cj, v in cols}
        return LegMatrix(legs, dim, rows)

    # rendering ------------------------------------------------------------

    def dump(self, labels=None) -> str:
        """Coordinate-triplet text: ``(i1,...,ik) (j1,...,jk) value`` per line."""
        lab = (lambda i: str(labels[i])) if labels is not None else str
        lines = []
        for (r, c), v in self.items():
            rs = "(" + ",".join(lab(i) for i in r) + ")"
            cs = "(" + ",".join(lab(i) for i in c) + ")"
            lines.append(f"{rs} {cs} {v}")
        return "\n".join(lines)

    def __repr__(self):
        return f"LegMatrix(legs={self.legs}, dim={self.dim}, nnz={self.nnz()})"


def embed(m: LegMatrix, legs: int, where) -> LegMatrix:
    return m.embed(legs, where)


def partial_transpose(m: LegMatrix, leg: int) -> LegMatrix:
    return m.partial_transpose(leg)


def partial_trace(m: LegMatrix, leg: int) -> LegMatrix:
    return m.partial_trace(leg)
