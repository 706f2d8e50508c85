"""Sparse exact elimination over Q(t).

Rows are ``dict[col, RatFunc]`` with no zero entries.  Pivot choice prefers
short rows and monomial pivots, which keeps rational-function growth down.
"""
from __future__ import annotations

from .scalars import ONE, RatFunc

__all__ = ["NotInvertibleError", "add_scaled", "inverse", "RowEchelon", "left_solve_plan"]


class NotInvertibleError(ArithmeticError):
    pass


def add_scaled(target: dict, row: dict, c: RatFunc) -> None:
    """``target += c * row`` in place, dropping zeros."""
    for k, v in row.items():
        w = target.get(k)
        if w is None:
            target[k] = c * v
        else:
            w = w + c * v
            if w.is_zero():
                del target[k]
            else:
                target[k] = w


def _pivot_cost(v: RatFunc) -> int:
    if v.is_monomial():
        return 0
    return 1 + v.num.degree() + v.den.degree()


def inverse(rows: dict[int, dict], n: int) -> dict[int, dict]:
    """Inverse of an ``n x n`` sparse matrix by Gauss-Jordan elimination."""
    work = {i: (dict(rows.get(i, {})), {i: ONE}) for i in range(n)}
    remaining = set(range(n))
    pivots: dict[int, int] = {}
    for _ in range(n):
        best = None
        for i in remaining:
            a, _b = work[i]
            if not a:
                raise NotInvertibleError("not invertible")
            for j, v in a.items():
                cost = (len(a), _pivot_cost(v))
                if best is None or cost < best[0]:
                    best = (cost, i, j)
                    if cost == (1, 0):
                        break
            if best is not None and best[0] == (1, 0):
                break
        _, i, j = best
        remaining.discard(i)
        a, b = work[i]
        inv = a[j].inverse()
        if not inv.is_one():
            a = {k: inv * v for k, v in a.items()}
            b = {k: inv * v for k, v in b.items()}
            work[i] = (a, b)
        pivots[j] = i
        for i2, (a2, b2) in work.items():
            if i2 == i:
                continue
            c = a2.get(j)
            if c is None:
                continue
            add_scaled(a2, a, -c)
            add_scaled(b2, b, -c)
    return {j: work[i][1] for j, i in pivots.items() if work[i][1]}


class RowEchelon:
    """Incremental reduced row echelon form.

    ``key`` maps a column id to a sortable key; the leading (pivot) column of
    a row is the one with the largest key.  ``rows[p]`` is the reduced row
    with pivot ``p`` normalized to one.
    """

    def __init__(self, key=None):
        self.key = key if key is not None else (lambda c: c)
        self.rows: dict = {}

    def _lead(self, row):
        return max(row, key=self.key)

    def reduce(self, row: dict) -> dict:
        """Reduce ``row`` against the current pivots (not in place)."""
        row = dict(row)
        # pivot rows are fully reduced, so one pass suffices
        for c in [c for c in row if c in self.rows]:
            v = row.get(c)
            if v is not None:
                add_scaled(row, self.rows[c], -v)
        return row

    def add(self, row: dict) -> bool:
        """Insert ``row``; returns False when it was already in the span."""
        row = self.reduce(row)
        if not row:
            return False
        p = self._lead(row)
        inv = row[p].inverse()
        if not inv.is_one():
            row = {k: inv * v for k, v in row.items()}
        for q, other in self.rows.items():
            c = other.get(p)
            if c is not None:
                add_scaled(other, row, -c)
        self.rows[p] = row
        return True

    def __len__(self):
        return len(self.rows)


def left_solve_plan(rows: dict, ncols: int):
    """Prepare to solve ``A x = b`` for many right-hand sides.

    ``rows`` maps row index to ``{col: value}``.  Returns ``(solve, null)``:
    ``x_j = sum_i solve[j][i] * b_i`` and every ``sum_i c[i] * b_i`` for ``c``
    in ``null`` must vanish for the system to be consistent.  Raises
    :class:`NotInvertibleError` when ``A`` has a nontrivial kernel.
    """
    work = {i: (dict(r), {i: ONE}) for i, r in rows.items()}
    solve = {}
    for j in range(ncols):
        best = None
        for i, (a, _c) in work.items():
            v = a.get(j)
            if v is None:
                continue
            cost = (_pivot_cost(v), len(a))
            if best is None or cost < best[0]:
                best = (cost, i)
        if best is None:
            raise NotInvertibleError(f"column {j} has no pivot")
        i = best[1]
        a, c = work.pop(i)
        inv = a[j].inverse()
        a = {k: inv * v for k, v in a.items()}
        c = {k: inv * v for k, v in c.items()}
        for i2, (a2, c2) in work.items():
            f = a2.get(j)
            if f is not None:
                add_scaled(a2, a, -f)
                add_scaled(c2, c, -f)
        for j2, (a2, c2) in solve.items():
            f = a2.get(j)
            if f is not None:
                add_scaled(a2, a, -f)
                add_scaled(c2, c, -f)
        solve[j] = (a, c)
    null = [c for a, c in work.values() if c]
    return {j: c for j, (a, c) in solve.items()}, null
