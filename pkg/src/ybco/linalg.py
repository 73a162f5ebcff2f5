"""Row reduction over field coefficient rings."""

from __future__ import annotations

from typing import Sequence

from .ring import Ring, RingElement, invert_unit


class NonFieldError(ArithmeticError):
    pass


def _require_field(ring: Ring):
    if not ring.is_field:
        raise NonFieldError(f"linear algebra needs a field, got {ring.ring_id}")


def row_reduce(rows: list, ring: Ring, ncols: int) -> tuple:
    """Reduced row echelon form in place; returns (rows, pivot columns)."""
    _require_field(ring)
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((k for k in range(r, len(rows)) if rows[k][c].terms), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = invert_unit(rows[r][c])
        rows[r] = [x * inv for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c].terms:
                f = rows[k][c]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(columns: Sequence[Sequence[RingElement]], ring: Ring) -> int:
    if not columns:
        return 0
    nrows = len(columns[0])
    rows = [[col[i] for col in columns] for i in range(nrows)]
    _, piv = row_reduce(rows, ring, len(columns))
    return len(piv)


def solve(columns: Sequence[Sequence[RingElement]], target: Sequence[RingElement], ring: Ring):
    """Some x with sum_k x_k * columns[k] = target, or None if inconsistent."""
    ncols = len(columns)
    nrows = len(target)
    rows = [[col[i] for col in columns] + [target[i]] for i in range(nrows)]
    rows, piv = row_reduce(rows, ring, ncols + 1)
    if ncols in piv:
        return None
    x = [ring.zero()] * ncols
    for r, c in enumerate(piv):
        x[c] = rows[r][ncols]
    return x
