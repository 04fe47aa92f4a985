"""Exact linear algebra over rational-function coefficients.

Plain Gaussian elimination; entries are FieldElements whose own
normalization keeps sizes manageable.  Pivots are chosen to prefer
low-degree entries, which noticeably limits intermediate blow-up on the
systems the decomposition algorithms produce.
"""

from __future__ import annotations

from .errors import ContextMismatch


def _entry_size(a):
    return a.num.total_degree() + a.den.total_degree() + len(a.num.terms)


def _check_matrix(m):
    if not m or not m[0]:
        raise ValueError("empty matrix")
    ctx = m[0][0].ctx
    for row in m:
        for a in row:
            if a.ctx != ctx:
                raise ContextMismatch("matrix entries from different contexts")
    return ctx


def _echelon(m):
    """Row-reduce a copy of m in place; returns (rows, pivot column list)."""
    rows = [list(r) for r in m]
    ncols = len(rows[0])
    pivots = []
    rank = 0
    for col in range(ncols):
        best = None
        for i in range(rank, len(rows)):
            if rows[i][col]:
                if best is None or _entry_size(rows[i][col]) < _entry_size(
                    rows[best][col]
                ):
                    best = i
        if best is None:
            continue
        rows[rank], rows[best] = rows[best], rows[rank]
        inv = rows[rank][col].inv()
        rows[rank] = [a * inv for a in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return rows, pivots


def rank(m):
    _check_matrix(m)
    _, pivots = _echelon(m)
    return len(pivots)


def linsolve(m, rhs):
    """One solution of m @ x = rhs, or None when the system is inconsistent."""
    ctx = _check_matrix(m)
    if len(rhs) != len(m):
        raise ValueError("rhs length does not match the matrix")
    aug = [list(row) + [b] for row, b in zip(m, rhs)]
    rows, pivots = _echelon(aug)
    ncols = len(m[0])
    if ncols in pivots:
        return None  # a pivot in the rhs column means inconsistency
    x = [ctx.zero] * ncols
    for r, col in enumerate(pivots):
        x[col] = rows[r][-1]
    return x


def nullvector(m):
    """A nonzero kernel vector of m, or None when m has full column rank."""
    ctx = _check_matrix(m)
    rows, pivots = _echelon(m)
    ncols = len(m[0])
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    f = free[0]
    x = [ctx.zero] * ncols
    x[f] = ctx.one
    for r, col in enumerate(pivots):
        x[col] = -rows[r][f]
    return x


def invert(m):
    """Matrix inverse; None when singular."""
    ctx = _check_matrix(m)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    ident = [[ctx.one if i == j else ctx.zero for j in range(n)] for i in range(n)]
    aug = [list(row) + idrow for row, idrow in zip(m, ident)]
    rows, pivots = _echelon(aug)
    if len(pivots) < n or pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in rows[:n]]


def matvec(m, x):
    ctx = _check_matrix(m)
    out = []
    for row in m:
        acc = ctx.zero
        for a, b in zip(row, x):
            acc = acc + a * b
        out.append(acc)
    return out
