"""Exact linear programming over the rationals.

Dense two-phase tableau simplex with Bland's anti-cycling rule. Problem
sizes here are small (at most a few hundred rows), so clarity wins over
sparse bookkeeping. Every number is a :class:`fractions.Fraction`; there is
no tolerance anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exceptions import InfeasibleError, UnboundedError

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class LPSolution:
    value: Fraction
    x: tuple[Fraction, ...]


def _pivot(rows, obj, r, c):
    prow = rows[r]
    inv = _ONE / prow[c]
    if inv != 1:
        prow[:] = [v * inv for v in prow]
    for i, row in enumerate(rows):
        if i == r:
            continue
        f = row[c]
        if f:
            row[:] = [a - f * b for a, b in zip(row, prow)]
    f = obj[c]
    if f:
        obj[:] = [a - f * b for a, b in zip(obj, prow)]


def _run(rows, obj, basis, allowed):
    """Maximise with the tableau in canonical form; ``obj[j] < 0`` means improving."""
    while True:
        enter = next((j for j in allowed if obj[j] < 0), None)
        if enter is None:
            return
        best = None
        for i, row in enumerate(rows):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise UnboundedError("objective is unbounded")
        leave = best[1]
        _pivot(rows, obj, leave, enter)
        basis[leave] = enter


def maximize(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPSolution:
    """Maximise ``c @ x`` subject to ``A_ub x <= b_ub`` and ``A_eq x == b_eq``.

    Variables are free. Rows of the form ``-a * x_j <= 0`` with ``a > 0`` are
    recognised as sign constraints and handled without splitting ``x_j``.

    Raises
    ------
    InfeasibleError
        The constraint set is empty.
    UnboundedError
        The objective is unbounded above.
    """
    n = len(c)
    c = [Fraction(v) for v in c]
    ub = [([Fraction(v) for v in row], Fraction(b)) for row, b in zip(A_ub, b_ub)]
    eq = [([Fraction(v) for v in row], Fraction(b)) for row, b in zip(A_eq, b_eq)]

    nonneg = [False] * n
    kept_ub = []
    for row, b in ub:
        nz = [j for j, v in enumerate(row) if v]
        if b == 0 and len(nz) == 1 and row[nz[0]] < 0:
            nonneg[nz[0]] = True
        elif not nz:
            if b < 0:
                raise InfeasibleError("constant inequality 0 <= b with b < 0")
        else:
            kept_ub.append((row, b))
    kept_eq = []
    for row, b in eq:
        if not any(row):
            if b != 0:
                raise InfeasibleError("constant equality 0 == b with b != 0")
        else:
            kept_eq.append((row, b))

    # column layout: for each original var its positive part, then negative
    # parts of the free ones, then slacks, then artificials
    cols_of = []
    ncol = 0
    for j in range(n):
        if nonneg[j]:
            cols_of.append((ncol, None))
            ncol += 1
        else:
            cols_of.append((ncol, ncol + 1))
            ncol += 2
    n_struct = ncol
    m_ub, m_eq = len(kept_ub), len(kept_eq)
    n_slack = m_ub
    m = m_ub + m_eq

    def expand(row):
        out = [_ZERO] * n_struct
        for j, v in enumerate(row):
            if v:
                p, q = cols_of[j]
                out[p] = v
                if q is not None:
                    out[q] = -v
        return out

    # artificials only where the slack cannot serve as the initial basis
    need_art = []
    for i, (row, b) in enumerate(kept_ub):
        need_art.append(b < 0)
    need_art.extend([True] * m_eq)
    art_index = {}
    for i, flag in enumerate(need_art):
        if flag:
            art_index[i] = n_struct + n_slack + len(art_index)
    total = n_struct + n_slack + len(art_index)

    rows = []
    basis = []
    for i in range(m):
        if i < m_ub:
            row, b = kept_ub[i]
            body = expand(row) + [_ZERO] * (n_slack + len(art_index)) + [b]
            body[n_struct + i] = _ONE
        else:
            row, b = kept_eq[i - m_ub]
            body = expand(row) + [_ZERO] * (n_slack + len(art_index)) + [b]
        if body[-1] < 0:
            body = [-v for v in body]
        if i in art_index:
            body[art_index[i]] = _ONE
            basis.append(art_index[i])
        else:
            basis.append(n_struct + i)
        rows.append(body)

    arts = set(art_index.values())
    if arts:
        # phase I: maximise -sum(artificials)
        obj = [_ZERO] * (total + 1)
        for a in arts:
            obj[a] = _ONE
        for i, bv in enumerate(basis):
            if bv in arts:
                obj[:] = [o - v for o, v in zip(obj, rows[i])]
        _run(rows, obj, basis, range(total))
        if obj[-1] != 0:
            raise InfeasibleError("linear system has no solution")
        # drive zero-level artificials out of the basis
        i = 0
        while i < len(rows):
            if basis[i] in arts:
                col = next((j for j in range(n_struct + n_slack) if rows[i][j] != 0), None)
                if col is None:
                    del rows[i]
                    del basis[i]
                    continue
                _pivot(rows, obj, i, col)
                basis[i] = col
            i += 1

    live = n_struct + n_slack
    cost = [_ZERO] * (total + 1)
    for j in range(n):
        p, q = cols_of[j]
        cost[p] = c[j]
        if q is not None:
            cost[q] = -c[j]
    obj = [-v for v in cost]
    for i, bv in enumerate(basis):
        if cost[bv]:
            f = cost[bv]
            obj[:] = [o + f * v for o, v in zip(obj, rows[i])]
    _run(rows, obj, basis, range(live))

    y = [_ZERO] * total
    for i, bv in enumerate(basis):
        y[bv] = rows[i][-1]
    x = []
    for j in range(n):
        p, q = cols_of[j]
        x.append(y[p] - (y[q] if q is not None else _ZERO))
    value = sum((cj * xj for cj, xj in zip(c, x)), _ZERO)
    return LPSolution(value=value, x=tuple(x))


def feasible_point(A_ub=(), b_ub=(), A_eq=(), b_eq=(), n: int | None = None):
    """Some point of the system, or ``None`` when it is empty."""
    if n is None:
        n = len(A_ub[0]) if A_ub else len(A_eq[0])
    try:
        return maximize([0] * n, A_ub, b_ub, A_eq, b_eq).x
    except InfeasibleError:
        return None
