"""Exact two-phase simplex (Bland's rule) over ``Fraction``.

Problems have the form ``min/max c.x  s.t.  A x <= b`` with ``x`` free.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import dot, fvec

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LPResult:
    """Outcome of :func:`lp_solve`.

    ``dual`` holds row multipliers ``y >= 0`` with ``A^T y = c`` and
    ``value = b.y`` for a maximisation (``A^T y = -c`` and ``value = -b.y``
    for a minimisation). ``ray`` is a direction ``d`` with ``A d <= 0`` that
    improves the objective without bound.
    """

    status: str
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None
    dual: tuple[Fraction, ...] | None = None
    ray: tuple[Fraction, ...] | None = None


def _rows_of(feasible) -> tuple[list[tuple[Fraction, ...]], list[Fraction], int]:
    from .polyhedron import HPoly, Polyhedron

    if isinstance(feasible, Polyhedron):
        feasible = feasible.hrep()
    if isinstance(feasible, HPoly):
        if any(r.strict for r in feasible.rows):
            raise ValueError("lp_solve needs closed feasible sets; pass the closure")
        return [r.normal for r in feasible.rows], [r.offset for r in feasible.rows], feasible.dim
    A, b, n = feasible
    return [fvec(r) for r in A], list(fvec(b)), n


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, i: int, j: int, objs: list[list[Fraction]]) -> None:
        row = self.rows[i]
        p = row[j]
        if p != 1:
            row[:] = [x / p for x in row]
            self.rhs[i] /= p
        for k, other in enumerate(self.rows):
            if k != i and other[j] != 0:
                f = other[j]
                other[:] = [x - f * y for x, y in zip(other, row)]
                self.rhs[k] -= f * self.rhs[i]
        for obj in objs:
            if obj[j] != 0:
                f = obj[j]
                obj[:-1] = [x - f * y for x, y in zip(obj[:-1], row)]
                obj[-1] -= f * self.rhs[i]
        self.basis[i] = j

    def run(self, obj: list[Fraction], allowed: set[int], extra: list[list[Fraction]]) -> int | None:
        """Minimise; ``obj`` holds reduced costs and ``-value`` last. Returns an unbounded column or None."""
        while True:
            enter = next((j for j in sorted(allowed) if obj[j] < 0), None)
            if enter is None:
                return None
            best = None
            for i, row in enumerate(self.rows):
                if row[enter] > 0:
                    ratio = self.rhs[i] / row[enter]
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return enter
            self.pivot(best[1], enter, [obj] + extra)


def lp_solve(objective: Sequence, feasible, sense: str = "min") -> LPResult:
    """Solve an LP exactly.

    ``feasible`` is an :class:`HPoly`, a :class:`Polyhedron` or a triple
    ``(A, b, dim)``.
    """
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    A, b, n = _rows_of(feasible)
    c = fvec(objective)
    if len(c) != n or any(len(r) != n for r in A):
        raise ValueError("dimension mismatch in lp_solve")
    cmin = c if sense == "min" else tuple(-x for x in c)
    m = len(A)
    if m == 0:
        if any(cmin):
            return LPResult(UNBOUNDED, ray=tuple(-x for x in cmin))
        zero = (Fraction(0),) * n
        return LPResult(OPTIMAL, Fraction(0), zero, dual=())

    # columns: x+ (n), x- (n), slack (m), artificial (one per flipped row)
    flipped = [bi < 0 for bi in b]
    n_art = sum(flipped)
    width = 2 * n + m + n_art
    rows, rhs, basis = [], [], []
    art_cols = []
    a_next = 2 * n + m
    for i in range(m):
        sgn = -1 if flipped[i] else 1
        row = [Fraction(0)] * width
        for j in range(n):
            row[j] = sgn * A[i][j]
            row[n + j] = -sgn * A[i][j]
        row[2 * n + i] = Fraction(sgn)
        if flipped[i]:
            row[a_next] = Fraction(1)
            basis.append(a_next)
            art_cols.append(a_next)
            a_next += 1
        else:
            basis.append(2 * n + i)
        rows.append(row)
        rhs.append(sgn * b[i])
    tab = _Tableau(rows, rhs, basis)

    cost = [Fraction(0)] * width
    for j in range(n):
        cost[j] = cmin[j]
        cost[n + j] = -cmin[j]
    obj2 = cost + [Fraction(0)]

    if n_art:
        obj1 = [Fraction(0)] * (width + 1)
        for a in art_cols:
            obj1[a] = Fraction(1)
        for i, bv in enumerate(basis):
            if bv in art_cols:
                obj1[:-1] = [x - y for x, y in zip(obj1[:-1], rows[i])]
                obj1[-1] -= rhs[i]
        tab.run(obj1, set(range(width)), [obj2])
        if -obj1[-1] > 0:
            return LPResult(INFEASIBLE)
        art = set(art_cols)
        for i, bv in enumerate(tab.basis):
            if bv in art:
                j = next((j for j in range(2 * n + m) if rows[i][j] != 0), None)
                if j is not None:
                    tab.pivot(i, j, [obj2])
        allowed = set(range(2 * n + m))
    else:
        allowed = set(range(width))

    # make the phase-two objective consistent with the current basis
    for i, bv in enumerate(tab.basis):
        if obj2[bv] != 0:
            f = obj2[bv]
            obj2[:-1] = [x - f * y for x, y in zip(obj2[:-1], rows[i])]
            obj2[-1] -= f * rhs[i]

    enter = tab.run(obj2, allowed, [])
    if enter is not None:
        z = [Fraction(0)] * width
        z[enter] = Fraction(1)
        for i, bv in enumerate(tab.basis):
            z[bv] -= rows[i][enter]
        d = tuple(z[j] - z[n + j] for j in range(n))
        return LPResult(UNBOUNDED, ray=d)

    z = [Fraction(0)] * width
    for i, bv in enumerate(tab.basis):
        z[bv] = rhs[i]
    x = tuple(z[j] - z[n + j] for j in range(n))
    y = tuple(obj2[2 * n + i] for i in range(m))
    value = dot(c, x)
    return LPResult(OPTIMAL, Fraction(value), x, dual=y)


def lp_feasible_point(A, b, n) -> tuple[Fraction, ...] | None:
    res = lp_solve((0,) * n, (A, b, n), "min")
    return res.point if res.status == OPTIMAL else None
