"""Ground truth for ``∂f(x)`` built from the aggregate supremum alone.

Nothing here looks at active sets or ε-limits: the family is collapsed to the
single function ``f = sup_t f_t`` and its closed epigraph does the rest.
"""
from __future__ import annotations

from fractions import Fraction

from .exactgeom import OPTIMAL, HPoly, HRow, Polyhedron, lp_solve
from .exactgeom.linalg import dot, fvec
from .family import IndexedFamily, sup_function
from .pwconvex import INF, PolyFunc, epigraph, evaluate


def _aggregate(fam) -> PolyFunc:
    return fam if isinstance(fam, PolyFunc) else sup_function(fam)


def oracle_subdiff(fam: IndexedFamily | PolyFunc, x) -> Polyhedron:
    """``{s : <s, y> - r <= <s, x> - f(x)`` for every generator ``(y, r)`` of epi f``}``."""
    f = _aggregate(fam)
    x = fvec(x)
    n = f.dim
    fx = evaluate(f, x)
    if fx == INF:
        return Polyhedron.empty(n)
    v = epigraph(f).vrep()
    rows = []
    for p in v.vertices:
        y, r = p[:n], p[n]
        rows.append(HRow(tuple(a - b for a, b in zip(y, x)), r - fx))
    for d in v.rays:
        rows.append(HRow(d[:n], d[n]))
    for l in v.lineality:
        rows.append(HRow(l[:n], l[n]))
        rows.append(HRow(tuple(-c for c in l[:n]), -l[n]))
    return Polyhedron(n, h=HPoly(tuple(rows), n))


def oracle_membership(fam: IndexedFamily | PolyFunc, x, xstar) -> bool:
    """Subgradient inequality ``min_y f(y) - <xstar, y> >= f(x) - <xstar, x>`` by one LP."""
    f = _aggregate(fam)
    x, xstar = fvec(x), fvec(xstar)
    fx = evaluate(f, x)
    if fx == INF:
        return False
    res = lp_solve(tuple(-c for c in xstar) + (Fraction(1),), epigraph(f), "min")
    if res.status != OPTIMAL:
        return False
    return res.value >= fx - dot(xstar, x)
