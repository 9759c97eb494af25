"""Seeded random instance generators shared by the test modules."""
from __future__ import annotations

import random
from fractions import Fraction

from polysup.duality import DiscreteFunc, discrete
from polysup.exactgeom import HPoly, HRow, Polyhedron, lp_solve
from polysup.family import Finite
from polysup.pwconvex import AffinePiece, PolyFunc, evaluate


def rat(rng: random.Random, lo: int = -5, hi: int = 5, den: int = 4) -> Fraction:
    d = rng.randint(1, den)
    return Fraction(rng.randint(lo * d, hi * d), d)


def rvec(rng: random.Random, n: int, lo: int = -5, hi: int = 5, den: int = 4) -> tuple[Fraction, ...]:
    return tuple(rat(rng, lo, hi, den) for _ in range(n))


def small_vec(rng: random.Random, n: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-4, 4), rng.choice((1, 2))) for _ in range(n))


def rand_pieces(rng: random.Random, n: int, k: int) -> tuple[AffinePiece, ...]:
    return tuple(AffinePiece(rvec(rng, n), rat(rng)) for _ in range(k))


def rand_polyfunc(rng: random.Random, n: int, max_pieces: int = 4, domain: HPoly | None = None) -> PolyFunc:
    return PolyFunc(rand_pieces(rng, n, rng.randint(1, max_pieces)), domain or HPoly.universe(n))


def tie_at(f: PolyFunc, x, target: Fraction) -> PolyFunc:
    """Shift every piece so that ``f(x) = target``."""
    shift = target - evaluate(f, x)
    return PolyFunc(tuple(AffinePiece(p.slope, p.intercept + shift) for p in f.pieces), f.domain)


def rand_finite_family(
    rng: random.Random, n: int, max_members: int = 6, max_pieces: int = 4, domain_for=None
) -> tuple[Finite, tuple[Fraction, ...]]:
    """Family plus a point where several members attain the maximum."""
    x = small_vec(rng, n)
    m = rng.randint(1, max_members)
    members = []
    for _ in range(m):
        dom = domain_for(rng) if domain_for else None
        f = rand_polyfunc(rng, n, max_pieces, dom)
        if evaluate(f, x) == float("inf"):
            continue
        if rng.random() < 0.6:
            f = tie_at(f, x, Fraction(0))
        else:
            f = tie_at(f, x, -Fraction(rng.randint(1, 4), rng.randint(1, 3)))
        members.append(f)
    if not members:
        members.append(tie_at(rand_polyfunc(rng, n, max_pieces), x, Fraction(0)))
    return Finite(tuple(members)), x


def box_rows(n: int, lo, hi) -> list[HRow]:
    rows = []
    for i in range(n):
        e = tuple(Fraction(int(j == i)) for j in range(n))
        rows.append(HRow(e, Fraction(hi)))
        rows.append(HRow(tuple(-c for c in e), -Fraction(lo)))
    return rows


def rand_bounded_domain(rng: random.Random, n: int) -> HPoly:
    """A box around the origin cut by a few random half-spaces that keep the origin interior."""
    rows = box_rows(n, -rng.randint(1, 3), rng.randint(1, 3))
    for _ in range(rng.randint(0, 2)):
        a = rvec(rng, n, -3, 3, 2)
        if any(a):
            rows.append(HRow(a, Fraction(rng.randint(1, 4), 2)))
    return HPoly(tuple(rows), n)


def boundary_point(rng: random.Random, dom: HPoly) -> tuple[Fraction, ...]:
    d = rvec(rng, dom.dim, -3, 3, 1)
    if not any(d):
        d = (Fraction(1),) + (Fraction(0),) * (dom.dim - 1)
    return lp_solve(d, dom, "max").point


def rand_discrete(rng: random.Random, n: int, max_samples: int = 8) -> DiscreteFunc:
    k = rng.randint(1, min(max_samples, 7**n))
    pts = set()
    while len(pts) < k:
        pts.add(tuple(Fraction(rng.randint(-3, 3)) for _ in range(n)))
    return discrete([(p, Fraction(rng.randint(-3, 3), rng.choice((1, 2)))) for p in sorted(pts)])


def rand_hpoly(rng: random.Random, n: int, max_rows: int = 8) -> HPoly:
    rows = []
    for _ in range(rng.randint(0, max_rows)):
        rows.append(HRow(rvec(rng, n, -3, 3, 2), rat(rng, -3, 3, 2)))
    return HPoly(tuple(rows), n)


def rand_polytope_with_origin(rng: random.Random, n: int) -> Polyhedron:
    """Random polyhedron containing the origin (possibly unbounded)."""
    rows = []
    for _ in range(rng.randint(1, 7)):
        rows.append(HRow(rvec(rng, n, -3, 3, 2), Fraction(rng.randint(0, 4), rng.randint(1, 2))))
    return Polyhedron(n, h=HPoly(tuple(rows), n))


def rand_sip(rng: random.Random):
    """Random discretized SIP with bounded objective domain.

    Returns ``(problem, lp_optimum_point, lp_optimum_value)``; the constraint
    members are ``a(t).x - (1 + r t^2)`` sampled on a grid of ``t in [0, 1]``,
    so the origin is strictly feasible.
    """
    from polysup.family import Parametric, discretize
    from polysup.sip import SipProblem

    n = rng.randint(1, 3)
    slope_polys = tuple((rat(rng, -3, 3, 2), rat(rng, -3, 3, 2)) for _ in range(n))
    intercept = (Fraction(-1), Fraction(0), -Fraction(rng.randint(0, 4), 2))
    par = Parametric(Fraction(0), Fraction(1), (slope_polys + (intercept,),), n, grid=rng.randint(2, 8))
    cons = discretize(par)
    box = HPoly(tuple(box_rows(n, -4, 4)), n)
    c = rvec(rng, n, -3, 3, 2)
    while not any(c):
        c = rvec(rng, n, -3, 3, 2)
    pieces = [AffinePiece(c, Fraction(0))]
    if rng.random() < 0.3:
        pieces.append(AffinePiece(rvec(rng, n, -3, 3, 2), rat(rng, -2, 0, 2)))
    f0 = PolyFunc(tuple(pieces), box)
    p = SipProblem(f0, cons)
    # epigraph LP: min r  s.t.  piece(x) <= r, constraints <= 0, x in box
    rows = [HRow(pc.slope + (Fraction(-1),), -pc.intercept) for pc in f0.pieces]
    for m in cons.members:
        for pc in m.pieces:
            rows.append(HRow(pc.slope + (Fraction(0),), -pc.intercept))
    rows += [HRow(r.normal + (Fraction(0),), r.offset) for r in box.rows]
    res = lp_solve((Fraction(0),) * n + (Fraction(1),), HPoly(tuple(rows), n + 1), "min")
    return p, res.point[:n], res.value


def feasible_vertex(rng: random.Random, p) -> tuple[Fraction, ...]:
    n = p.dim
    rows = list(p.objective.domain.rows)
    for m in p.constraints.members:
        for pc in m.pieces:
            rows.append(HRow(pc.slope, -pc.intercept))
    d = rvec(rng, n, -3, 3, 1)
    if not any(d):
        d = (Fraction(1),) * n
    return lp_solve(d, HPoly(tuple(rows), n), "max").point


def rand_strict_family(rng: random.Random) -> Finite:
    """Two or three members on random domains with some strict rows."""
    n = rng.randint(1, 2)
    members = []
    for _ in range(rng.randint(2, 3)):
        rows = []
        for _ in range(rng.randint(1, 3)):
            a = tuple(Fraction(rng.randint(-2, 2)) for _ in range(n))
            if not any(a):
                continue
            rows.append(HRow(a, Fraction(rng.randint(-1, 1)), rng.random() < 0.6))
        members.append(PolyFunc(rand_pieces(rng, n, rng.randint(1, 2)), HPoly(tuple(rows), n)))
    return Finite(tuple(members))
