"""Polyhedral convex functions: max of affine pieces plus the indicator of a
(possibly non-closed) polyhedral domain.

Non-lsc functions arise only from strict domain rows; piece values never
disagree with the closure on the domain, so ``f* = (cl f)*``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .exactgeom import HPoly, HRow, Polyhedron, hrow
from .exactgeom.linalg import dot, frac, fvec, is_zero, nullspace

INF = math.inf


@dataclass(frozen=True)
class AffinePiece:
    slope: tuple[Fraction, ...]
    intercept: Fraction

    def __call__(self, x: Sequence) -> Fraction:
        return dot(self.slope, x) + self.intercept


def piece(slope: Iterable, intercept) -> AffinePiece:
    return AffinePiece(fvec(slope), frac(intercept))


@dataclass(frozen=True)
class PolyFunc:
    pieces: tuple[AffinePiece, ...]
    domain: HPoly

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("a PolyFunc needs at least one affine piece")
        for p in self.pieces:
            if len(p.slope) != self.domain.dim:
                raise ValueError("piece slope does not match the domain dimension")

    @property
    def dim(self) -> int:
        return self.domain.dim

    def __call__(self, x: Sequence):
        return evaluate(self, x)

    @property
    def is_lsc(self) -> bool:
        """No attainable strict face: lsc iff the domain equals its closure."""
        if not self.domain.has_strict:
            return True
        return _domain_is_closed(self.domain)

    @property
    def is_proper(self) -> bool:
        return _nonempty(self.domain)

    def __repr__(self) -> str:
        ps = ", ".join(f"{_lin(p)}" for p in self.pieces)
        dom = "" if not self.domain.rows else f" on {len(self.domain.rows)} rows"
        return f"PolyFunc(max[{ps}]{dom})"


def _lin(p: AffinePiece) -> str:
    terms = [f"{c}*x{i + 1}" for i, c in enumerate(p.slope) if c]
    if p.intercept or not terms:
        terms.append(str(p.intercept))
    return " + ".join(terms)


@lru_cache(maxsize=4096)
def _nonempty(h: HPoly) -> bool:
    return h.is_nonempty()


@lru_cache(maxsize=4096)
def _domain_is_closed(h: HPoly) -> bool:
    if not _nonempty(h):
        return True
    closed = Polyhedron(h.dim, h=h.closure())
    for r in h.rows:
        if r.strict and not is_zero(r.normal):
            # strict row attained on the closure -> a missing face
            from .exactgeom import lp_solve

            res = lp_solve(r.normal, closed, "max")
            if res.status == "optimal" and res.value >= r.offset:
                return False
            if res.status == "unbounded":
                continue
    return True


def polyfunc(pieces: Iterable, domain: Iterable = (), dim: int | None = None) -> PolyFunc:
    """Build a PolyFunc from ``[(slope, intercept), ...]`` and ``[(normal, offset[, strict]), ...]``."""
    ps = tuple(p if isinstance(p, AffinePiece) else piece(p[0], p[1]) for p in pieces)
    if dim is None:
        dim = len(ps[0].slope)
    rows = tuple(r if isinstance(r, HRow) else hrow(r[0], r[1], *r[2:]) for r in domain)
    return PolyFunc(ps, HPoly(rows, dim))


def affine(slope: Iterable, intercept=0) -> PolyFunc:
    return polyfunc([(slope, intercept)])


def constant(value, dim: int) -> PolyFunc:
    return polyfunc([((0,) * dim, value)], dim=dim)


def indicator(domain: HPoly) -> PolyFunc:
    return PolyFunc((AffinePiece((Fraction(0),) * domain.dim, Fraction(0)),), domain)


def evaluate(f: PolyFunc, x: Sequence):
    """Exact value, ``inf`` off the domain."""
    x = fvec(x)
    if len(x) != f.dim:
        raise ValueError("dimension mismatch")
    if not f.domain.contains(x):
        return INF
    return max(p(x) for p in f.pieces)


def closure(f: PolyFunc) -> PolyFunc:
    """Same pieces on the closed domain (``+inf`` stays ``+inf`` for an empty domain)."""
    if not f.domain.has_strict:
        return f
    if not f.is_proper:
        return PolyFunc(f.pieces, HPoly.empty(f.dim))
    return PolyFunc(f.pieces, f.domain.closure())


def with_domain(f: PolyFunc, extra: HPoly) -> PolyFunc:
    return PolyFunc(f.pieces, f.domain.intersect(extra))


def restrict(f: PolyFunc, subspace: Sequence[Sequence] | None, domain: HPoly | None = None) -> PolyFunc:
    """``f + I_{L ∩ D}`` with ``L = span(subspace)`` (``None`` means the whole space)."""
    rows = []
    if subspace is not None:
        for nvec in nullspace([fvec(v) for v in subspace], f.dim):
            rows.append(HRow(nvec, Fraction(0)))
            rows.append(HRow(tuple(-x for x in nvec), Fraction(0)))
    extra = HPoly(tuple(rows), f.dim)
    if domain is not None:
        extra = extra.intersect(domain)
    return with_domain(f, extra)


def epigraph(f: PolyFunc) -> Polyhedron:
    """Closed epigraph ``{(x, r) : r >= piece(x), x in cl dom f}`` in dimension ``n + 1``."""
    n = f.dim
    cf = closure(f)
    rows = [HRow(p.slope + (Fraction(-1),), -p.intercept) for p in cf.pieces]
    rows += [HRow(r.normal + (Fraction(0),), r.offset) for r in cf.domain.rows]
    return Polyhedron(n + 1, h=HPoly(tuple(rows), n + 1))


@lru_cache(maxsize=4096)
def conjugate(f: PolyFunc) -> PolyFunc:
    """Fenchel conjugate, read off the V-representation of the closed epigraph.

    Epigraph vertices ``(x_v, r_v)`` give pieces ``<x_v, s> - r_v``; rays
    ``(d, d_r)`` give domain rows ``<d, s> <= d_r``.
    """
    if not f.is_proper:
        raise ValueError("conjugate of an improper function")
    n = f.dim
    v = epigraph(f).vrep()
    pieces = tuple(sorted({AffinePiece(p[:n], -p[n]) for p in v.vertices}, key=lambda a: (a.slope, a.intercept)))
    rows = []
    for d in v.rays:
        if is_zero(d[:n]):
            continue
        rows.append(HRow(d[:n], d[n]))
    for l in v.lineality:
        rows.append(HRow(l[:n], l[n]))
        rows.append(HRow(tuple(-x for x in l[:n]), -l[n]))
    return PolyFunc(pieces, HPoly(tuple(rows), n))


def eps_subdiff(f: PolyFunc, x: Sequence, eps=0) -> Polyhedron:
    """``{s : f(x) + f*(s) - <s, x> <= eps}``; empty when ``f(x)`` is not finite."""
    x = fvec(x)
    eps = frac(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    fx = evaluate(f, x)
    if fx == INF:
        return Polyhedron.empty(f.dim)
    fs = conjugate(f)
    rows = [HRow(tuple(a - b for a, b in zip(p.slope, x)), eps - fx - p.intercept) for p in fs.pieces]
    rows += list(fs.domain.rows)
    return Polyhedron(f.dim, h=HPoly(tuple(rows), f.dim))


@dataclass(frozen=True)
class LiftedSubdiff:
    """The graph ``{(s, eps) : eps >= 0, s in eps_subdiff(f, x, eps)}`` as one polyhedron."""

    poly: Polyhedron
    dim: int

    def slice(self, eps) -> Polyhedron:
        eps = frac(eps)
        n = self.dim
        rows = tuple(HRow(r.normal[:n], r.offset - r.normal[n] * eps) for r in self.poly.hrep().rows)
        if eps < 0:
            return Polyhedron.empty(n)
        return Polyhedron(n, h=HPoly(rows, n))

    def breakpoints(self) -> list[Fraction]:
        """Positive eps-coordinates of the graph's vertices."""
        return sorted({v[self.dim] for v in self.poly.vrep().vertices if v[self.dim] > 0})

    @property
    def is_empty(self) -> bool:
        return self.poly.is_empty


@lru_cache(maxsize=8192)
def _lifted(f: PolyFunc, x: tuple) -> LiftedSubdiff:
    n = f.dim
    fx = evaluate(f, x)
    if fx == INF:
        return LiftedSubdiff(Polyhedron.empty(n + 1), n)
    fs = conjugate(f)
    rows = [HRow(tuple(a - b for a, b in zip(p.slope, x)) + (Fraction(-1),), -fx - p.intercept) for p in fs.pieces]
    rows += [HRow(r.normal + (Fraction(0),), r.offset) for r in fs.domain.rows]
    rows.append(HRow((Fraction(0),) * n + (Fraction(-1),), Fraction(0)))
    return LiftedSubdiff(Polyhedron(n + 1, h=HPoly(tuple(rows), n + 1)), n)


def lifted_eps_subdiff(f: PolyFunc, x: Sequence) -> LiftedSubdiff:
    return _lifted(f, fvec(x))


def subdiff(f: PolyFunc, x: Sequence) -> Polyhedron:
    return eps_subdiff(f, x, 0)
