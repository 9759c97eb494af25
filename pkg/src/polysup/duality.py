"""Fenchel duality for nonconvex functions given by finitely many samples.

A :class:`DiscreteFunc` is ``g(x_i) = v_i`` and ``+inf`` elsewhere. Its
conjugate ``f = max_i(<x_i, .> - v_i)`` is finite everywhere, so
``N_{dom f} = {0}`` and ``cl g = g``; the subdifferential of ``f`` is the hull
of the samples that attain the max.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .exactgeom import HPoly, Polyhedron, equals, hull_union
from .exactgeom.linalg import dot, frac, fvec
from .oracle import oracle_subdiff
from .pwconvex import AffinePiece, PolyFunc


@dataclass(frozen=True)
class DiscreteFunc:
    samples: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    dim: int

    def __post_init__(self):
        if not self.samples:
            raise ValueError("a DiscreteFunc needs at least one sample")
        pts = [p for p, _ in self.samples]
        if any(len(p) != self.dim for p in pts):
            raise ValueError("sample dimension mismatch")
        if len(set(pts)) != len(pts):
            raise ValueError("sample points must be distinct")


def discrete(samples: Iterable) -> DiscreteFunc:
    """From ``[(point, value), ...]``."""
    ss = tuple((fvec(p), frac(v)) for p, v in samples)
    return DiscreteFunc(ss, len(ss[0][0]) if ss else 0)


def conjugate_discrete(g: DiscreteFunc) -> PolyFunc:
    pieces = tuple(AffinePiece(p, -v) for p, v in g.samples)
    return PolyFunc(pieces, HPoly.universe(g.dim))


def _conj_value(g: DiscreteFunc, xstar) -> Fraction:
    return max(dot(p, xstar) - v for p, v in g.samples)


def inverse_eps_subdiff(g: DiscreteFunc, xstar, eps=0) -> list[tuple[Fraction, ...]]:
    """Samples with ``<x_i, xstar> - g_i >= f(xstar) - eps``, i.e. ``(∂_ε g)^{-1}(xstar)``."""
    xstar = fvec(xstar)
    eps = frac(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    top = _conj_value(g, xstar)
    return [p for p, v in g.samples if dot(p, xstar) - v >= top - eps]


def conj_subdiff(g: DiscreteFunc, xstar) -> Polyhedron:
    """``∂f(xstar) = co (∂g)^{-1}(xstar) + N_{dom f}(xstar)``, the cone being ``{0}`` here."""
    return hull_union([Polyhedron.point(p) for p in inverse_eps_subdiff(g, xstar, 0)], g.dim)


def argmin_samples(g: DiscreteFunc) -> list[tuple[Fraction, ...]]:
    low = min(v for _, v in g.samples)
    return [p for p, v in g.samples if v == low]


def argmin_convexified(g: DiscreteFunc) -> Polyhedron:
    """``Argmin(cl co g) = co Argmin g``, cross-checked against ``∂f(0)``."""
    out = hull_union([Polyhedron.point(p) for p in argmin_samples(g)], g.dim)
    at_zero = oracle_subdiff(conjugate_discrete(g), (Fraction(0),) * g.dim)
    if not equals(out, at_zero):
        raise AssertionError("argmin of the convexification disagrees with the subdifferential of g* at 0")
    return out
