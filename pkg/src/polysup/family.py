"""Indexed families {f_t, t in T}, their supremum, eps-active sets and the
closure condition ``cl f = sup_t cl f_t``.

Three kinds of index set are materialised:

* :class:`Finite` -- an explicit list of members;
* :class:`Sequence` -- a finite prefix ``f_1..f_N`` plus a user-declared limit
  ``f_inf = limsup f_n`` standing in for the tail (the only compactification
  points ever built are such declared limits);
* :class:`Parametric` -- ``t`` in ``[lo, hi]`` with polynomial coefficients,
  evaluated on a grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence as Seq, Union

from .exactgeom import HPoly, Polyhedron, equals
from .exactgeom.linalg import frac, fvec
from .pwconvex import INF, AffinePiece, PolyFunc, evaluate

OMEGA = "Ω"


@dataclass(frozen=True)
class Finite:
    members: tuple[PolyFunc, ...]
    labels: tuple[str, ...] = ()
    # set by discretize(): (parametric source, grid) so callers can refine
    source: "tuple[Parametric, int] | None" = field(default=None, compare=False)

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i + 1) for i in range(len(self.members))))
        if len(self.labels) != len(self.members):
            raise ValueError("one label per member")
        if self.members and len({m.dim for m in self.members}) != 1:
            raise ValueError("members must share the ambient dimension")

    @property
    def dim(self) -> int:
        return self.members[0].dim


@dataclass(frozen=True)
class Sequence:
    prefix: tuple[PolyFunc, ...]
    limit: PolyFunc
    slack: Fraction = Fraction(0)

    def __post_init__(self):
        if any(m.dim != self.limit.dim for m in self.prefix):
            raise ValueError("members must share the ambient dimension")

    @property
    def dim(self) -> int:
        return self.limit.dim


@dataclass(frozen=True)
class Parametric:
    """``f_t = max_k (<a_k(t), x> + b_k(t))`` on a fixed domain, ``t`` in ``[lo, hi]``.

    ``coeffs[k][j]`` lists the polynomial coefficients (ascending powers of
    ``t``) of entry ``j`` of piece ``k``; entries ``0..n-1`` are the slope and
    entry ``n`` the intercept.
    """

    lo: Fraction
    hi: Fraction
    coeffs: tuple[tuple[tuple[Fraction, ...], ...], ...]
    dim: int
    grid: int = 9
    domain: HPoly | None = None

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValueError("empty parameter range")
        for pc in self.coeffs:
            if len(pc) != self.dim + 1:
                raise ValueError("each parametric piece needs dim + 1 coefficient polynomials")

    def member(self, t) -> PolyFunc:
        t = frac(t)
        pieces = []
        for pc in self.coeffs:
            vals = [sum((c * t ** k for k, c in enumerate(poly)), Fraction(0)) for poly in pc]
            pieces.append(AffinePiece(tuple(vals[: self.dim]), vals[self.dim]))
        return PolyFunc(tuple(pieces), self.domain or HPoly.universe(self.dim))


IndexedFamily = Union[Finite, Sequence, Parametric]


@dataclass(frozen=True)
class ActiveSet:
    """Indices with ``f(x) - f_t(x) <= eps``, with their gaps."""

    indices: tuple[tuple[str, Fraction], ...]
    includes_limit: bool
    eps: Fraction

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lab for lab, _ in self.indices)


def finite(members, labels=None) -> Finite:
    return Finite(tuple(members), tuple(labels or ()))


def discretize(fam: Parametric, grid: int | None = None) -> Finite:
    """Members at ``t = lo + k (hi - lo) / (grid - 1)``, ``k = 0..grid-1``."""
    grid = fam.grid if grid is None else grid
    if grid < 2:
        raise ValueError("grid must be at least 2")
    ts = [fam.lo + k * (fam.hi - fam.lo) / (grid - 1) for k in range(grid)]
    return Finite(tuple(fam.member(t) for t in ts), tuple(f"t={t}" for t in ts), source=(fam, grid))


def refine(fam: Finite) -> Finite:
    """Next nested grid (``2g - 1`` points) of a discretized parametric family."""
    if fam.source is None:
        raise ValueError("family was not produced by discretize()")
    par, grid = fam.source
    return discretize(par, 2 * grid - 1)


def augmented_family(fam: Sequence, tilde: bool = False, x=None) -> Finite:
    """``{f_1, ..., f_N; f_inf}`` with the limit tagged ``Ω``.

    With ``tilde`` the prefix is first filtered to members approaching the
    supremum at ``x`` (zero gap), mirroring the selection of nets along which
    ``f_t(x) -> f(x)``.
    """
    labels = [str(i + 1) for i in range(len(fam.prefix))]
    members = list(fam.prefix)
    if tilde:
        if x is None:
            raise ValueError("the tilde selection needs a reference point")
        fx = evaluate(sup_function(fam), x)
        keep = [i for i, m in enumerate(members) if fx != INF and evaluate(m, x) == fx]
        members = [members[i] for i in keep]
        labels = [labels[i] for i in keep]
    return Finite(tuple(members) + (fam.limit,), tuple(labels) + (OMEGA,))


def as_finite(fam: IndexedFamily) -> Finite:
    """The finite surrogate every computation runs on."""
    if isinstance(fam, Finite):
        return fam
    if isinstance(fam, Sequence):
        return augmented_family(fam)
    if isinstance(fam, Parametric):
        return discretize(fam)
    raise TypeError(f"not an indexed family: {fam!r}")


def sup_function(fam: IndexedFamily) -> PolyFunc:
    """Pointwise max: pieces concatenated, domains intersected.

    For a Sequence this is the sup over prefix and declared limit, exact when
    the limit dominates the tail.
    """
    fin = as_finite(fam)
    if not fin.members:
        raise ValueError("empty family")
    pieces, seen, rows = [], set(), []
    for m in fin.members:
        for p in m.pieces:
            if p not in seen:
                seen.add(p)
                pieces.append(p)
        rows.extend(m.domain.rows)
    return PolyFunc(tuple(pieces), HPoly(tuple(rows), fin.dim))


def active_set(fam: IndexedFamily, x, eps=0) -> ActiveSet:
    x = fvec(x)
    eps = frac(eps)
    fin = as_finite(fam)
    fx = evaluate(sup_function(fin), x)
    if fx == INF:
        return ActiveSet((), False, eps)
    out = []
    for lab, m in zip(fin.labels, fin.members):
        gap = fx - evaluate(m, x)
        if gap <= eps:
            out.append((lab, gap))
    return ActiveSet(tuple(out), any(lab == OMEGA for lab, _ in out), eps)


def closure_condition_check(fam: IndexedFamily) -> bool:
    """Decide ``cl f = sup_t cl f_t``.

    Both sides share the same pieces, so they agree iff their domains do:
    ``cl(∩ D_t)`` against ``∩ cl(D_t)``, with the closure of an empty set empty.
    """
    fin = as_finite(fam)
    n = fin.dim
    inter = sup_function(fin).domain
    lhs = inter.closure() if inter.is_nonempty() else HPoly.empty(n)
    rows = []
    for m in fin.members:
        if m.domain.is_nonempty():
            rows.extend(m.domain.closure().rows)
        else:
            rows.extend(HPoly.empty(n).rows)
    rhs = HPoly(tuple(rows), n)
    return equals(Polyhedron(n, h=lhs), Polyhedron(n, h=rhs))


def default_probe_points(dim: int) -> list[tuple[Fraction, ...]]:
    pts = [(Fraction(0),) * dim]
    for i in range(dim):
        for s in (1, -1):
            pts.append(tuple(Fraction(s if j == i else 0) for j in range(dim)))
    return pts


def tail_consistency(fam: Sequence, points: Seq | None = None) -> list[str]:
    """Warnings where the last ``ceil(N/3)`` prefix members exceed the declared limit by more than the slack."""
    pts = [fvec(p) for p in points] if points is not None else default_probe_points(fam.dim)
    n = len(fam.prefix)
    tail = range(n - math.ceil(n / 3), n)
    warnings = []
    for z in pts:
        lim = evaluate(fam.limit, z)
        for i in tail:
            v = evaluate(fam.prefix[i], z)
            if v != INF and lim != INF and v > lim + fam.slack:
                warnings.append(
                    f"member {i + 1} exceeds the declared limit at {tuple(map(str, z))}: {v} > {lim} + {fam.slack}"
                )
            elif v != INF and lim == INF:
                continue
    return warnings
