"""Exact convex polyhedra in double description.

An :class:`HPoly` is a list of rows ``<a, x> <= b`` (``<`` when strict); a
:class:`VPoly` is ``co(vertices) + cone(rays) + span(lineality)``. A
:class:`Polyhedron` always denotes a closed set and holds either or both
representations; the missing one is computed on demand by double description.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .dd import cone_generators
from .linalg import (
    dot,
    frac,
    fvec,
    integerize,
    is_zero,
    normalize_direction,
    nullspace,
    reduce_modulo,
    rref,
)


@dataclass(frozen=True)
class HRow:
    normal: tuple[Fraction, ...]
    offset: Fraction
    strict: bool = False

    def holds(self, x: Sequence) -> bool:
        v = dot(self.normal, x)
        return v < self.offset if self.strict else v <= self.offset

    def closed(self) -> "HRow":
        return HRow(self.normal, self.offset, False) if self.strict else self


def hrow(normal: Iterable, offset, strict: bool = False) -> HRow:
    return HRow(fvec(normal), frac(offset), strict)


@dataclass(frozen=True)
class HPoly:
    """``{x : <a_i, x> <= b_i}``; strict rows use ``<``."""

    rows: tuple[HRow, ...]
    dim: int

    def __post_init__(self):
        for r in self.rows:
            if len(r.normal) != self.dim:
                raise ValueError(f"row of length {len(r.normal)} in dimension {self.dim}")

    @classmethod
    def universe(cls, dim: int) -> "HPoly":
        return cls((), dim)

    @classmethod
    def empty(cls, dim: int) -> "HPoly":
        return cls((HRow((Fraction(0),) * dim, Fraction(-1)),), dim)

    @property
    def has_strict(self) -> bool:
        return any(r.strict for r in self.rows)

    def closure(self) -> "HPoly":
        if not self.has_strict:
            return self
        return HPoly(tuple(r.closed() for r in self.rows), self.dim)

    def contains(self, x: Sequence) -> bool:
        return all(r.holds(x) for r in self.rows)

    def intersect(self, other: "HPoly") -> "HPoly":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return HPoly(self.rows + other.rows, self.dim)

    def is_nonempty(self) -> bool:
        """Exact nonemptiness, honouring strict rows."""
        return self.interior_slack(strict_only=True) is not None

    def interior_slack(self, strict_only: bool = False):
        """Find a point where the selected rows hold with a common positive slack.

        With ``strict_only`` only strict rows need slack (nonemptiness test);
        otherwise every row with a nonzero normal does (interior test).
        Returns ``(point, slack)`` or ``None``.
        """
        from .lp import OPTIMAL, lp_solve

        n = self.dim
        A, b = [], []
        need_slack = False
        for r in self.rows:
            wants = r.strict if strict_only else (r.strict or not is_zero(r.normal))
            if is_zero(r.normal):
                if r.offset < 0 or (r.strict and r.offset == 0):
                    return None
                continue
            if wants:
                need_slack = True
            A.append(r.normal + (Fraction(int(wants)),))
            b.append(r.offset)
        A.append((Fraction(0),) * n + (Fraction(1),))
        b.append(Fraction(1))
        res = lp_solve((Fraction(0),) * n + (Fraction(1),), (A, b, n + 1), "max")
        if res.status != OPTIMAL:
            return None
        point, tau = res.point[:n], res.point[n]
        if need_slack and tau <= 0:
            return None
        return point, tau


@dataclass(frozen=True)
class VPoly:
    """``co(vertices) + cone(rays) + span(lineality)``; no vertices means empty."""

    vertices: tuple[tuple[Fraction, ...], ...]
    rays: tuple[tuple[Fraction, ...], ...]
    lineality: tuple[tuple[Fraction, ...], ...]
    dim: int

    def __post_init__(self):
        for g in self.vertices + self.rays + self.lineality:
            if len(g) != self.dim:
                raise ValueError(f"generator of length {len(g)} in dimension {self.dim}")
        if not self.vertices and (self.rays or self.lineality):
            raise ValueError("a V-representation with rays needs at least one vertex")

    @property
    def is_empty(self) -> bool:
        return not self.vertices


class Polyhedron:
    """A closed convex polyhedron with lazily completed double description."""

    __slots__ = ("dim", "_h", "_v", "_canon")

    def __init__(self, dim: int, h: HPoly | None = None, v: VPoly | None = None):
        if h is None and v is None:
            raise ValueError("a polyhedron needs at least one representation")
        if h is not None:
            if h.dim != dim:
                raise ValueError("dimension mismatch between H-rep and polyhedron")
            h = h.closure()
        if v is not None and v.dim != dim:
            raise ValueError("dimension mismatch between V-rep and polyhedron")
        self.dim = dim
        self._h = h
        self._v = v
        self._canon = None

    # constructors ---------------------------------------------------------
    @classmethod
    def from_h(cls, rows: Iterable, dim: int) -> "Polyhedron":
        rs = tuple(r if isinstance(r, HRow) else hrow(r[0], r[1], *r[2:]) for r in rows)
        return cls(dim, h=HPoly(rs, dim))

    @classmethod
    def from_v(cls, vertices: Iterable = (), rays: Iterable = (), lineality: Iterable = (), dim: int | None = None) -> "Polyhedron":
        vs = tuple(fvec(v) for v in vertices)
        rs = tuple(fvec(r) for r in rays)
        ls = tuple(fvec(l) for l in lineality)
        if dim is None:
            gens = vs + rs + ls
            if not gens:
                raise ValueError("dimension required for an empty generator list")
            dim = len(gens[0])
        if not vs:
            rs, ls = (), ()
        return cls(dim, v=VPoly(vs, rs, ls, dim))

    @classmethod
    def empty(cls, dim: int) -> "Polyhedron":
        return cls(dim, h=HPoly.empty(dim), v=VPoly((), (), (), dim))

    @classmethod
    def universe(cls, dim: int) -> "Polyhedron":
        zero = (Fraction(0),) * dim
        lin = tuple(tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim))
        return cls(dim, h=HPoly((), dim), v=VPoly((zero,), (), lin, dim))

    @classmethod
    def point(cls, x: Sequence) -> "Polyhedron":
        x = fvec(x)
        return cls.from_v([x], dim=len(x))

    @classmethod
    def origin(cls, dim: int) -> "Polyhedron":
        return cls.point((0,) * dim)

    # representations -----------------------------------------------------
    def hrep(self) -> HPoly:
        if self._h is None:
            self._h = _v_to_h(self._v)
        return self._h

    def vrep(self) -> VPoly:
        if self._v is None:
            self._v = _h_to_v(self._h)
        return self._v

    def canonical(self) -> "Polyhedron":
        """Irredundant, sorted H- and V-representations of the same set."""
        if self._canon is None:
            if self._h is None:
                h = _v_to_h(self._v)
                v = _h_to_v(h)
            else:
                v = _h_to_v(self._h)
                h = _v_to_h(v)
            c = Polyhedron(self.dim, h=h, v=v)
            c._canon = c
            self._canon = c
        return self._canon

    @property
    def is_empty(self) -> bool:
        return self.vrep().is_empty

    @property
    def is_bounded(self) -> bool:
        v = self.vrep()
        return not v.rays and not v.lineality

    def contains(self, x: Sequence) -> bool:
        return self.hrep().contains(fvec(x))

    def recession_cone(self) -> "Polyhedron":
        v = self.vrep()
        if v.is_empty:
            return Polyhedron.empty(self.dim)
        return Polyhedron.from_v([(0,) * self.dim], v.rays, v.lineality, dim=self.dim)

    def support(self, d: Sequence):
        """``max <d, x>`` over the set read off the V-rep: a Fraction, ``inf`` or ``-inf`` (empty)."""
        import math

        v = self.vrep()
        if v.is_empty:
            return -math.inf
        d = fvec(d)
        if any(dot(d, l) != 0 for l in v.lineality) or any(dot(d, r) > 0 for r in v.rays):
            return math.inf
        return max(dot(d, p) for p in v.vertices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polyhedron):
            return NotImplemented
        return equals(self, other)

    def __hash__(self) -> int:
        c = self.canonical().vrep()
        return hash((self.dim, c.vertices, c.rays, c.lineality))

    def __repr__(self) -> str:
        return f"Polyhedron({describe(self)})"


# --------------------------------------------------------------------------
# conversions

def _canonical_lineality(vectors):
    basis, pivots = rref([v for v in vectors if not is_zero(v)])
    return basis, pivots


def _h_to_v(h: HPoly) -> VPoly:
    n = h.dim
    rows = []
    for r in h.rows:
        if is_zero(r.normal):
            if r.offset < 0:
                return VPoly((), (), (), n)
            continue
        rows.append(integerize(r.normal + (-r.offset,)))
    rows.append((0,) * n + (-1,))
    rays, lin = cone_generators(rows, n + 1)
    verts, dirs = [], []
    for r in rays:
        t = r[n]
        if t > 0:
            verts.append(tuple(Fraction(x, t) for x in r[:n]))
        else:
            dirs.append(tuple(Fraction(x) for x in r[:n]))
    if not verts:
        return VPoly((), (), (), n)
    lbasis, lpiv = _canonical_lineality([tuple(Fraction(x) for x in l[:n]) for l in lin])
    return _canonical_v(verts, dirs, lbasis, lpiv, n)


def _canonical_v(verts, dirs, lbasis, lpiv, n) -> VPoly:
    vs = sorted({reduce_modulo(v, lbasis, lpiv) for v in verts})
    rs = set()
    for d in dirs:
        d = reduce_modulo(d, lbasis, lpiv)
        if not is_zero(d):
            rs.add(normalize_direction(d))
    ls = tuple(normalize_direction(l) for l in lbasis)
    return VPoly(tuple(vs), tuple(sorted(rs)), tuple(sorted(ls)), n)


def _v_to_h(v: VPoly) -> HPoly:
    n = v.dim
    if v.is_empty:
        return HPoly.empty(n)
    cons = []
    for p in v.vertices:
        cons.append(integerize(p + (Fraction(1),)))
    for r in v.rays:
        if not is_zero(r):
            cons.append(integerize(r + (Fraction(0),)))
    for l in v.lineality:
        if not is_zero(l):
            li = integerize(l + (Fraction(0),))
            cons.append(li)
            cons.append(tuple(-x for x in li))
    rays, lin = cone_generators(cons, n + 1)
    eqs = [tuple(Fraction(x) for x in l) for l in lin]
    ebasis, epiv = rref(eqs)
    out = set()
    for e in ebasis:
        e = normalize_direction(e)
        if is_zero(e[:n]):
            continue
        out.add(HRow(e[:n], -e[n]))
        out.add(HRow(tuple(-x for x in e[:n]), e[n]))
    for r in rays:
        r = reduce_modulo(tuple(Fraction(x) for x in r), ebasis, epiv)
        if is_zero(r[:n]):
            continue
        r = normalize_direction(r)
        out.add(HRow(r[:n], -r[n]))
    return HPoly(tuple(sorted(out, key=lambda row: (row.normal, row.offset))), n)


def dd_convert(p: Polyhedron) -> Polyhedron:
    """Return ``p`` with both (canonical) representations filled in."""
    return p.canonical()


# --------------------------------------------------------------------------
# set operations

def _check(a: Polyhedron, b: Polyhedron) -> None:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def contains(a: Polyhedron, x: Sequence) -> bool:
    if len(x) != a.dim:
        raise ValueError("dimension mismatch")
    return a.contains(x)


def is_subset(a: Polyhedron, b: Polyhedron) -> bool:
    """``a ⊆ b`` by testing every generator of ``a`` against the rows of ``b``."""
    _check(a, b)
    va = a.vrep()
    if va.is_empty:
        return True
    hb = b.hrep()
    for row in hb.rows:
        if any(dot(row.normal, p) > row.offset for p in va.vertices):
            return False
        if any(dot(row.normal, r) > 0 for r in va.rays):
            return False
        if any(dot(row.normal, l) != 0 for l in va.lineality):
            return False
    return True


def equals(a: Polyhedron, b: Polyhedron) -> bool:
    return is_subset(a, b) and is_subset(b, a)


def intersect(a: Polyhedron, b: Polyhedron) -> Polyhedron:
    _check(a, b)
    return Polyhedron(a.dim, h=a.hrep().intersect(b.hrep()))


def minkowski_sum(a: Polyhedron, b: Polyhedron) -> Polyhedron:
    """``a + b``; empty if either summand is empty."""
    _check(a, b)
    va, vb = a.vrep(), b.vrep()
    if va.is_empty or vb.is_empty:
        return Polyhedron.empty(a.dim)
    verts = {tuple(x + y for x, y in zip(p, q)) for p in va.vertices for q in vb.vertices}
    return Polyhedron.from_v(sorted(verts), va.rays + vb.rays, va.lineality + vb.lineality, dim=a.dim)


def hull_union(parts: Sequence[Polyhedron], dim: int | None = None) -> Polyhedron:
    """Closed convex hull of a finite union, by merging generators.

    The merged V-rep denotes ``cl co`` of the union; empty parts are ignored.
    """
    parts = list(parts)
    if dim is None:
        if not parts:
            raise ValueError("dimension required for an empty union")
        dim = parts[0].dim
    verts, rays, lin = set(), [], []
    for p in parts:
        if p.dim != dim:
            raise ValueError("dimension mismatch in hull_union")
        v = p.vrep()
        if v.is_empty:
            continue
        verts.update(v.vertices)
        rays.extend(v.rays)
        lin.extend(v.lineality)
    if not verts:
        return Polyhedron.empty(dim)
    return Polyhedron.from_v(sorted(verts), rays, lin, dim=dim)


def cone_hull(parts: Sequence[Polyhedron], dim: int) -> Polyhedron:
    """Closed conical hull of a finite union (``{0}`` for an empty union)."""
    rays, lin = [], []
    for p in parts:
        v = p.vrep()
        if v.is_empty:
            continue
        rays.extend(v.vertices)
        rays.extend(v.rays)
        lin.extend(v.lineality)
    return Polyhedron.from_v([(0,) * dim], [r for r in rays if not is_zero(r)], lin, dim=dim)


def normal_cone(a: Polyhedron, x: Sequence) -> Polyhedron:
    """``N_a(x)``: the cone of active row normals at ``x``; empty when ``x`` is not in ``a``."""
    x = fvec(x)
    if len(x) != a.dim:
        raise ValueError("dimension mismatch")
    h = a.hrep()
    if not h.contains(x):
        return Polyhedron.empty(a.dim)
    active = [r.normal for r in h.rows if not is_zero(r.normal) and dot(r.normal, x) == r.offset]
    return Polyhedron.from_v([(0,) * a.dim], active, dim=a.dim)


def polar(a: Polyhedron) -> Polyhedron:
    """``{y : <y, z> <= 1 for all z in a}``."""
    v = a.vrep()
    n = a.dim
    if v.is_empty:
        return Polyhedron.universe(n)
    rows = [HRow(p, Fraction(1)) for p in v.vertices]
    rows += [HRow(r, Fraction(0)) for r in v.rays]
    for l in v.lineality:
        rows += [HRow(l, Fraction(0)), HRow(tuple(-x for x in l), Fraction(0))]
    return Polyhedron(n, h=HPoly(tuple(rows), n))


def project(a: Polyhedron, coords: Sequence[int]) -> Polyhedron:
    """Projection onto ``coords`` (in the given order) by Fourier–Motzkin elimination."""
    n = a.dim
    coords = list(coords)
    if any(c < 0 or c >= n for c in coords):
        raise ValueError("coordinate out of range")
    rows = [(list(r.normal), r.offset) for r in a.hrep().rows]
    if a.is_empty:
        return Polyhedron.empty(len(coords))
    for j in [c for c in range(n) if c not in coords]:
        pos = [r for r in rows if r[0][j] > 0]
        negs = [r for r in rows if r[0][j] < 0]
        out = [r for r in rows if r[0][j] == 0]
        for ap, bp in pos:
            for an, bn in negs:
                fp, fn = ap[j], -an[j]
                normal = [fn * x + fp * y for x, y in zip(ap, an)]
                out.append((normal, fn * bp + fp * bn))
        seen, rows = set(), []
        for normal, off in out:
            if all(v == 0 for v in normal):
                if off < 0:
                    return Polyhedron.empty(len(coords))
                continue
            key = integerize(tuple(normal) + (off,))
            if key not in seen:
                seen.add(key)
                rows.append((normal, off))
    proj = [HRow(tuple(Fraction(r[0][c]) for c in coords), Fraction(r[1])) for r in rows]
    return Polyhedron(len(coords), h=HPoly(tuple(proj), len(coords))).canonical()


def affine_equalities(a: Polyhedron) -> list[tuple[Fraction, ...]]:
    """Basis of the orthogonal complement of the lineality directions."""
    return nullspace(a.vrep().lineality, a.dim)


# --------------------------------------------------------------------------
# finite unions of polyhedra

@dataclass(frozen=True)
class PolyUnion:
    """A finite union of closed polyhedra, keyed by a label per part."""

    parts: tuple[tuple[str, Polyhedron], ...]
    dim: int

    @classmethod
    def of(cls, labelled: Iterable[tuple[str, Polyhedron]], dim: int) -> "PolyUnion":
        return cls(tuple((lab, p) for lab, p in labelled if not p.is_empty), dim)

    @property
    def is_empty(self) -> bool:
        return not self.parts

    def polyhedra(self) -> list[Polyhedron]:
        return [p for _, p in self.parts]

    def hull(self) -> Polyhedron:
        return hull_union(self.polyhedra(), self.dim)

    def contains(self, x: Sequence) -> bool:
        return any(p.contains(x) for _, p in self.parts)

    def distinct(self) -> list[Polyhedron]:
        """Maximal parts, duplicates and parts covered by another single part removed."""
        out: list[Polyhedron] = []
        for p in sorted(self.polyhedra(), key=lambda q: describe(q)):
            if any(is_subset(p, q) for q in out):
                continue
            out = [q for q in out if not is_subset(q, p)]
            out.append(p)
        return sorted(out, key=describe)

    def same_parts(self, other: "PolyUnion") -> bool:
        """Part-wise equality after discarding covered parts (a sufficient test for set equality)."""
        a, b = self.distinct(), other.distinct()
        return len(a) == len(b) and all(equals(p, q) for p, q in zip(a, b))

    def covered_by(self, other: "PolyUnion") -> bool:
        """Every part lies inside some part of ``other`` (a sufficient test for inclusion)."""
        return all(any(is_subset(p, q) for q in other.polyhedra()) for p in self.polyhedra())


# --------------------------------------------------------------------------
# text rendering

def _fmt(x) -> str:
    return str(Fraction(x))


def _tuple(v) -> str:
    return "(" + ",".join(_fmt(x) for x in v) + ")"


def describe(p: Polyhedron) -> str:
    """Compact canonical text: intervals in dimension 1, generator lists otherwise."""
    c = p.canonical().vrep()
    if c.is_empty:
        return "∅"
    if p.dim == 1:
        if c.lineality:
            return "(-inf,inf)"
        lo = min(v[0] for v in c.vertices)
        hi = max(v[0] for v in c.vertices)
        up = any(r[0] > 0 for r in c.rays)
        down = any(r[0] < 0 for r in c.rays)
        if lo == hi and not up and not down:
            return "{" + _fmt(lo) + "}"
        left = "(-inf" if down else "[" + _fmt(lo)
        right = "inf)" if up else _fmt(hi) + "]"
        return f"{left},{right}"
    text = "co{" + ",".join(_tuple(v) for v in c.vertices) + "}"
    if c.rays:
        text += " + cone{" + ",".join(_tuple(r) for r in c.rays) + "}"
    if c.lineality:
        text += " + span{" + ",".join(_tuple(l) for l in c.lineality) + "}"
    return text
