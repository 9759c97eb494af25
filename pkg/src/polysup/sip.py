"""Fritz-John and KKT certificates for convex semi-infinite programs

    minimize f_0(x)  subject to  f_t(x) <= 0,  t in T,

at a candidate point ``xbar`` with ``f(xbar) = 0`` where ``f = sup_t f_t``.

Every membership ``0 in co{...}`` / ``0 in A + cone K`` is decided by one LP
over the generators of the pieces involved. The pieces on the K side never
need recession directions beyond those already present in a cone summand
(``N_{dom f ∩ dom f_0}`` or ``N_{dom f}``), so the LP over generators is an
exact test and not just a test on closures.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import HypothesisRefusal
from .exactgeom import OPTIMAL, UNBOUNDED, HPoly, HRow, Polyhedron, equals, lp_solve, normal_cone
from .exactgeom.linalg import fvec, is_zero
from .family import IndexedFamily, Parametric, as_finite, discretize, refine, sup_function
from .pwconvex import INF, PolyFunc, evaluate, lifted_eps_subdiff, restrict, subdiff, with_domain
from .supcalc import DEFAULT_CAP, eps_limit

FJ = "FJ"
KKT = "KKT"
KKT_CONTINUOUS = "KKT-continuous"


@dataclass(frozen=True)
class SipProblem:
    objective: PolyFunc
    constraints: IndexedFamily

    def __post_init__(self):
        if self.objective.dim != self.constraints.dim:
            raise ValueError("objective and constraints must share the ambient dimension")

    @property
    def dim(self) -> int:
        return self.objective.dim


@dataclass(frozen=True)
class WitnessTerm:
    source: str  # "objective", "normal" or a constraint label
    kind: str  # "point", "ray" or "line"
    vector: tuple[Fraction, ...]
    coef: Fraction


@dataclass(frozen=True)
class Certificate:
    kind: str
    holds: bool
    witness: tuple[WitnessTerm, ...]
    checked_hypotheses: tuple[str, ...]
    multipliers: tuple[tuple[str, Fraction], ...] = ()
    notes: tuple[str, ...] = ()
    grid_delta: Fraction | None = field(default=None, compare=False)

    def replay(self) -> tuple[Fraction, ...]:
        """``Σ coef · vector``; the zero vector whenever ``holds``."""
        n = len(self.witness[0].vector) if self.witness else 0
        out = [Fraction(0)] * n
        for w in self.witness:
            for i, c in enumerate(w.vector):
                out[i] += w.coef * c
        return tuple(out)


@dataclass(frozen=True)
class SlaterResult:
    holds: bool
    point: tuple[Fraction, ...] | None
    value: Fraction | None
    notes: tuple[str, ...] = ()


def slater_check(p: SipProblem) -> SlaterResult:
    """Find ``x_0 in dom f_0 ∩ dom f`` with ``f(x_0) < 0`` by minimizing ``f`` over the closed domains."""
    n = p.dim
    f = sup_function(p.constraints)
    dom = f.domain.intersect(p.objective.domain)
    if not dom.is_nonempty():
        return SlaterResult(False, None, None, ("dom f_0 ∩ dom f is empty",))
    # variables (x, r): min r  s.t.  piece(x) <= r, x in cl dom
    rows = [HRow(pc.slope + (Fraction(-1),), -pc.intercept) for pc in f.pieces]
    rows += [HRow(r.normal + (Fraction(0),), r.offset) for r in dom.closure().rows]
    res = lp_solve((Fraction(0),) * n + (Fraction(1),), HPoly(tuple(rows), n + 1), "min")
    inner = dom.interior_slack(strict_only=True)
    q = inner[0]
    fq = evaluate(f, q)
    if res.status == UNBOUNDED:
        d, dr = res.ray[:n], res.ray[n]
        step = max(Fraction(1), (fq + 1) / -dr)
        x0 = tuple(a + step * b for a, b in zip(q, d))
        return SlaterResult(True, x0, evaluate(f, x0), ("inf f over dom f_0 ∩ dom f is -inf",))
    best = res.value
    if best >= 0:
        return SlaterResult(False, None, best, (f"min f over dom f_0 ∩ dom f is {best} >= 0",))
    x0 = res.point[:n]
    if not dom.contains(x0):
        # optimum sits on a strict face: move toward a point of the strict domain
        lam = Fraction(1) if fq < 0 else -best / (fq - best) / 2
        x0 = tuple(a + lam * (b - a) for a, b in zip(x0, q))
    return SlaterResult(True, x0, evaluate(f, x0), ())


def _member_limit_sets(p: SipProblem, xbar, restricted: bool, cap: int):
    """Parts of ``∩_ε cl ∪_{T_ε(xbar)} ∂_ε g_t(xbar)`` keyed by constraint label."""
    fam = as_finite(p.constraints)
    f = sup_function(fam)
    fx = evaluate(f, xbar)
    dom = f.domain.intersect(p.objective.domain)
    gaps = []
    for lab, m in zip(fam.labels, fam.members):
        v = evaluate(m, xbar)
        if v != INF:
            g = restrict(m, None, dom) if restricted else m
            gaps.append((lab, lifted_eps_subdiff(g, xbar), fx - v))
    res = eps_limit(gaps, None, False, cap, dim=p.dim)
    return res.value, res.exact


def _gens(source: str, poly: Polyhedron, point_kind: str):
    v = poly.vrep()
    out = [(source, point_kind, p) for p in v.vertices]
    out += [(source, "ray", r) for r in v.rays]
    out += [(source, "line", l) for l in v.lineality]
    return out


def _solve_membership(gens, n: int, convex_groups: list[set[str]]):
    """Find coefficients with ``Σ c_g g = 0``: ``c >= 0`` except lines, ``Σ c = 1`` on each group of points."""
    m = len(gens)
    A, b = [], []
    for i in range(n):
        row = tuple(Fraction(g[2][i]) for g in gens)
        A.append(row)
        b.append(Fraction(0))
        A.append(tuple(-x for x in row))
        b.append(Fraction(0))
    for grp in convex_groups:
        row = tuple(Fraction(1) if (g[0] in grp and g[1] == "point") else Fraction(0) for g in gens)
        A.append(row)
        b.append(Fraction(1))
        A.append(tuple(-x for x in row))
        b.append(Fraction(-1))
    for j, g in enumerate(gens):
        if g[1] != "line":
            A.append(tuple(Fraction(-1) if k == j else Fraction(0) for k in range(m)))
            b.append(Fraction(0))
    if m == 0:
        return None
    # prefer small multipliers on non-line terms for a readable witness
    obj = tuple(Fraction(0) if g[1] == "line" else Fraction(1) for g in gens)
    res = lp_solve(obj, (A, b, m), "min")
    if res.status == OPTIMAL:
        return res.point
    if res.status == UNBOUNDED:
        return lp_solve((0,) * m, (A, b, m), "min").point
    return None


def _witness(gens, coefs) -> tuple[WitnessTerm, ...]:
    return tuple(
        WitnessTerm(src, kind, tuple(vec), c) for (src, kind, vec), c in zip(gens, coefs) if c != 0
    )


def _multipliers(witness, labels) -> tuple[tuple[str, Fraction], ...]:
    out = []
    for lab in labels:
        tot = sum((w.coef for w in witness if w.source == lab and w.kind == "point"), Fraction(0))
        if tot:
            out.append((lab, tot))
    return tuple(out)


def _standing(p: SipProblem, xbar) -> list[str]:
    f = sup_function(p.constraints)
    fx = evaluate(f, xbar)
    if fx != 0:
        raise HypothesisRefusal("f(xbar)=0", f"the standing hypothesis f(xbar) = 0 fails: f(xbar) = {fx}")
    f0 = evaluate(p.objective, xbar)
    if f0 == INF:
        raise HypothesisRefusal("f0(xbar) finite", "xbar is outside dom f_0")
    return ["checked: f(xbar) = 0", "checked: f_0(xbar) finite", "assumed: xbar is optimal (not verified)"]


def _grid_note(p: SipProblem, xbar, restricted: bool, cap: int):
    fam = p.constraints
    if not isinstance(fam, Parametric):
        return None, ()
    coarse = discretize(fam)
    fine = refine(coarse)
    k1, _ = _member_limit_sets(SipProblem(p.objective, coarse), xbar, restricted, cap)
    k2, _ = _member_limit_sets(SipProblem(p.objective, fine), xbar, restricted, cap)
    delta = hausdorff_inf(k1.hull(), k2.hull())
    if delta is None:
        return None, ("grid refinement delta unavailable (unbounded sets with different recession cones)",)
    g1, g2 = len(coarse.members), len(fine.members)
    return delta, (f"grid refinement: Hausdorff distance of co K between grids {g1} and {g2} is {delta} (reported, not certified)",)


def fj_check(p: SipProblem, xbar, epsilon_cap: int = DEFAULT_CAP) -> Certificate:
    """``0 ∈ co{∂(f_0 + I_{dom f})(xbar) ∪ K}``."""
    xbar = fvec(xbar)
    checked = _standing(p, xbar)
    n = p.dim
    f = sup_function(p.constraints)
    a = subdiff(with_domain(p.objective, f.domain), xbar)
    k, exact = _member_limit_sets(p, xbar, True, epsilon_cap)
    gens = _gens("objective", a, "point")
    for lab, part in k.parts:
        gens += _gens(lab, part, "point")
    labels = [lab for lab, _ in k.parts]
    coefs = _solve_membership(gens, n, [{"objective", *labels}])
    delta, gnotes = _grid_note(p, xbar, True, epsilon_cap)
    notes = gnotes + (() if exact else ("ε-limit hit the step cap; K over-approximated",))
    if coefs is None:
        return Certificate(FJ, False, (), tuple(checked), (), notes, delta)
    w = _witness(gens, coefs)
    return Certificate(FJ, True, w, tuple(checked), _multipliers(w, labels), notes, delta)


def _continuity_point_exists(p: SipProblem) -> bool:
    f = sup_function(p.constraints)
    rows = [HRow(r.normal, r.offset, True) if not is_zero(r.normal) else r for r in f.domain.rows]
    return HPoly(tuple(rows), p.dim).intersect(p.objective.domain).is_nonempty()


def kkt_check(p: SipProblem, xbar, continuous_variant: bool = False, epsilon_cap: int = DEFAULT_CAP) -> Certificate:
    """``0 ∈ ∂(f_0 + I_{dom f})(xbar) + cone K`` or, when f is continuous
    somewhere on ``dom f_0``, ``0 ∈ ∂f_0(xbar) + cone K_0 + N_{dom f}(xbar)``.
    """
    xbar = fvec(xbar)
    checked = _standing(p, xbar)
    sl = slater_check(p)
    if not sl.holds:
        raise HypothesisRefusal("slater", "the Slater condition fails; use the Fritz-John check instead")
    checked.append(f"checked: Slater point x0 = ({', '.join(map(str, sl.point))}) with f(x0) = {sl.value}")
    n = p.dim
    f = sup_function(p.constraints)
    if continuous_variant:
        if not _continuity_point_exists(p):
            raise HypothesisRefusal("continuity", "f is not continuous at any point of dom f_0 ∩ dom f")
        checked.append("checked: int(dom f) meets dom f_0, so f is continuous there")
        a = subdiff(p.objective, xbar)
        k, exact = _member_limit_sets(p, xbar, False, epsilon_cap)
        nc = normal_cone(Polyhedron(n, h=f.domain.closure()), xbar)
        kind = KKT_CONTINUOUS
    else:
        a = subdiff(with_domain(p.objective, f.domain), xbar)
        k, exact = _member_limit_sets(p, xbar, True, epsilon_cap)
        nc = None
        kind = KKT
    gens = _gens("objective", a, "point")
    if nc is not None:
        gens += [g for g in _gens("normal", nc, "ray") if not is_zero(g[2])]
    for lab, part in k.parts:
        # cone K: points of K_t are not in a convex group, so they enter conically
        gens += _gens(lab, part, "point")
    labels = [lab for lab, _ in k.parts]
    coefs = _solve_membership(gens, n, [{"objective"}])
    delta, gnotes = _grid_note(p, xbar, not continuous_variant, epsilon_cap)
    notes = gnotes + (() if exact else ("ε-limit hit the step cap; K over-approximated",))
    if coefs is None:
        return Certificate(kind, False, (), tuple(checked), (), notes, delta)
    w = _witness(gens, coefs)
    return Certificate(kind, True, w, tuple(checked), _multipliers(w, labels), notes, delta)


def hausdorff_inf(a: Polyhedron, b: Polyhedron) -> Fraction | None:
    """Hausdorff distance in the max-norm; ``None`` unless the recession cones agree."""
    if a.is_empty or b.is_empty:
        return None if a.is_empty != b.is_empty else Fraction(0)
    if not equals(a.recession_cone(), b.recession_cone()):
        return None
    return max(max(_dist_inf(v, b) for v in a.vrep().vertices), max(_dist_inf(v, a) for v in b.vrep().vertices))


def _dist_inf(v, q: Polyhedron) -> Fraction:
    n = q.dim
    rows = [HRow(r.normal + (Fraction(0),), r.offset) for r in q.hrep().rows]
    for i in range(n):
        e = tuple(Fraction(int(j == i)) for j in range(n))
        rows.append(HRow(tuple(-c for c in e) + (Fraction(-1),), -v[i]))
        rows.append(HRow(e + (Fraction(-1),), v[i]))
    res = lp_solve((Fraction(0),) * n + (Fraction(1),), HPoly(tuple(rows), n + 1), "min")
    return res.value
