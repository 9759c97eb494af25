"""Subdifferential of a pointwise supremum by each characterization formula.

Every formula returns a :class:`SubdiffResult` carrying the set together with
the ε-trace, the active-set snapshot and notes on which hypotheses were
checked and which were assumed.

Limits ``∩_{ε>0} cl(...)`` are evaluated by :func:`eps_limit`. In ``Q^n``
the strong, weak and weak* closures coincide, so one closure serves all.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Sequence as Seq, Union

from .errors import HypothesisRefusal
from .exactgeom import HPoly, Polyhedron, PolyUnion, describe, equals, hull_union, minkowski_sum, normal_cone
from .exactgeom.linalg import frac, fvec, is_zero
from .family import (
    ActiveSet,
    Finite,
    IndexedFamily,
    Parametric,
    OMEGA,
    Sequence,
    active_set,
    as_finite,
    augmented_family,
    closure_condition_check,
    discretize,
    sup_function,
)
from .pwconvex import INF, LiftedSubdiff, PolyFunc, evaluate, lifted_eps_subdiff, restrict, subdiff

EPS_RATIO = 4
DEFAULT_CAP = 64

SetLike = Union[Polyhedron, PolyUnion]


@dataclass(frozen=True)
class EpsLimit:
    value: SetLike
    trace: tuple[tuple[Fraction, SetLike], ...]
    exact: bool
    frozen_at: Fraction | None


@dataclass(frozen=True)
class SubdiffResult:
    set: Polyhedron
    formula: str
    eps_trace: tuple[tuple[Fraction, SetLike], ...]
    active: ActiveSet
    exact: bool
    notes: tuple[str, ...]
    # for formulas that take the hull after the ε-limit: the union before it
    pre_hull: PolyUnion | None = None

    def trace_summary(self) -> list[tuple[str, str]]:
        return [(str(e), _summary(s)) for e, s in self.eps_trace]


def _summary(s: SetLike) -> str:
    if isinstance(s, PolyUnion):
        if s.is_empty:
            return "∅"
        return " ∪ ".join(describe(p) for p in s.distinct())
    return describe(s)


def _shifted(p: Polyhedron, normal: Polyhedron | None) -> Polyhedron:
    if normal is None:
        return p
    return minkowski_sum(p, normal)


def eps_limit(
    lifted: Seq[tuple[str, LiftedSubdiff, Fraction]],
    normal: Polyhedron | None,
    hull_inside: bool,
    cap: int = DEFAULT_CAP,
    dim: int | None = None,
) -> EpsLimit:
    """``∩_{ε>0} [cl co | cl ∪]_{t: gap_t <= ε} (slice_ε(lifted_t) + normal)``.

    ``S(ε)`` is sampled on ``ε_k = ε_0 4^{-k}`` with ``ε_0 = 1 + max gap``.
    Once ``ε_k`` drops below every positive gap and every positive
    breakpoint of the lifted graphs the active set is frozen and each slice
    moves affinely in ε with a fixed recession cone, so the limit is ``S``
    evaluated at ``ε = 0`` over the frozen active set. Hitting ``cap`` steps
    first returns the last sampled set, flagged inexact.
    """
    if dim is None:
        if not lifted:
            raise ValueError("dimension required for an empty family")
        dim = lifted[0][1].dim
    gaps = [frac(g) for _, _, g in lifted]
    if any(g < 0 for g in gaps):
        raise ValueError("gaps must be nonnegative")
    thresholds = [g for g in gaps if g > 0]
    for _, lg, _ in lifted:
        thresholds.extend(lg.breakpoints())
    threshold = min(thresholds) if thresholds else None

    def at(eps: Fraction) -> SetLike:
        parts = [(lab, _shifted(lg.slice(eps), normal)) for lab, lg, g in lifted if g <= eps]
        union = PolyUnion.of(parts, dim)
        return union.hull() if hull_inside else union

    eps = Fraction(1) + max(gaps, default=Fraction(0))
    trace = []
    for _ in range(cap):
        trace.append((eps, at(eps)))
        if threshold is None or eps < threshold:
            return EpsLimit(at(Fraction(0)), tuple(trace), True, eps)
        eps /= EPS_RATIO
    return EpsLimit(trace[-1][1], tuple(trace), False, None)


# --------------------------------------------------------------------------
# shared plumbing

@dataclass(frozen=True)
class _Setup:
    fam: Finite
    f: PolyFunc
    x: tuple[Fraction, ...]
    fx: object
    notes: list


def _setup(fam: IndexedFamily, x, notes: list) -> _Setup:
    fin = as_finite(fam)
    if isinstance(fam, Sequence):
        notes.append("assumed: the declared limit dominates the tail (surrogate family prefix ∪ {Ω})")
    elif isinstance(fam, Parametric):
        notes.append(f"surrogate: parametric family discretized on a grid of {len(fin.members)} points")
    x = fvec(x)
    if len(x) != fin.dim:
        raise ValueError("point dimension does not match the family")
    f = sup_function(fin)
    return _Setup(fin, f, x, evaluate(f, x), notes)


def _empty(formula: str, s: _Setup, note: str) -> SubdiffResult:
    s.notes.append(note)
    return SubdiffResult(Polyhedron.empty(s.fam.dim), formula, (), ActiveSet((), False, Fraction(0)), True, tuple(s.notes))


def _infinite_value(formula: str, s: _Setup) -> SubdiffResult | None:
    if s.fx == INF:
        return _empty(formula, s, "f(x) is not finite; the subdifferential is ∅ by convention")
    return None


def _normal(f: PolyFunc, x, L=None) -> Polyhedron:
    dom = restrict(f, L).domain if L is not None else f.domain
    return normal_cone(Polyhedron(f.dim, h=dom.closure()), x)


def _in_interior(dom: HPoly, x) -> bool:
    for r in dom.rows:
        if is_zero(r.normal):
            continue
        if sum(a * b for a, b in zip(r.normal, x)) >= r.offset:
            return False
    return True


def _exact_flag(fam: IndexedFamily, engine_exact: bool = True) -> bool:
    return engine_exact and not isinstance(fam, Parametric)


def _lifted_members(s: _Setup, act: ActiveSet, transform: Callable[[PolyFunc], PolyFunc]):
    gaps = dict(act.indices)
    out = []
    for lab, m in zip(s.fam.labels, s.fam.members):
        if lab in gaps:
            out.append((lab, lifted_eps_subdiff(transform(m), s.x), gaps[lab]))
    return out


def _run_eps(formula, fam, s: _Setup, transform, normal, hull_inside, cap):
    """Drive :func:`eps_limit` over all indices that can ever be ε-active."""
    gaps_all = active_set(s.fam, s.x, _max_gap(s))
    lifted = _lifted_members(s, gaps_all, transform)
    res = eps_limit(lifted, normal, hull_inside, cap, dim=s.fam.dim)
    if not res.exact:
        s.notes.append(f"ε-schedule hit the cap of {cap} steps; the last sampled set is an over-approximation")
    else:
        last = res.trace[-1][1]
        same = equals(last, res.value) if isinstance(last, Polyhedron) else last.same_parts(res.value)
        s.notes.append(
            f"active set frozen at ε = {res.frozen_at}; "
            + ("S(ε) already equals its limit there" if same else "limit read off at ε = 0 on the frozen active set")
        )
    act = active_set(s.fam, s.x, 0)
    return res, act


def _max_gap(s: _Setup) -> Fraction:
    vals = [evaluate(m, s.x) for m in s.fam.members]
    finite_vals = [v for v in vals if v != INF]
    if not finite_vals:
        return Fraction(0)
    return max(s.fx - v for v in finite_vals)


def _require_cll(s: _Setup, formula: str, fallback: str) -> None:
    if not closure_condition_check(s.fam):
        raise HypothesisRefusal(
            "cll",
            f"{formula}: the closure condition cl f = sup cl f_t fails for this family; use {fallback}",
        )
    s.notes.append("checked: closure condition cl f = sup cl f_t holds")


def _require_continuity(s: _Setup, formula: str) -> None:
    if s.f.domain.interior_slack() is None:
        raise HypothesisRefusal(
            "continuity",
            f"{formula}: f is not continuous at any point (dom f has empty interior)",
        )
    s.notes.append("checked: dom f has nonempty interior, so the polyhedral f is continuous there")


# --------------------------------------------------------------------------
# formulas

def subdiff_valadier(fam: IndexedFamily, x, L=None, epsilon_cap: int = DEFAULT_CAP) -> SubdiffResult:
    """``co ∪_{t∈T(x)} ∂f_t(x)`` over exactly active indices."""
    notes: list[str] = []
    s = _setup(fam, x, notes)
    if (r := _infinite_value("valadier", s)) is not None:
        return r
    act = active_set(s.fam, s.x, 0)
    if isinstance(fam, Sequence):
        # T(x) ranges over the original indices only; the limit is not a member
        act = ActiveSet(tuple((lab, g) for lab, g in act.indices if lab != OMEGA), False, act.eps)
        notes.append("active set taken over the original indices (declared limit not a member)")
    if not act.indices:
        return _empty("valadier", s, "active set empty; use compactified formula")
    if not _in_interior(s.f.domain, s.x):
        notes.append("warning: x is not interior to dom f, so continuity of f at x is not available")
    else:
        notes.append("checked: x is interior to dom f")
    by_label = dict(zip(s.fam.labels, s.fam.members))
    parts = [subdiff(by_label[lab], s.x) for lab in act.labels]
    out = hull_union(parts, s.fam.dim)
    return SubdiffResult(out, "valadier", (), act, _exact_flag(fam), tuple(notes))


def _form5_core(formula: str, s: _Setup, act: ActiveSet, L, fam: IndexedFamily) -> SubdiffResult:
    if not act.indices:
        return _empty(formula, s, "active set empty; use compactified formula")
    by_label = dict(zip(s.fam.labels, s.fam.members))
    parts = [subdiff(restrict(by_label[lab], L, s.f.domain), s.x) for lab in act.labels]
    out = hull_union(parts, s.fam.dim)
    return SubdiffResult(out, formula, (), act, _exact_flag(fam), tuple(s.notes))


def subdiff_form5(fam: IndexedFamily, x, L=None, epsilon_cap: int = DEFAULT_CAP) -> SubdiffResult:
    """``co ∪_{t∈T(x)} ∂(f_t + I_{L∩dom f})(x)`` for compact, usc-in-t families."""
    if isinstance(fam, Sequence):
        raise HypothesisRefusal(
            "compact-index",
            "form5: a sequence index set is not compact; use the compactified formula",
        )
    notes: list[str] = []
    s = _setup(fam, x, notes)
    if (r := _infinite_value("form5", s)) is not None:
        return r
    if isinstance(fam, Finite):
        notes.append("checked: finite index set (compact, t -> f_t(z) trivially usc)")
    else:
        notes.append("assumed: compact parameter range with polynomial (continuous) dependence on t")
    return _form5_core("form5", s, active_set(s.fam, s.x, 0), L, fam)


def subdiff_fe1(fam: IndexedFamily, x, L=None, epsilon_cap: int = DEFAULT_CAP) -> SubdiffResult:
    """``∩_ε cl co{∪_{T_ε(x)} ∂_ε f_t(x) + N_{L∩dom f}(x)}``; needs the closure condition."""
    notes: list[str] = []
    s = _setup(fam, x, notes)
    _require_cll(s, "fe1", "fe2 or f1")
    if (r := _infinite_value("fe1", s)) is not None:
        return r
    nc = _normal(s.f, s.x, L)
    res, act = _run_eps("fe1", fam, s, lambda m: m, nc, True, epsilon_cap)
    return SubdiffResult(res.value, "fe1", res.trace, act, _exact_flag(fam, res.exact), tuple(notes))


def subdiff_fe2(fam: IndexedFamily, x, L=None, epsilon_cap: int = DEFAULT_CAP) -> SubdiffResult:
    """``∩_ε cl co{∪_{T_ε(x)} ∂_ε(f_t + I_{L∩dom f})(x)}``; unconditional."""
    notes: list[str] = []
    s = _setup(fam, x, notes)
    if (r := _infinite_value("fe2", s)) is not None:
        return r
    dom = s.f.domain
    res, act = _run_eps("fe2", fam, s, lambda m: restrict(m, L, dom), None, True, epsilon_cap)
    return SubdiffResult(res.value, "fe2", res.trace, act, _exact_flag(fam, res.exact), tuple(notes))


def subdiff_f1(fam: IndexedFamily, x, L=None, epsilon_cap: int = DEFAULT_CAP) -> SubdiffResult:
    """``co ∩_ε cl ∪_{T_ε(x)} ∂_ε(f_t + I_{L∩dom f})(x)``: limit first, hull last."""
    notes: list[str] = []
    s = _setup(fam, x, notes)
    if (r := _infinite_value("f1", s)) is not None:
        return r
    dom = s.f.domain
    res, act = _run_eps("f1", fam, s, lambda m: restrict(m, L, dom), None, False, epsilon_cap)
    inner = res.value
    return SubdiffResult(inner.hull(), "f1", res.trace, act, _exact_flag(fam, res.exact), tuple(notes), inner)


def subdiff_f1b(fam: IndexedFamily, x, L=None, epsilon_cap: int = DEFAULT_CAP) -> SubdiffResult:
    """``co ∩_ε cl ∪_{T_ε(x)} (∂_ε f_t(x) + N_{L∩dom f}(x))``; needs the closure condition."""
    notes: list[str] = []
    s = _setup(fam, x, notes)
    _require_cll(s, "f1b", "f1")
    if (r := _infinite_value("f1b", s)) is not None:
        return r
    nc = _normal(s.f, s.x, L)
    res, act = _run_eps("f1b", fam, s, lambda m: m, nc, False, epsilon_cap)
    inner = res.value
    return SubdiffResult(inner.hull(), "f1b", res.trace, act, _exact_flag(fam, res.exact), tuple(notes), inner)


def subdiff_khay(fam: IndexedFamily, x, L=None, epsilon_cap: int = DEFAULT_CAP) -> SubdiffResult:
    """``N_{dom f}(x) + co ∩_ε cl ∪_{T_ε(x)} ∂_ε f_t(x)`` when f is continuous somewhere."""
    notes: list[str] = []
    s = _setup(fam, x, notes)
    if (r := _infinite_value("khay", s)) is not None:
        return r
    _require_continuity(s, "khay")
    res, act = _run_eps("khay", fam, s, lambda m: m, None, False, epsilon_cap)
    inner = res.value
    out = minkowski_sum(_normal(s.f, s.x), inner.hull())
    return SubdiffResult(out, "khay", res.trace, act, _exact_flag(fam, res.exact), tuple(notes), inner)


def subdiff_brondsted(fam: IndexedFamily, x, L=None, epsilon_cap: int = DEFAULT_CAP) -> SubdiffResult:
    """``∩_ε cl co ∪_{t∈T(x)} ∂_ε f_t(x)``: hull inside the ε-limit, all members active."""
    if not isinstance(fam, Finite):
        raise HypothesisRefusal("finite-index", "brondsted: needs a finite family")
    notes: list[str] = []
    s = _setup(fam, x, notes)
    if (r := _infinite_value("brondsted", s)) is not None:
        return r
    act = active_set(s.fam, s.x, 0)
    if len(act.indices) != len(s.fam.members):
        raise HypothesisRefusal("all-active", "brondsted: every member must be active at x (T = T(x))")
    if not _in_interior(s.f.domain, s.x):
        raise HypothesisRefusal("continuity", "brondsted: f must be continuous near x (x interior to dom f)")
    notes.append("checked: T = T(x) and x interior to dom f")
    lifted = [(lab, lifted_eps_subdiff(m, s.x), Fraction(0)) for lab, m in zip(s.fam.labels, s.fam.members)]
    res = eps_limit(lifted, None, True, epsilon_cap, dim=s.fam.dim)
    return SubdiffResult(res.value, "brondsted", res.trace, act, res.exact, tuple(notes))


def _compactified(fam: IndexedFamily, x, L, tilde: bool) -> SubdiffResult:
    formula = "compactified-tilde" if tilde else "compactified"
    notes: list[str] = []
    if isinstance(fam, Sequence):
        base = augmented_family(fam)
        used = augmented_family(fam, tilde=True, x=x) if tilde else base
        notes.append("assumed: the declared limit dominates the tail (surrogate family prefix ∪ {Ω})")
        if tilde:
            notes.append("prefix filtered to members attaining f(x) before augmenting")
    elif isinstance(fam, Parametric):
        base = used = discretize(fam)
        notes.append(f"surrogate: parametric family discretized on a grid of {len(base.members)} points")
    else:
        base = used = fam
    s = _setup(base, x, notes)
    if (r := _infinite_value(formula, s)) is not None:
        return r
    fx = s.fx
    gaps = []
    for lab, m in zip(used.labels, used.members):
        v = evaluate(m, s.x)
        if v != INF and fx - v == 0:
            gaps.append((lab, Fraction(0)))
    act = ActiveSet(tuple(gaps), any(lab == OMEGA for lab, _ in gaps), Fraction(0))
    if isinstance(fam, Sequence):
        lim = evaluate(fam.limit, s.x)
        notes.append("limit member active: f_∞(x) = f(x)" if act.includes_limit else f"limit member excluded: f_∞(x) = {lim} < f(x) = {fx}")
    s2 = _Setup(used, s.f, s.x, s.fx, notes)
    if not act.indices:
        return _empty(formula, s2, "declared limit inactive and prefix active set empty")
    return _form5_core(formula, s2, act, L, fam)


def subdiff_compactified(fam: IndexedFamily, x, L=None, epsilon_cap: int = DEFAULT_CAP) -> SubdiffResult:
    """``co ∪_{γ∈T̂(x)} ∂(f_γ + I_{L∩dom f})(x)`` over the augmented family."""
    return _compactified(fam, x, L, tilde=False)


def subdiff_compactified_tilde(fam: IndexedFamily, x, L=None, epsilon_cap: int = DEFAULT_CAP) -> SubdiffResult:
    """As :func:`subdiff_compactified`, using only prefix members that approach f at x."""
    return _compactified(fam, x, L, tilde=True)


FORMULAS: dict[str, Callable[..., SubdiffResult]] = {
    "valadier": subdiff_valadier,
    "form5": subdiff_form5,
    "fe1": subdiff_fe1,
    "fe2": subdiff_fe2,
    "f1": subdiff_f1,
    "f1b": subdiff_f1b,
    "khay": subdiff_khay,
    "brondsted": subdiff_brondsted,
    "compactified": subdiff_compactified,
    "compactified-tilde": subdiff_compactified_tilde,
}


def compute(formula: str, fam: IndexedFamily, x, L=None, epsilon_cap: int = DEFAULT_CAP, grid: int | None = None) -> SubdiffResult:
    """Run the named formula; ``grid`` overrides a parametric family's grid."""
    if formula not in FORMULAS:
        raise KeyError(f"unknown formula {formula!r}; choose from {', '.join(FORMULAS)}")
    if grid is not None and isinstance(fam, Parametric):
        fam = replace(fam, grid=grid)
    return FORMULAS[formula](fam, x, L=L, epsilon_cap=epsilon_cap)
