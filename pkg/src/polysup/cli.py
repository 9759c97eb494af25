"""Command-line front end.

Exit codes: 0 success / condition holds, 1 usage or parse error,
2 hypothesis refusal, 3 condition does not hold.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from .duality import argmin_convexified, argmin_samples, conj_subdiff, inverse_eps_subdiff
from .errors import HypothesisRefusal
from .exactgeom import describe, equals
from .family import Parametric, Sequence, augmented_family, as_finite, tail_consistency
from .oracle import oracle_subdiff
from .serialize import ProblemSpec, SpecError, dump_polyhedron, dumps, load_spec, parse_point, rat, vec
from .sip import SipProblem, fj_check, kkt_check, slater_check
from .supcalc import DEFAULT_CAP, FORMULAS, SubdiffResult, compute

EXIT_OK, EXIT_USAGE, EXIT_REFUSED, EXIT_FAILS = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", required=True, help="problem file (JSON)")
    p.add_argument("--epsilon-cap", type=int, default=DEFAULT_CAP, help="maximum ε-schedule steps")
    p.add_argument("--grid", type=int, default=None, help="grid size for parametric families")
    p.add_argument("--json", default=None, metavar="PATH", help="write a JSON report here plus PATH with .txt")
    p.add_argument("--quiet", action="store_true", help="suppress the text report on stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polysup", description="Exact subdifferentials of pointwise suprema of polyhedral functions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="run one formula at a point")
    _common(c)
    c.add_argument("--point", required=True, help="comma-separated rationals")
    c.add_argument("--formula", required=True, help=", ".join(FORMULAS))

    c = sub.add_parser("compare", help="compare formulas against the oracle")
    _common(c)
    c.add_argument("--point", required=True)
    c.add_argument("--formula", default="all", help="'all' or a comma-separated list")

    c = sub.add_parser("sip", help="Fritz-John / KKT / Slater certificate")
    _common(c)
    c.add_argument("--point", required=True, help="candidate point xbar")
    c.add_argument("--check", required=True, choices=["fj", "kkt", "kkt-continuous", "slater"])

    c = sub.add_parser("conj", help="subdifferential of the conjugate of sampled data")
    _common(c)
    c.add_argument("--point", required=True, help="a functional (comma-separated) or 'argmin'")
    return parser


# --------------------------------------------------------------------------
# reports

def _set_block(p) -> dict:
    return {"text": describe(p), **dump_polyhedron(p)}


def _family_with_grid(spec: ProblemSpec, grid: int | None):
    fam = spec.family
    if fam is None:
        raise UsageError("the problem file has no family block")
    if grid is not None and isinstance(fam, Parametric):
        if grid < 2:
            raise UsageError("--grid must be at least 2")
        fam = replace(fam, grid=grid)
    return fam


def _point(text: str, dim: int):
    try:
        x = parse_point(text)
    except SpecError as e:
        raise UsageError(str(e)) from e
    if len(x) != dim:
        raise UsageError(f"point has {len(x)} coordinates, the problem has dim {dim}")
    return x


def _result_block(r: SubdiffResult) -> dict:
    out = {
        "formula": r.formula,
        "set": _set_block(r.set),
        "exact": r.exact,
        "active": [{"index": lab, "gap": rat(g)} for lab, g in r.active.indices],
        "includes_limit": r.active.includes_limit,
        "eps_trace": [{"eps": e, "set": s} for e, s in r.trace_summary()],
        "notes": list(r.notes),
    }
    if r.pre_hull is not None:
        out["pre_hull"] = [describe(p) for p in r.pre_hull.distinct()]
    return out


def _warnings(fam, x) -> list[str]:
    if isinstance(fam, Sequence):
        return tail_consistency(fam, [x])
    return []


def cmd_compute(args) -> tuple[dict, list[str], int]:
    spec = load_spec(args.spec)
    fam = _family_with_grid(spec, args.grid)
    x = _point(args.point, spec.dim)
    if args.formula not in FORMULAS:
        raise UsageError(f"unknown formula {args.formula!r}; choose from {', '.join(FORMULAS)}")
    head = {"command": "compute", "spec": os.path.basename(args.spec), "point": vec(x)}
    warns = _warnings(fam, x)
    try:
        r = compute(args.formula, fam, x, epsilon_cap=args.epsilon_cap)
    except HypothesisRefusal as e:
        rep = {**head, "formula": args.formula, "status": "refused", "hypothesis": e.hypothesis, "message": str(e)}
        return rep, [f"{args.formula}: REFUSED ({e.hypothesis}) {e}"], EXIT_REFUSED
    rep = {**head, "status": "ok", **_result_block(r), "warnings": warns}
    lines = [f"formula   {r.formula}", f"point     ({', '.join(vec(x))})", f"result    {describe(r.set)}", f"exact     {str(r.exact).lower()}"]
    lines.append("active    " + (", ".join(f"{lab} (gap {rat(g)})" for lab, g in r.active.indices) or "none"))
    if r.pre_hull is not None:
        lines.append("pre-hull  " + (" ∪ ".join(describe(p) for p in r.pre_hull.distinct()) or "∅"))
    if r.eps_trace:
        lines.append("ε-trace")
        lines += [f"  ε = {e:<12} {s}" for e, s in r.trace_summary()]
    lines += [f"note      {n}" for n in r.notes]
    lines += [f"warning   {w}" for w in warns]
    return rep, lines, EXIT_OK


def _not_applicable(r: SubdiffResult) -> str | None:
    for n in r.notes:
        if n.startswith("warning") or n.startswith("active set empty"):
            return n
    return None


def cmd_compare(args) -> tuple[dict, list[str], int]:
    spec = load_spec(args.spec)
    fam = _family_with_grid(spec, args.grid)
    x = _point(args.point, spec.dim)
    names = list(FORMULAS) if args.formula == "all" else [s.strip() for s in args.formula.split(",") if s.strip()]
    for n in names:
        if n not in FORMULAS:
            raise UsageError(f"unknown formula {n!r}")
    base = augmented_family(fam) if isinstance(fam, Sequence) else as_finite(fam)
    oracle = oracle_subdiff(base, x)
    sets: dict[str, object] = {"oracle": oracle}
    rows = []
    for n in names:
        try:
            r = compute(n, fam, x, epsilon_cap=args.epsilon_cap)
        except HypothesisRefusal as e:
            rows.append({"formula": n, "status": "refused", "hypothesis": e.hypothesis, "message": str(e)})
            continue
        na = _not_applicable(r)
        row = {"formula": n, "status": "n/a" if na else "ok", "set": describe(r.set), "equals_oracle": equals(r.set, oracle)}
        if na:
            row["reason"] = na
        else:
            sets[n] = r.set
        rows.append(row)
    keys = list(sets)
    matrix = {a: {b: equals(sets[a], sets[b]) for b in keys} for a in keys}
    agree = all(r["equals_oracle"] for r in rows if r["status"] == "ok")
    rep = {
        "command": "compare",
        "spec": os.path.basename(args.spec),
        "point": vec(x),
        "oracle": _set_block(oracle),
        "formulas": rows,
        "matrix": matrix,
        "all_agree": agree,
    }
    lines = [f"point   ({', '.join(vec(x))})", f"oracle  {describe(oracle)}", ""]
    for r in rows:
        if r["status"] == "refused":
            lines.append(f"{r['formula']:<20} N/A (refused: {r['hypothesis']})")
        elif r["status"] == "n/a":
            lines.append(f"{r['formula']:<20} {r['set']:<28} N/A ({r['reason']})")
        else:
            lines.append(f"{r['formula']:<20} {r['set']:<28} {'= oracle' if r['equals_oracle'] else '≠ oracle'}")
    lines.append("")
    w = max(len(k) for k in keys) + 4
    lines.append(" " * w + " ".join(f"{j + 1:>2}" for j in range(len(keys))))
    for i, a in enumerate(keys):
        lines.append(f"{i + 1:>2}. {a}".ljust(w) + " ".join(f"{'=' if matrix[a][b] else '≠':>2}" for b in keys))
    lines.append("")
    lines.append("all applicable formulas agree with the oracle" if agree else "DISAGREEMENT with the oracle")
    return rep, lines, EXIT_OK if agree else EXIT_FAILS


def _cert_block(c) -> dict:
    out = {
        "kind": c.kind,
        "holds": c.holds,
        "witness": [{"source": w.source, "kind": w.kind, "vector": vec(w.vector), "coef": rat(w.coef)} for w in c.witness],
        "multipliers": [{"index": lab, "value": rat(v)} for lab, v in c.multipliers],
        "checked_hypotheses": list(c.checked_hypotheses),
        "notes": list(c.notes),
    }
    if c.witness:
        out["replay"] = vec(c.replay())
    if c.grid_delta is not None:
        out["grid_delta"] = rat(c.grid_delta)
    return out


def cmd_sip(args) -> tuple[dict, list[str], int]:
    spec = load_spec(args.spec)
    fam = _family_with_grid(spec, args.grid)
    if spec.objective is None:
        raise UsageError("the problem file has no objective block")
    p = SipProblem(spec.objective, fam)
    x = _point(args.point, spec.dim)
    head = {"command": "sip", "spec": os.path.basename(args.spec), "point": vec(x), "check": args.check}
    if args.check == "slater":
        s = slater_check(p)
        rep = {**head, "status": "holds" if s.holds else "fails", "slater": {
            "holds": s.holds,
            "point": vec(s.point) if s.point else None,
            "value": rat(s.value) if s.value is not None else None,
            "notes": list(s.notes),
        }}
        lines = [f"slater    {'holds' if s.holds else 'does not hold'}"]
        if s.point:
            lines.append(f"x0        ({', '.join(vec(s.point))})  f(x0) = {rat(s.value)}")
        lines += [f"note      {n}" for n in s.notes]
        return rep, lines, EXIT_OK if s.holds else EXIT_FAILS
    try:
        if args.check == "fj":
            c = fj_check(p, x, epsilon_cap=args.epsilon_cap)
        else:
            c = kkt_check(p, x, continuous_variant=args.check == "kkt-continuous", epsilon_cap=args.epsilon_cap)
    except HypothesisRefusal as e:
        rep = {**head, "status": "refused", "hypothesis": e.hypothesis, "message": str(e)}
        return rep, [f"{args.check}: REFUSED ({e.hypothesis}) {e}"], EXIT_REFUSED
    rep = {**head, "status": "holds" if c.holds else "fails", "certificate": _cert_block(c)}
    lines = [f"{c.kind:<9} {'holds' if c.holds else 'does not hold'}"]
    for w in c.witness:
        lines.append(f"  {rat(w.coef):>8} · ({', '.join(vec(w.vector))})  [{w.source}, {w.kind}]")
    if c.witness:
        lines.append(f"  replay = ({', '.join(vec(c.replay()))})")
    if c.multipliers:
        lines.append("multipliers  " + ", ".join(f"{lab}: {rat(v)}" for lab, v in c.multipliers))
    lines += [f"hypothesis  {h}" for h in c.checked_hypotheses]
    lines += [f"note        {n}" for n in c.notes]
    return rep, lines, EXIT_OK if c.holds else EXIT_FAILS


def cmd_conj(args) -> tuple[dict, list[str], int]:
    spec = load_spec(args.spec)
    g = spec.discrete
    if g is None:
        raise UsageError("the problem file has no discrete block")
    head = {"command": "conj", "spec": os.path.basename(args.spec)}
    notes = ["the weak lsc hull of sampled data is the data itself; N_{dom f} = {0} since dom f is the whole space"]
    if args.point.strip() == "argmin":
        out = argmin_convexified(g)
        active = argmin_samples(g)
        rep = {**head, "point": "argmin", "set": _set_block(out), "active_samples": [vec(p) for p in active], "notes": notes}
        lines = [f"argmin of the convexification  {describe(out)}"]
    else:
        xs = _point(args.point, g.dim)
        out = conj_subdiff(g, xs)
        active = inverse_eps_subdiff(g, xs, 0)
        rep = {**head, "point": vec(xs), "set": _set_block(out), "active_samples": [vec(p) for p in active], "notes": notes}
        lines = [f"∂f({', '.join(vec(xs))})  {describe(out)}"]
    lines.append("active samples  " + ", ".join("(" + ", ".join(vec(p)) + ")" for p in active))
    lines += [f"note  {n}" for n in notes]
    return rep, lines, EXIT_OK


COMMANDS = {"compute": cmd_compute, "compare": cmd_compare, "sip": cmd_sip, "conj": cmd_conj}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        rep, lines, code = COMMANDS[args.command](args)
    except (SpecError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    text = "\n".join(lines) + "\n"
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(dumps(rep))
        root, _ = os.path.splitext(args.json)
        with open(root + ".txt", "w", encoding="utf-8") as fh:
            fh.write(text)
    if not args.quiet:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
