"""JSON problem files and reports. Rationals travel as ``"p/q"`` strings."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .duality import DiscreteFunc, discrete
from .exactgeom import HPoly, HRow, Polyhedron, VPoly
from .family import Finite, IndexedFamily, Parametric, Sequence
from .pwconvex import AffinePiece, PolyFunc


class SpecError(ValueError):
    """Malformed problem file."""


def parse_rational(v) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise SpecError(f"rationals must be strings like '1/2' or integers, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise SpecError(f"bad rational {v!r}") from e
    raise SpecError(f"bad rational {v!r}")


def parse_vector(v, dim: int | None = None) -> tuple[Fraction, ...]:
    if not isinstance(v, list):
        raise SpecError(f"expected a list of rationals, got {v!r}")
    out = tuple(parse_rational(c) for c in v)
    if dim is not None and len(out) != dim:
        raise SpecError(f"expected {dim} coordinates, got {len(out)}")
    return out


def parse_point(text: str) -> tuple[Fraction, ...]:
    """``"1/2,0,-3"`` to a vector."""
    try:
        return tuple(Fraction(c.strip()) for c in text.split(",") if c.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise SpecError(f"bad point {text!r}") from e


def rat(x: Fraction) -> str:
    return str(Fraction(x))


def vec(v) -> list[str]:
    return [rat(c) for c in v]


# --------------------------------------------------------------------------
# functions and families

def parse_rows(rows, dim: int) -> HPoly:
    if not isinstance(rows, list):
        raise SpecError("domain must be a list of rows")
    out = []
    for r in rows:
        if not isinstance(r, dict) or "a" not in r or "b" not in r:
            raise SpecError(f"domain rows need 'a' and 'b': {r!r}")
        out.append(HRow(parse_vector(r["a"], dim), parse_rational(r["b"]), bool(r.get("strict", False))))
    return HPoly(tuple(out), dim)


def parse_polyfunc(obj, dim: int) -> PolyFunc:
    if not isinstance(obj, dict) or "pieces" not in obj:
        raise SpecError(f"a function needs 'pieces': {obj!r}")
    pieces = []
    for p in obj["pieces"]:
        v = parse_vector(p, dim + 1)
        pieces.append(AffinePiece(v[:dim], v[dim]))
    if not pieces:
        raise SpecError("a function needs at least one piece")
    return PolyFunc(tuple(pieces), parse_rows(obj.get("domain", []), dim))


def dump_polyfunc(f: PolyFunc) -> dict:
    out: dict[str, Any] = {"pieces": [vec(p.slope + (p.intercept,)) for p in f.pieces]}
    if f.domain.rows:
        out["domain"] = [
            {"a": vec(r.normal), "b": rat(r.offset), **({"strict": True} if r.strict else {})} for r in f.domain.rows
        ]
    return out


def parse_family(obj, dim: int) -> IndexedFamily:
    if not isinstance(obj, dict) or len(set(obj) & {"finite", "sequence", "parametric"}) != 1:
        raise SpecError("family block needs exactly one of 'finite', 'sequence', 'parametric'")
    if "finite" in obj:
        members = tuple(parse_polyfunc(m, dim) for m in obj["finite"])
        if not members:
            raise SpecError("empty finite family")
        labels = tuple(str(s) for s in obj.get("labels", ()))
        try:
            return Finite(members, labels)
        except ValueError as e:
            raise SpecError(str(e)) from e
    if "sequence" in obj:
        s = obj["sequence"]
        if "prefix" not in s or "limit" not in s:
            raise SpecError("sequence needs 'prefix' and 'limit'")
        return Sequence(
            tuple(parse_polyfunc(m, dim) for m in s["prefix"]),
            parse_polyfunc(s["limit"], dim),
            parse_rational(s.get("slack", "0")),
        )
    s = obj["parametric"]
    try:
        lo, hi = (parse_rational(v) for v in s["range"])
        coeffs = tuple(
            tuple(tuple(parse_rational(c) for c in poly) for poly in piece) for piece in s["coeffs"]
        )
        dom = parse_rows(s["domain"], dim) if "domain" in s else None
        return Parametric(lo, hi, coeffs, dim, int(s.get("grid", 9)), dom)
    except (KeyError, TypeError) as e:
        raise SpecError(f"bad parametric block: {e}") from e
    except ValueError as e:
        raise SpecError(str(e)) from e


def dump_family(fam: IndexedFamily) -> dict:
    if isinstance(fam, Finite):
        return {"finite": [dump_polyfunc(m) for m in fam.members], "labels": list(fam.labels)}
    if isinstance(fam, Sequence):
        return {
            "sequence": {
                "prefix": [dump_polyfunc(m) for m in fam.prefix],
                "limit": dump_polyfunc(fam.limit),
                "slack": rat(fam.slack),
            }
        }
    out = {
        "range": [rat(fam.lo), rat(fam.hi)],
        "coeffs": [[[rat(c) for c in poly] for poly in piece] for piece in fam.coeffs],
        "grid": fam.grid,
    }
    if fam.domain is not None:
        out["domain"] = dump_polyfunc(PolyFunc((AffinePiece((Fraction(0),) * fam.dim, Fraction(0)),), fam.domain))["domain"]
    return {"parametric": out}


# --------------------------------------------------------------------------
# problem files

@dataclass(frozen=True)
class ProblemSpec:
    dim: int
    family: IndexedFamily | None
    objective: PolyFunc | None
    discrete: DiscreteFunc | None
    meta: dict


def parse_spec(obj) -> ProblemSpec:
    if not isinstance(obj, dict):
        raise SpecError("a problem file is a JSON object")
    if "dim" not in obj:
        raise SpecError("missing 'dim'")
    dim = obj["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SpecError("'dim' must be a positive integer")
    fam_obj = obj.get("family", obj.get("constraints"))
    fam = parse_family(fam_obj, dim) if fam_obj is not None else None
    objective = parse_polyfunc(obj["objective"], dim) if "objective" in obj else None
    disc = None
    if "discrete" in obj:
        rows = obj["discrete"].get("samples") if isinstance(obj["discrete"], dict) else None
        if not rows:
            raise SpecError("'discrete' needs a nonempty 'samples' list")
        samples = []
        for r in rows:
            v = parse_vector(r, dim + 1)
            samples.append((v[:dim], v[dim]))
        try:
            disc = discrete(samples)
        except ValueError as e:
            raise SpecError(str(e)) from e
    return ProblemSpec(dim, fam, objective, disc, dict(obj.get("meta", {})))


def load_spec(path: str) -> ProblemSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as e:
        raise SpecError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise SpecError(f"{path} is not valid JSON: {e}") from e
    return parse_spec(obj)


# --------------------------------------------------------------------------
# polyhedra

def dump_polyhedron(p: Polyhedron) -> dict:
    c = p.canonical()
    v = c.vrep()
    if v.is_empty:
        return {"dim": p.dim, "empty": True}
    return {
        "dim": p.dim,
        "empty": False,
        "v": {"vertices": [vec(x) for x in v.vertices], "rays": [vec(x) for x in v.rays], "lineality": [vec(x) for x in v.lineality]},
        "h": [{"a": vec(r.normal), "b": rat(r.offset)} for r in c.hrep().rows],
    }


def parse_polyhedron(obj) -> Polyhedron:
    dim = obj["dim"]
    if obj.get("empty"):
        return Polyhedron.empty(dim)
    if "v" in obj:
        v = obj["v"]
        return Polyhedron(
            dim,
            v=VPoly(
                tuple(parse_vector(x, dim) for x in v.get("vertices", [])),
                tuple(parse_vector(x, dim) for x in v.get("rays", [])),
                tuple(parse_vector(x, dim) for x in v.get("lineality", [])),
                dim,
            ),
        )
    return Polyhedron(dim, h=parse_rows(obj.get("h", []), dim))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=False) + "\n"
