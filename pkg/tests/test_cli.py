import json
import os
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import rand_finite_family
from polysup.cli import main
from polysup.exactgeom import Polyhedron, equals
from polysup.family import Parametric, Sequence
from polysup.pwconvex import affine, polyfunc
from polysup.serialize import (
    SpecError,
    dump_family,
    dump_polyfunc,
    dump_polyhedron,
    dumps,
    parse_family,
    parse_point,
    parse_polyfunc,
    parse_polyhedron,
    parse_rational,
    parse_spec,
)

ROOT = os.path.dirname(os.path.dirname(__file__))


def spec(name):
    return os.path.join(ROOT, "specs", name)


def write(tmp_path, obj, name="p.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def run(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = main([*argv, "--json", str(out), "--quiet"])
    report = json.loads(out.read_text()) if out.exists() else None
    return code, report


# -- serialization ------------------------------------------------------------

def test_parse_rational():
    assert parse_rational("1/3") == F(1, 3)
    assert parse_rational(-2) == -2
    for bad in (0.5, True, "x", None, "1/0"):
        with pytest.raises(SpecError):
            parse_rational(bad)


def test_parse_point():
    assert parse_point("1/2, 0,-3") == (F(1, 2), 0, -3)
    with pytest.raises(SpecError):
        parse_point("a,b")


def test_polyfunc_round_trip_with_strict_rows():
    f = polyfunc([([1, 2], F(1, 3)), ([0, -1], 0)], [([1, 0], 2, True), ([0, 1], 1)])
    assert parse_polyfunc(json.loads(dumps(dump_polyfunc(f))), 2) == f


def test_family_round_trips():
    seq = Sequence((affine([1], -1), affine([1], F(-1, 2))), affine([1]), F(1, 10))
    assert parse_family(dump_family(seq), 1) == seq
    par = Parametric(F(0), F(1), (((0, 1), (0, 0, -1)),), 1, grid=5)
    assert parse_family(dump_family(par), 1) == par


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_random_family_round_trip(seed):
    rng = random.Random(seed)
    fam, _ = rand_finite_family(rng, rng.randint(1, 3))
    back = parse_family(json.loads(dumps(dump_family(fam))), fam.dim)
    assert back == fam


def test_polyhedron_round_trip():
    p = Polyhedron.from_v([[0, 0], [1, 0]], rays=[[0, 1]])
    assert equals(parse_polyhedron(dump_polyhedron(p)), p)
    assert parse_polyhedron(dump_polyhedron(Polyhedron.empty(2))).is_empty
    assert dumps(dump_polyhedron(p)) == dumps(dump_polyhedron(Polyhedron(2, h=p.hrep())))


def test_spec_errors():
    for bad in ([], {}, {"dim": 0}, {"dim": True}, {"dim": 1, "family": {}}, {"dim": 1, "family": {"finite": []}},
                {"dim": 1, "family": {"finite": [{"pieces": [[1]]}]}}, {"dim": 1, "discrete": {"samples": []}},
                {"dim": 1, "discrete": {"samples": [[0, 1], [0, 2]]}}):
        with pytest.raises(SpecError):
            parse_spec(bad)


def test_constraints_alias():
    s = parse_spec({"dim": 1, "objective": {"pieces": [[1, 0]]}, "constraints": {"finite": [{"pieces": [[-1, 0]]}]}})
    assert s.family is not None and s.objective is not None


# -- CLI ------------------------------------------------------------------------------

def test_compute_f1_on_abs(tmp_path):
    code, rep = run(tmp_path, "compute", "--spec", spec("abs.json"), "--point", "0", "--formula", "f1")
    assert code == 0
    assert rep["set"]["v"]["vertices"] == [["-1"], ["1"]]
    assert (tmp_path / "report.txt").exists()


def test_compute_valadier_on_sequence(tmp_path):
    code, rep = run(tmp_path, "compute", "--spec", spec("sequence.json"), "--point", "0", "--formula", "valadier")
    assert code == 0
    assert rep["set"]["empty"] is True
    assert any("active set empty" in n for n in rep["notes"])


def test_compute_refusal_exit_2(tmp_path):
    path = write(tmp_path, {"dim": 1, "family": {"finite": [
        {"pieces": [[0, 0]], "domain": [{"a": [-1], "b": 0, "strict": True}]},
        {"pieces": [[0, 0]], "domain": [{"a": [1], "b": 0, "strict": True}]},
    ]}})
    code, rep = run(tmp_path, "compute", "--spec", path, "--point", "0", "--formula", "fe1")
    assert code == 2
    assert rep["status"] == "refused"


def test_compare_all_equal(tmp_path):
    code, rep = run(tmp_path, "compare", "--spec", spec("abs.json"), "--point", "0")
    assert code == 0


def test_compare_single_affine(tmp_path):
    path = write(tmp_path, {"dim": 1, "family": {"finite": [{"pieces": [["3/2", 1]]}]}})
    code, _ = run(tmp_path, "compare", "--spec", path, "--point", "5")
    assert code == 0


def test_compare_sequence(tmp_path, capsys):
    code = main(["compare", "--spec", spec("sequence.json"), "--point", "0", "--formula", "valadier,compactified,fe1"])
    out = capsys.readouterr().out
    assert code == 0
    assert "N/A" in out and "all applicable formulas agree" in out


def test_sip_commands(tmp_path):
    code, rep = run(tmp_path, "sip", "--spec", spec("sip.json"), "--point", "0", "--check", "kkt")
    assert code == 0 and rep["certificate"]["holds"] is True
    pair = write(tmp_path, {"dim": 1, "objective": {"pieces": [[1, 0]]},
                            "constraints": {"finite": [{"pieces": [[1, 0]]}, {"pieces": [[-1, 0]]}]}})
    code, _ = run(tmp_path, "sip", "--spec", pair, "--point", "0", "--check", "slater")
    assert code == 3
    code, _ = run(tmp_path, "sip", "--spec", pair, "--point", "0", "--check", "fj")
    assert code == 0
    code, _ = run(tmp_path, "sip", "--spec", pair, "--point", "0", "--check", "kkt")
    assert code == 2
    code, _ = run(tmp_path, "sip", "--spec", spec("sip.json"), "--point", "1", "--check", "fj")
    assert code == 2


def test_conj_commands(tmp_path, capsys):
    assert main(["conj", "--spec", spec("wshape.json"), "--point", "argmin"]) == 0
    assert "[0,2]" in capsys.readouterr().out
    assert main(["conj", "--spec", spec("wshape.json"), "--point", "0"]) == 0
    assert "[0,2]" in capsys.readouterr().out
    single = write(tmp_path, {"dim": 1, "discrete": {"samples": [[3, 7]]}})
    assert main(["conj", "--spec", single, "--point", "argmin"]) == 0
    assert "{3}" in capsys.readouterr().out


def test_usage_errors_exit_1(tmp_path, capsys):
    assert main(["compute", "--spec", spec("abs.json"), "--point", "0", "--formula", "nope"]) == 1
    assert main(["compute", "--spec", str(tmp_path / "missing.json"), "--point", "0", "--formula", "f1"]) == 1
    assert main(["compute", "--spec", spec("abs.json"), "--point", "0,1", "--formula", "f1"]) == 1
    assert main(["bogus"]) == 1
    assert main(["sip", "--spec", spec("abs.json"), "--point", "0", "--check", "fj"]) == 1


def test_json_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        main(["compare", "--spec", spec("abs.json"), "--point", "0", "--json", str(out), "--quiet"])
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()
