import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import rand_finite_family
from polysup.errors import HypothesisRefusal
from polysup.exactgeom import HPoly, Polyhedron, PolyUnion, equals, hrow
from polysup.family import Finite, Parametric, Sequence
from polysup.oracle import oracle_subdiff
from polysup.pwconvex import affine, constant, lifted_eps_subdiff, polyfunc
from polysup.supcalc import FORMULAS, compute, eps_limit

ABS = Finite((affine([1]), affine([-1])))
SEG = Polyhedron.from_v([[-1], [1]])


def seq_x_minus_1_over_n():
    return Sequence(tuple(affine([1], F(-1, n)) for n in range(1, 21)), affine([1]))


def relu():
    return polyfunc([([1], 0), ([0], 0)])


def on_unit(f):
    return polyfunc([(p.slope, p.intercept) for p in f.pieces], [([1], 1), ([-1], 0)])


def pt(*c):
    return Polyhedron.point(list(c))


# -- eps_limit ---------------------------------------------------------------

def test_eps_limit_two_points_union():
    lifted = [("a", lifted_eps_subdiff(affine([1]), [0]), F(0)), ("b", lifted_eps_subdiff(affine([-1]), [0]), F(0))]
    r = eps_limit(lifted, None, hull_inside=False)
    assert r.exact and isinstance(r.value, PolyUnion)
    assert r.value.same_parts(PolyUnion.of([("a", pt(1)), ("b", pt(-1))], 1))
    assert len(r.trace) == 1


def test_eps_limit_shrinking_slices():
    r = eps_limit([("a", lifted_eps_subdiff(relu(), [1]), F(0))], None, hull_inside=True)
    assert equals(r.value, pt(1))
    assert r.frozen_at < 1


def test_eps_limit_gap_exclusion():
    r = eps_limit([("a", lifted_eps_subdiff(affine([1]), [0]), F(1, 2))], None, hull_inside=True)
    assert r.value.is_empty
    assert equals(r.trace[0][1], pt(1))


def test_eps_limit_cap_flags_inexact():
    r = eps_limit([("a", lifted_eps_subdiff(relu(), [1]), F(0))], None, hull_inside=True, cap=1)
    assert not r.exact
    assert equals(r.value, Polyhedron.from_v([[0], [1]]))


def test_eps_limit_rejects_negative_gap():
    with pytest.raises(ValueError):
        eps_limit([("a", lifted_eps_subdiff(affine([1]), [0]), F(-1))], None, True)


# -- formula examples ------------------------------------------------------------

@pytest.mark.parametrize("formula", ["valadier", "form5", "fe1", "fe2", "f1", "f1b", "khay", "brondsted", "compactified"])
def test_abs_pair(formula):
    assert equals(compute(formula, ABS, [0]).set, SEG)


@pytest.mark.parametrize("formula", ["valadier", "fe1", "f1", "f1b", "khay", "brondsted", "compactified"])
def test_single_affine(formula):
    assert equals(compute(formula, Finite((affine([2]),)), [F(3, 7)]).set, pt(2))


def test_valadier_sequence_without_augmentation():
    r = compute("valadier", seq_x_minus_1_over_n(), [0])
    assert r.set.is_empty
    assert any(n.startswith("active set empty") for n in r.notes)


@pytest.mark.parametrize("formula", ["fe1", "fe2", "f1", "f1b", "compactified", "compactified-tilde"])
def test_sequence_formulas_give_limit_slope(formula):
    assert equals(compute(formula, seq_x_minus_1_over_n(), [0]).set, pt(1))


def test_form5_refuses_sequence():
    with pytest.raises(HypothesisRefusal) as e:
        compute("form5", seq_x_minus_1_over_n(), [0])
    assert e.value.hypothesis == "compact-index"


def test_form5_subspace():
    fam = Finite((affine([1, 0]),))
    got = compute("form5", fam, [0, 0], L=[[1, 0]]).set
    assert equals(got, Polyhedron.from_v([[1, 0]], lineality=[[0, 1]]))
    assert equals(compute("form5", Finite((constant(0, 1),)), [3]).set, pt(0))


def test_fe1_constant_minimum():
    assert equals(compute("fe1", Finite((constant(-5, 1),)), [0]).set, pt(0))


def test_fe2_single_member_and_f1_on_empty_domain():
    assert equals(compute("fe2", Finite((relu(),)), [1]).set, pt(1))
    # the closure condition fails; f(0) is +inf so the answer is empty either way
    fam = Finite((polyfunc([([0], 0)], [([-1], 0, True)]), polyfunc([([0], 0)], [([1], 0, True)]), constant(0, 1)))
    assert compute("f1", fam, [0]).set.is_empty


def test_fe1_refuses_without_closure_condition():
    fam = Finite((polyfunc([([0], 0)], [([-1], 0, True)]), polyfunc([([0], 0)], [([1], 0, True)])))
    with pytest.raises(HypothesisRefusal) as e:
        compute("fe1", fam, [0])
    assert e.value.hypothesis == "cll"


def test_f1_pre_hull_is_the_two_points():
    r = compute("f1", ABS, [0])
    assert r.pre_hull.same_parts(PolyUnion.of([("1", pt(1)), ("2", pt(-1))], 1))
    assert equals(r.set, SEG)


def test_khay_and_f1b_on_box_domain():
    fam = Finite((on_unit(constant(0, 1)),))
    halfline = Polyhedron.from_h([hrow([1], 0)], 1)
    assert equals(compute("khay", fam, [0]).set, halfline)
    assert equals(compute("f1b", fam, [0]).set, halfline)
    with pytest.raises(HypothesisRefusal):
        compute("brondsted", fam, [0])


def test_khay_relu_kink():
    assert equals(compute("khay", Finite((relu(),)), [0]).set, Polyhedron.from_v([[0], [1]]))


def test_khay_refuses_without_continuity_point():
    fam = Finite((polyfunc([([0], 0)], [([1], 0), ([-1], 0)]),))
    with pytest.raises(HypothesisRefusal) as e:
        compute("khay", fam, [0])
    assert e.value.hypothesis == "continuity"


def test_brondsted_2d():
    fam = Finite((affine([1, 0]), affine([-1, 0]), affine([0, 1])))
    want = Polyhedron.from_v([[1, 0], [-1, 0], [0, 1]])
    assert equals(compute("brondsted", fam, [0, 0]).set, want)


def test_compactified_case_split():
    prefix = (affine([1]),) + tuple(affine([1], F(-1) + F(1, n)) for n in range(2, 21))
    r = compute("compactified", Sequence(prefix, affine([1], -1)), [0])
    assert not r.active.includes_limit
    assert equals(r.set, pt(1))
    r = compute("compactified", seq_x_minus_1_over_n(), [0])
    assert r.active.includes_limit


def test_parametric_is_flagged_inexact():
    par = Parametric(F(0), F(1), (((1,), (0, -1)),), 1, grid=3)
    r = compute("fe1", par, [0])
    assert not r.exact
    assert equals(r.set, pt(1))
    assert any("surrogate" in n or "grid" in n for n in r.notes)


def test_unknown_formula():
    with pytest.raises(KeyError):
        compute("nope", ABS, [0])


def test_every_formula_registered():
    assert set(FORMULAS) == {
        "valadier", "form5", "fe1", "fe2", "f1", "f1b", "khay", "brondsted", "compactified", "compactified-tilde",
    }


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_formulas_agree_with_oracle(seed):
    rng = random.Random(seed)
    fam, x = rand_finite_family(rng, rng.randint(1, 2), 4, 3)
    want = oracle_subdiff(fam, x)
    for k in ("valadier", "fe1", "fe2", "f1", "f1b", "khay", "form5", "compactified"):
        assert equals(compute(k, fam, x).set, want), k


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_domains_with_box(seed):
    rng = random.Random(seed)
    box = HPoly((hrow([1], 2), hrow([-1], 2)), 1)
    fam, _ = rand_finite_family(rng, 1, 3, 3, domain_for=lambda r: box)
    x = (F(rng.choice((-2, 2))),)
    want = oracle_subdiff(fam, x)
    for k in ("fe1", "f1", "f1b", "khay"):
        assert equals(compute(k, fam, x).set, want), k
