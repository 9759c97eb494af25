import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import rand_polyfunc, small_vec
from polysup.exactgeom import HPoly, Polyhedron, equals, hrow, is_subset
from polysup.exactgeom.linalg import dot
from polysup.pwconvex import (
    INF,
    affine,
    closure,
    conjugate,
    constant,
    eps_subdiff,
    evaluate,
    indicator,
    lifted_eps_subdiff,
    polyfunc,
    restrict,
    subdiff,
)


def relu():
    return polyfunc([([1], 0), ([0], 0)])


def absf():
    return polyfunc([([1], 0), ([-1], 0)])


def seg(a, b):
    return Polyhedron.from_v([[a], [b]])


def test_evaluate_examples():
    assert evaluate(relu(), [-2]) == 0
    assert evaluate(polyfunc([([1], 0)], [([-1], 0, True)]), [0]) == INF
    assert evaluate(polyfunc([([1, 1], 0), ([2, 0], -1)]), [1, 1]) == 2


def test_closure_examples():
    f = polyfunc([([0], 0)], [([-1], 0, True), ([1], 1)])
    cf = closure(f)
    assert evaluate(cf, [0]) == 0 and evaluate(cf, [1]) == 0 and evaluate(cf, [2]) == INF
    assert closure(relu()) == relu()
    g = closure(polyfunc([([1], 0)], [([1], 0, True)]))
    assert evaluate(g, [0]) == 0 and evaluate(g, [-3]) == -3
    assert not f.is_lsc and cf.is_lsc


def test_conjugate_examples():
    fs = conjugate(absf())
    assert all(evaluate(fs, [s]) == 0 for s in (-1, 0, F(1, 2), 1))
    assert evaluate(fs, [F(3, 2)]) == INF
    g = conjugate(affine([2], 3))
    assert evaluate(g, [2]) == -3 and evaluate(g, [1]) == INF
    r = conjugate(relu())
    assert evaluate(r, [0]) == 0 and evaluate(r, [1]) == 0 and evaluate(r, [2]) == INF


def test_eps_subdiff_examples():
    assert equals(eps_subdiff(affine([2], 3), [5], F(1, 10)), Polyhedron.point([2]))
    assert equals(eps_subdiff(relu(), [1], F(1, 2)), seg(F(1, 2), 1))
    assert equals(eps_subdiff(absf(), [0], 1), seg(-1, 1))


def test_eps_subdiff_outside_domain_is_empty():
    assert eps_subdiff(indicator(HPoly((hrow([1], 0),), 1)), [1], 5).is_empty


def test_negative_eps_rejected():
    with pytest.raises(ValueError):
        eps_subdiff(relu(), [0], -1)


def test_lifted_examples():
    lg = lifted_eps_subdiff(affine([3]), [1])
    for e in (0, 1, 5):
        assert equals(lg.slice(e), Polyhedron.point([3]))
    lg = lifted_eps_subdiff(relu(), [1])
    for e in (0, F(1, 4), F(1, 2), 2):
        assert equals(lg.slice(e), eps_subdiff(relu(), [1], e))
    assert equals(lg.slice(0), Polyhedron.point([1]))
    assert F(1) in lg.breakpoints()
    lg = lifted_eps_subdiff(absf(), [0])
    assert equals(lg.slice(0), seg(-1, 1)) and equals(lg.slice(3), seg(-1, 1))


def test_restrict_examples():
    f = affine([1, 0])
    same = restrict(f, None, f.domain)
    assert evaluate(same, [3, -2]) == 3
    assert equals(subdiff(same, [0, 0]), subdiff(f, [0, 0]))
    g = restrict(f, [[1, 0]])
    assert evaluate(g, [1, 0]) == 1 and evaluate(g, [1, 1]) == INF
    got = subdiff(g, [0, 0])
    assert equals(got, Polyhedron.from_v([[1, 0]], lineality=[[0, 1]]))


def test_constant_and_indicator():
    assert evaluate(constant(-5, 2), [7, 1]) == -5
    assert equals(subdiff(constant(-5, 1), [0]), Polyhedron.point([0]))
    assert equals(subdiff(indicator(HPoly((hrow([1], 1), hrow([-1], 0)), 1)), [0]), Polyhedron.from_h([hrow([1], 0)], 1))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_fenchel_young(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 2)
    f = rand_polyfunc(rng, n, 4)
    x, s = small_vec(rng, n), small_vec(rng, n)
    fs = conjugate(f)
    gap = evaluate(f, x) + evaluate(fs, s) - dot(s, x)
    assert gap >= 0
    assert (gap == 0) == subdiff(f, x).contains(s)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_biconjugate_is_closure(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 2)
    dom = HPoly((hrow([1] * n, 2, strict=rng.random() < 0.5), hrow([-1] + [0] * (n - 1), 1)), n)
    f = rand_polyfunc(rng, n, 3, dom)
    ff, cf = conjugate(conjugate(f)), closure(f)
    for _ in range(6):
        z = small_vec(rng, n)
        assert evaluate(ff, z) == evaluate(cf, z)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.fractions(0, 4, max_denominator=4), st.fractions(0, 4, max_denominator=4))
def test_eps_monotone(seed, e1, e2):
    rng = random.Random(seed)
    n = rng.randint(1, 2)
    f = rand_polyfunc(rng, n, 4)
    x = small_vec(rng, n)
    lo, hi = sorted((e1, e2))
    assert is_subset(eps_subdiff(f, x, lo), eps_subdiff(f, x, hi))
    assert equals(lifted_eps_subdiff(f, x).slice(hi), eps_subdiff(f, x, hi))
