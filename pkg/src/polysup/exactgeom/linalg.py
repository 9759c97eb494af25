"""Small exact linear-algebra helpers over ``Fraction`` and ``int`` vectors."""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Vector = tuple  # tuple of Fraction (or int)


def frac(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to ``Fraction``. Floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot build an exact rational from {value!r}")


def fvec(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(frac(v) for v in values)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), 0)


def add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def neg(a: Sequence) -> tuple:
    return tuple(-x for x in a)


def zeros(n: int) -> tuple[Fraction, ...]:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(j == i)) for j in range(n))


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (direction preserved)."""
    g = reduce(gcd, v, 0)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def integerize(v: Sequence) -> tuple[int, ...]:
    """Positive rescaling of a rational vector to a primitive integer vector."""
    den = reduce(lcm, (Fraction(x).denominator for x in v), 1)
    return primitive([int(Fraction(x) * den) for x in v])


def normalize_direction(v: Sequence) -> tuple[Fraction, ...]:
    """Canonical representative of the ray spanned by ``v``: primitive integer coords."""
    return tuple(Fraction(x) for x in integerize(v))


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def rref(rows: Sequence[Sequence]) -> tuple[list[tuple[Fraction, ...]], list[int]]:
    """Reduced row echelon form. Returns the nonzero rows and their pivot columns."""
    mat = [list(map(Fraction, r)) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        p = mat[r][c]
        mat[r] = [x / p for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return [tuple(row) for row in mat[:r]], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[0])


def reduce_modulo(v: Sequence, basis: Sequence[Sequence], pivots: Sequence[int]) -> tuple[Fraction, ...]:
    """Subtract multiples of RREF ``basis`` rows so that every pivot coordinate of ``v`` is 0."""
    out = list(map(Fraction, v))
    for row, p in zip(basis, pivots):
        if out[p] != 0:
            f = out[p]
            out = [x - f * y for x, y in zip(out, row)]
    return tuple(out)


def nullspace(rows: Sequence[Sequence], n: int) -> list[tuple[Fraction, ...]]:
    """Basis of {x in Q^n : r.x = 0 for all rows r}."""
    basis, pivots = rref(rows)
    free = [j for j in range(n) if j not in pivots]
    out = []
    for fcol in free:
        v = [Fraction(0)] * n
        v[fcol] = Fraction(1)
        for row, p in zip(basis, pivots):
            v[p] = -row[fcol]
        out.append(tuple(v))
    return out


def solve_unique(rows: Sequence[Sequence], rhs: Sequence) -> tuple[Fraction, ...] | None:
    """Solve a square-or-tall consistent system with a unique solution, else ``None``."""
    aug = [tuple(r) + (b,) for r, b in zip(rows, rhs)]
    basis, pivots = rref(aug)
    n = len(rows[0]) if rows else 0
    if n in pivots or len(pivots) != n:
        return None
    sol = [Fraction(0)] * n
    for row, p in zip(basis, pivots):
        sol[p] = row[n]
    return tuple(sol)
