import random

import mpmath
import pytest
import sympy
from hypothesis import given, strategies as st
from sympy import Poly, symbols

from polyalab.poly import (
    IntPoly,
    discriminant,
    factor_mod_p,
    factor_over_Z,
    is_irreducible_over_Q,
    real_root_count,
    resultant,
    squarefree_kernel,
)

X = symbols("X")


def to_sympy(f: IntPoly):
    return Poly(list(reversed(f.coeffs)), X)


coeffs = st.lists(st.integers(-20, 20), min_size=2, max_size=7).filter(lambda c: c[-1] != 0)
monic = st.lists(st.integers(-30, 30), min_size=1, max_size=6).map(lambda c: IntPoly(tuple(c) + (1,)))


def test_parse_ascending():
    f = IntPoly.from_text("1,5,-1,0,0,1")
    assert f.coeffs == (1, 5, -1, 0, 0, 1)
    assert f.degree == 5
    assert f(2) == 1 + 10 - 4 + 32


@pytest.mark.parametrize("text", ["", "  ", "1,,2", "1,a"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        IntPoly.from_text(text)


def test_trailing_zeros_trimmed():
    assert IntPoly((1, 2, 0, 0)).degree == 1
    assert IntPoly((0,)).is_zero()


def test_known_discriminants():
    assert discriminant(IntPoly((-19, 0, 0, 1))) == -27 * 19**2
    assert discriminant(IntPoly((-1, -1, 0, 1))) == -23
    assert discriminant(IntPoly((1, 1))) == 1


def root_product_resultant(f: IntPoly, g: IntPoly) -> int:
    """Oracle: lc(f)^deg(g) * prod g(alpha) over the complex roots of f."""
    with mpmath.workdps(80):
        roots = mpmath.polyroots(list(reversed(f.coeffs)), maxsteps=400, extraprec=400)
        val = mpmath.mpf(f.lc) ** g.degree
        for r in roots:
            val *= mpmath.polyval(list(reversed(g.coeffs)), r)
        return int(mpmath.nint(mpmath.re(val)))


def test_resultant_sign_convention():
    # Res(X+1, X^3+X) = g(-1) = -2
    assert resultant(IntPoly((1, 1)), IntPoly((0, 1, 0, 1))) == -2
    assert resultant(IntPoly((0, 1, 0, 1)), IntPoly((1, 1))) == 2
    assert resultant(IntPoly((2, 1)), IntPoly((0, 0, 1))) == 4


@given(coeffs, coeffs)
def test_resultant_matches_root_product(a, b):
    f, g = IntPoly(tuple(a)), IntPoly(tuple(b))
    if f.degree < 1 or g.degree < 1:
        return
    assert resultant(f, g) == root_product_resultant(f, g)


@given(coeffs, coeffs)
def test_resultant_antisymmetry(a, b):
    f, g = IntPoly(tuple(a)), IntPoly(tuple(b))
    assert resultant(f, g) == (-1) ** (f.degree * g.degree) * resultant(g, f)


@given(coeffs)
def test_discriminant_matches_sympy(c):
    f = IntPoly(tuple(c))
    if f.degree < 1:
        return
    assert discriminant(f) == sympy.discriminant(to_sympy(f))


@given(monic)
def test_factor_over_Z_matches_sympy(f):
    ours = sorted((g.coeffs, e) for g, e in factor_over_Z(f))
    _, fl = to_sympy(f).factor_list()
    theirs = sorted((tuple(reversed([int(c) for c in g.all_coeffs()])), e) for g, e in fl)
    # normalise signs: sympy returns primitive factors with positive leading coefficient
    assert ours == theirs
    assert is_irreducible_over_Q(f) == (len(fl) == 1 and fl[0][1] == 1)


@given(monic, st.sampled_from([2, 3, 5, 7, 11, 13, 101]))
def test_factor_mod_p_matches_sympy(f, p):
    ours = sorted((tuple(g.coeffs), e) for g, e in factor_mod_p(f, p))
    sp = Poly(list(reversed(f.coeffs)), X, modulus=p)
    _, fl = sp.factor_list()
    theirs = sorted((tuple(int(c) % p for c in reversed(g.all_coeffs())), e) for g, e in fl)
    assert ours == theirs


@given(monic)
def test_real_root_count_matches_sympy(f):
    if not is_irreducible_over_Q(f):
        return
    assert real_root_count(f) == len(to_sympy(f).real_roots())


@given(st.integers(-10**6, 10**6).filter(lambda n: n != 0))
def test_squarefree_kernel(n):
    k = squarefree_kernel(n)
    assert (k > 0) == (n > 0)
    assert all(e == 1 for e in sympy.factorint(abs(k)).values())
    q, r = divmod(n, k)
    assert r == 0 and sympy.sqrt(q).is_Integer


def test_mul_add_consistent_with_evaluation():
    rng = random.Random(5)
    for _ in range(50):
        f = IntPoly(tuple(rng.randint(-9, 9) for _ in range(4)))
        g = IntPoly(tuple(rng.randint(-9, 9) for _ in range(3)))
        x = rng.randint(-5, 5)
        assert (f * g)(x) == f(x) * g(x)
        assert (f + g)(x) == f(x) + g(x)
        assert (f - g)(x) == f(x) - g(x)
