import math
import random
from collections import Counter

import pytest
from hypothesis import assume, given, strategies as st
from sympy import Poly, symbols
from sympy.polys.numberfields.basis import round_two
from sympy.polys.numberfields.primes import prime_decomp

from conftest import field_of
from polyalab.errors import InvalidDefiningPolynomial
from polyalab.numfield import NumberField, decompose_prime, ideal_mul, ideal_norm, principal_ideal, valuation
from polyalab.numfield.classgroup import factor_ideal
from polyalab.numfield.ideals import ideal_equal, ideal_from_factorization, ideal_pow, ideal_valuation
from polyalab.poly import IntPoly, is_irreducible_over_Q

X = symbols("X")


def sym(coeffs):
    return Poly(list(reversed(coeffs)), X)


def irreducible_monic(min_deg=2, max_deg=4, bound=12):
    return (
        st.integers(min_deg, max_deg)
        .flatmap(lambda n: st.lists(st.integers(-bound, bound), min_size=n, max_size=n))
        .map(lambda c: tuple(c) + (1,))
        .filter(lambda c: is_irreducible_over_Q(IntPoly(c)))
    )


KNOWN = [
    ((-19, 0, 0, 1), -1083),
    ((-1, -1, 0, 1), -23),
    ((2, 0, 1), -8),
    ((1, -1, 1), -3),
    ((-2, 0, 0, 1), -108),
    ((1, 0, 0, 0, 1), 256),
    ((1, -1, 1, -1, 1), 125),
]


@pytest.mark.parametrize("coeffs,disc", KNOWN)
def test_known_field_discriminants(coeffs, disc):
    assert field_of(coeffs).disc == disc


@pytest.mark.parametrize("text", ["2,0,3", "1,0,1,0,1,0,1", "0,1,1", "5"])
def test_rejects_bad_polynomials(text):
    f = IntPoly.from_text(text)
    with pytest.raises(InvalidDefiningPolynomial):
        NumberField(f)


def oracle_is_consistent(poly_disc, dK):
    """sympy's round_two occasionally returns a value that is not poly_disc / square."""
    if dK == 0 or poly_disc % dK:
        return False
    r = poly_disc // dK
    return r > 0 and math.isqrt(r) ** 2 == r


@given(irreducible_monic())
def test_discriminant_matches_round_two(c):
    K = field_of(c)
    assert K.poly_disc == K.disc * K.index**2
    assert K.disc % 4 in (0, 1)
    _, dK = round_two(sym(c))
    assume(oracle_is_consistent(K.poly_disc, dK))
    assert K.disc == dK


@pytest.mark.parametrize("coeffs,disc", [((-2, -1, -4, 5, 1), -20039), ((1, -11, 6, -9, 1), -571895)])
def test_discriminants_where_round_two_is_inconsistent(coeffs, disc):
    K = field_of(coeffs)
    _, dK = round_two(sym(coeffs))
    assert not oracle_is_consistent(K.poly_disc, dK)
    assert K.disc == disc


# (poly, p) pairs on which sympy's prime_decomp terminates quickly; True marks p | index
DECOMPOSITION_CASES = [
    ((-8, 0, 8, 1), 2), ((-10, 5, 1), 2), ((4, -6, 1), 2), ((-10, -5, -10, 1), 2), ((8, 8, 1), 2),
    ((-11, 6, 6, 0, 1), 2), ((-8, -3, 1, -8, 1), 2), ((-7, -9, 6, 6, 1), 2), ((-6, -1, -9, 5, 1), 2),
    ((-10, 6, -11, 7, 1), 2), ((1, 12, -2, 2, 1), 2), ((2, -1, -3, -5, 1), 2), ((4, 3, -2, 1), 2),
    ((2, -3, 7, -10, 1), 2), ((12, -2, 1), 2), ((6, -2, -2, 10, 1), 2), ((7, 3, 6, 1), 3),
    ((10, 9, -10, 1), 2), ((8, 6, 9, 1), 2), ((-3, 10, 0, 1), 2), ((-1, -12, 2, -1, 1), 2),
    ((-11, -6, 12, 1), 2), ((-8, 11, -5, 1), 2), ((2, 0, 1), 2), ((-4, -8, 1, 5, 1), 2),
    ((10, 1, -1, 1), 2), ((-5, -12, 3, 6, 1), 2), ((-1, 7, 6, -2, 1), 2), ((8, 9, 11, -11, 1), 2),
    ((12, 9, 5, 1), 2), ((3, 8, 1), 2), ((-11, -6, -10, 1), 2), ((-19, 0, 0, 1), 3), ((-1, -1, 0, 1), 23),
]


@pytest.mark.parametrize("coeffs,p", DECOMPOSITION_CASES)
def test_decomposition_matches_sympy(coeffs, p):
    K = field_of(coeffs)
    ours = Counter((P.e, P.f) for P in decompose_prime(K, p))
    theirs = Counter((P.e, P.f) for P in prime_decomp(p, sym(coeffs)))
    assert ours == theirs


def random_pairs(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, 4)
        c = tuple(rng.randint(-9, 9) for _ in range(n)) + (1,)
        if not is_irreducible_over_Q(IntPoly(c)):
            continue
        out.append((c, rng.choice([2, 3, 5, 7, 11, 13])))
    return out


def test_sum_ef_equals_degree_on_random_pairs():
    for c, p in random_pairs(200, 11):
        K = field_of(c)
        facs = decompose_prime(K, p)
        assert sum(P.e * P.f for P in facs) == K.n
        ramified = K.disc % p == 0
        assert ramified == any(P.e > 1 for P in facs)


@given(irreducible_monic(max_deg=3))
def test_prime_product_recovers_pO(c):
    K = field_of(c)
    for p in (2, 3):
        facs = decompose_prime(K, p)
        prod = ideal_from_factorization(K, [(P, P.e) for P in facs])
        assert ideal_equal(prod, principal_ideal(K, [p] + [0] * (K.n - 1)))


elements = st.lists(st.integers(-20, 20), min_size=4, max_size=4).filter(any)


@given(irreducible_monic(max_deg=3), elements, elements)
def test_norm_multiplicative(c, x, y):
    K = field_of(c)
    x, y = x[: K.n], y[: K.n]
    if not any(x) or not any(y):
        return
    xy = K.mul(x, y)
    assert K.norm(xy) == K.norm(x) * K.norm(y)
    a, b = principal_ideal(K, x), principal_ideal(K, y)
    assert ideal_norm(a) == abs(K.norm(x))
    assert ideal_norm(ideal_mul(a, b)) == ideal_norm(a) * ideal_norm(b)


@given(irreducible_monic(max_deg=3), elements, elements)
def test_valuation_additive(c, x, y):
    K = field_of(c)
    x, y = x[: K.n], y[: K.n]
    if not any(x) or not any(y):
        return
    for P in decompose_prime(K, 2) + decompose_prime(K, 3):
        assert valuation(K, P, K.mul(x, y)) == valuation(K, P, x) + valuation(K, P, y)


@given(irreducible_monic(max_deg=3), elements)
def test_factor_ideal_roundtrip(c, x):
    K = field_of(c)
    x = x[: K.n]
    if not any(x):
        return
    a = principal_ideal(K, x)
    exps = factor_ideal(a)
    assert ideal_equal(ideal_from_factorization(K, exps), a)
    for P, e in exps:
        assert ideal_valuation(a, P) == e == valuation(K, P, x)


def test_ideal_pow_and_inverse():
    K = field_of((-19, 0, 0, 1))
    P = decompose_prime(K, 2)[0]
    a = ideal_from_factorization(K, [(P, 3)])
    assert ideal_norm(a) == P.norm**3
    assert ideal_equal(ideal_pow(ideal_from_factorization(K, [(P, 1)]), 3), a)
    b = ideal_from_factorization(K, [(P, 3), (P, -3)])
    assert ideal_norm(b) == 1


def test_element_norm_is_resultant():
    # N(a - theta) = f(a) for monic f
    K = field_of((-19, 0, 0, 1))
    for a in range(-5, 6):
        x = K.from_power([a, -1])
        assert K.norm(x) == a**3 - 19
