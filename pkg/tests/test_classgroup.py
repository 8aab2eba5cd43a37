import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import class_group_of, field_of
from polyalab.errors import FieldMismatch
from polyalab.numfield import RelationEffort, class_group, decompose_prime, is_principal, principal_ideal
from polyalab.numfield.ideals import ideal_from_factorization, ideal_mul
from polyalab.quadratic import quadratic_poly


def brute_imag_class_number(D):
    """Count reduced primitive forms (a, b, c) of discriminant D < 0."""
    h = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) == 1:
                h += 1
        a += 1
    return h


def squarefree(n):
    return n not in (0, 1) and all(n % (p * p) for p in range(2, math.isqrt(abs(n)) + 1))


# cyclic cubics and pure cubics with well-tabulated class numbers
TABLE = [
    ((-1, -1, 0, 1), 1),  # disc -23
    ((-2, 0, 0, 1), 1),
    ((-7, 0, 0, 1), 3),
    ((-11, 0, 0, 1), 2),
    ((-19, 0, 0, 1), 3),
    ((-1, -2, 1, 1), 1),  # conductor 7
    ((-35, -21, 0, 1), 3),  # conductor 63
    ((-169, -54, 1, 1), 4),  # conductor 163
    ((1, 1, 1, 1, 1), 1),  # Q(zeta_5)
    ((1, 0, 0, 0, 1), 1),  # Q(zeta_8)
]


@pytest.mark.parametrize("coeffs,h", TABLE)
def test_tabulated_class_numbers(coeffs, h):
    cg = class_group_of(coeffs)
    assert cg.certified
    assert cg.h == h


@pytest.mark.parametrize("d", [d for d in range(-400, 0) if squarefree(d)][::3])
def test_imaginary_quadratic_against_form_count(d):
    D = d if d % 4 == 1 else 4 * d
    cg = class_group_of(quadratic_poly(d).coeffs)
    assert cg.certified
    assert cg.h == brute_imag_class_number(D)


@pytest.mark.parametrize("d,h", [(10, 2), (15, 2), (79, 3), (82, 4), (229, 3), (226, 8), (2, 1), (3, 1)])
def test_real_quadratic_known(d, h):
    cg = class_group_of(quadratic_poly(d).coeffs)
    assert cg.certified
    assert cg.h == h


def test_invariant_factors_divide():
    cg = class_group_of(quadratic_poly(-5 * 7 * 13).coeffs)
    inv = cg.invariant_factors
    assert all(inv[i + 1] % inv[i] == 0 for i in range(len(inv) - 1))
    assert math.prod(inv) == cg.h


FIELDS = [(-19, 0, 0, 1), (-7, 0, 0, 1), quadratic_poly(-23 * 5).coeffs, quadratic_poly(-30).coeffs, quadratic_poly(79).coeffs]


@settings(max_examples=40)
@given(st.sampled_from(FIELDS), st.lists(st.integers(-15, 15), min_size=3, max_size=3))
def test_principal_ideals_have_trivial_class(coeffs, x):
    K = field_of(coeffs)
    x = x[: K.n]
    if not any(x) or K.norm(x) == 0:
        return
    cg = class_group_of(coeffs)
    # the factorisation may involve primes outside the factor base
    assert cg.is_trivial(cg.coords_of_ideal(principal_ideal(K, x)))


@settings(max_examples=30)
@given(st.sampled_from(FIELDS), st.integers(0, 10**6))
def test_class_map_is_a_homomorphism(coeffs, seed):
    K = field_of(coeffs)
    cg = class_group_of(coeffs)
    rng = random.Random(seed)
    primes = [P for p in (2, 3, 5, 7, 11, 13) for P in decompose_prime(K, p)]
    a = [(rng.choice(primes), rng.randint(-2, 2)) for _ in range(2)]
    b = [(rng.choice(primes), rng.randint(-2, 2)) for _ in range(2)]
    ca = cg.coords_of_factorization(a)
    cb = cg.coords_of_factorization(b)
    cab = cg.coords_of_ideal(ideal_mul(ideal_from_factorization(K, a), ideal_from_factorization(K, b)))
    assert cab == cg.reduce(tuple(x + y for x, y in zip(ca, cb)))


def test_is_principal_returns_generator():
    coeffs = (-19, 0, 0, 1)
    K = field_of(coeffs)
    cg = class_group_of(coeffs)
    for P in decompose_prime(K, 2) + decompose_prime(K, 5) + decompose_prime(K, 7):
        a = ideal_from_factorization(K, [(P, 3)])
        ok, gen = is_principal(K, a, cg)
        assert ok  # Cl = Z/3
        assert gen is not None
        assert principal_ideal(K, gen) == a
    nonprincipal = [P for P in decompose_prime(K, 2) if not cg.is_trivial(cg.coords_of_prime(P))]
    assert nonprincipal
    assert is_principal(K, ideal_from_factorization(K, [(nonprincipal[0], 1)]), cg) == (False, None)


def test_is_principal_rejects_other_field():
    K = field_of((-19, 0, 0, 1))
    L = field_of((-7, 0, 0, 1))
    a = principal_ideal(L, [2, 0, 0])
    with pytest.raises(FieldMismatch):
        is_principal(K, a, class_group_of((-19, 0, 0, 1)))


def test_seed_changes_nothing_for_certified_groups():
    K = field_of((-35, -21, 0, 1))
    hs = {class_group(K, RelationEffort(seed=s)).h for s in (1, 2, 3)}
    assert hs == {3}
