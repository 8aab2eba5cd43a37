"""Fractional ideals in Hermite normal form."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import FieldMismatch
from ..linalg import hnf_mod
from .field import NumberField, PrimeIdealFactor, _coords_in_hnf, _hnf_reduce, valuation

__all__ = [
    "FracIdeal",
    "ideal_from_prime",
    "principal_ideal",
    "unit_ideal",
    "ideal_mul",
    "ideal_pow",
    "ideal_norm",
    "ideal_equal",
    "ideal_valuation",
    "ideal_from_factorization",
]


@dataclass(frozen=True)
class FracIdeal:
    """The ideal (1/den) * span(rows of num), num in lower-triangular HNF.

    ``num`` is kept primitive relative to ``den`` so the pair is canonical.
    """

    field: NumberField
    num: tuple
    den: int = 1

    def __post_init__(self):
        g = self.den
        for r in self.num:
            for x in r:
                g = math.gcd(g, x)
        if g > 1:
            object.__setattr__(self, "num", tuple(tuple(x // g for x in r) for r in self.num))
            object.__setattr__(self, "den", self.den // g)

    def __eq__(self, other):
        return isinstance(other, FracIdeal) and self.field == other.field and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    @property
    def is_integral(self) -> bool:
        return self.den == 1

    def contains(self, x) -> bool:
        """Membership of an integral element (integral-basis coordinates)."""
        return not any(_hnf_reduce(self.num, [c * self.den for c in x]))

    def basis(self):
        return [list(r) for r in self.num]


def _check(a: FracIdeal, b: FracIdeal):
    if a.field != b.field:
        raise FieldMismatch("ideals belong to different fields")


def unit_ideal(K: NumberField) -> FracIdeal:
    n = K.n
    return FracIdeal(K, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), 1)


def ideal_from_prime(K: NumberField, P: PrimeIdealFactor) -> FracIdeal:
    return FracIdeal(K, tuple(tuple(r) for r in P.hnf), 1)


def _int_det(H):
    d = 1
    for i in range(len(H)):
        d *= H[i][i]
    return d


def principal_ideal(K: NumberField, x, den: int = 1) -> FracIdeal:
    """The ideal (x/den) for an integral element x."""
    M = K.mul_matrix(x)
    N = abs(K.norm(x))
    if N == 0:
        raise ValueError("zero element generates no fractional ideal")
    H = hnf_mod(M, K.n, N)
    return FracIdeal(K, tuple(tuple(r) for r in H), den)


def ideal_norm(a: FracIdeal):
    """Absolute norm (an integer for integral ideals, a Fraction otherwise)."""
    from fractions import Fraction

    N = _int_det(a.num)
    if a.den == 1:
        return N
    return Fraction(N, a.den ** a.field.n)


def _mul_integral(K, A, B):
    """Product of integral ideals given by HNF rows."""
    N = _int_det(A) * _int_det(B)
    rows = []
    for b in B:
        M = K.mul_matrix(b)
        for a in A:
            rows.append([sum(a[i] * M[i][k] for i in range(K.n) if a[i]) for k in range(K.n)])
    return hnf_mod(rows, K.n, N)


def _mul_by_two_elt(K, A, p, beta):
    """A * (p, beta) for an integral ideal A."""
    NA = _int_det(A)
    M = K.mul_matrix(beta)
    rows = [[p * x for x in a] for a in A]
    for a in A:
        rows.append([sum(a[i] * M[i][k] for i in range(K.n) if a[i]) for k in range(K.n)])
    return rows, NA


def ideal_mul(a: FracIdeal, b: FracIdeal) -> FracIdeal:
    _check(a, b)
    K = a.field
    H = _mul_integral(K, [list(r) for r in a.num], [list(r) for r in b.num])
    return FracIdeal(K, tuple(tuple(r) for r in H), a.den * b.den)


def ideal_times_prime(a: FracIdeal, P: PrimeIdealFactor) -> FracIdeal:
    """a * P using the two-element form of P when available."""
    K = a.field
    A = [list(r) for r in a.num]
    if P.two_elt is not None:
        rows, NA = _mul_by_two_elt(K, A, P.two_elt[0], P.two_elt[1])
        H = hnf_mod(rows, K.n, NA * P.norm)
    else:
        H = _mul_integral(K, A, [list(r) for r in P.hnf])
    return FracIdeal(K, tuple(tuple(r) for r in H), a.den)


def ideal_pow(a: FracIdeal, e: int) -> FracIdeal:
    if e < 0:
        raise ValueError("negative powers: use ideal_from_factorization")
    result = unit_ideal(a.field)
    base = a
    while e:
        if e & 1:
            result = ideal_mul(result, base)
        e >>= 1
        if e:
            base = ideal_mul(base, base)
    return result


def ideal_equal(a: FracIdeal, b: FracIdeal) -> bool:
    _check(a, b)
    return a.num == b.num and a.den == b.den


def ideal_valuation(a: FracIdeal, P: PrimeIdealFactor) -> int:
    """v_P(a) = min over the basis rows, corrected for the denominator."""
    K = a.field
    v = min(valuation(K, P, list(r)) for r in a.num if any(r))
    if a.den > 1:
        k = 0
        d = a.den
        while d % P.p == 0:
            d //= P.p
            k += 1
        v -= k * P.e
    return v


def _prime_inverse_times_p(K, P):
    """The integral ideal p * P^{-1} = (p, beta)."""
    from .field import _valuation_element

    if P._val_elt is None:
        P._val_elt = _valuation_element(K, P.hnf, P.p)
    p = P.p
    rows = [[p * int(i == j) for j in range(K.n)] for i in range(K.n)]
    rows += K.mul_matrix(P._val_elt)
    return hnf_mod(rows, K.n, p**K.n)


def ideal_from_factorization(K: NumberField, exps) -> FracIdeal:
    """Product of P^e over (P, e) pairs; negative exponents allowed."""
    num = unit_ideal(K)
    den = 1
    for P, e in exps:
        if e > 0:
            for _ in range(e):
                num = ideal_times_prime(num, P)
        elif e < 0:
            inv = FracIdeal(K, tuple(tuple(r) for r in _prime_inverse_times_p(K, P)), 1)
            for _ in range(-e):
                num = ideal_mul(num, inv)
                den *= P.p
    return FracIdeal(K, num.num, num.den * den)


def coords_in_ideal(a: FracIdeal, x):
    """Integer coordinates of integral x in the HNF basis of integral a, or None."""
    return _coords_in_hnf(a.num, x)
