"""Ostrowski ideals, Polya groups, relative Polya groups and the class maps eps and N."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from sympy import factorint, primerange

from .errors import BadEmbedding, FieldMismatch, RequiresCertifiedClassGroup
from .linalg import hnf, smith_from_hnf
from .numfield.classgroup import ClassGroup
from .numfield.field import NumberField, PrimeIdealFactor, _coords_in_hnf, _polymulmod, decompose_prime
from .numfield.ideals import FracIdeal, ideal_from_factorization

__all__ = [
    "OstrowskiIdeal",
    "PolyaGroup",
    "Embedding",
    "ClassMap",
    "default_bound",
    "ostrowski_ideals",
    "polya_group",
    "relative_polya_group",
    "extend_class_map_epsilon",
    "norm_class_map",
    "rational_embedding",
    "identity_embedding",
]

DEFAULT_WINDOW = 25


def default_bound(disc: int) -> int:
    """max(100, 10 * ceil(log(|D|)^2))."""
    D = abs(disc)
    if D <= 1:
        return 100
    return max(100, 10 * math.ceil(math.log(D) ** 2))


def _field_label(K: NumberField) -> str:
    if K.n == 1:
        return "Q"
    return str(K.poly)


@dataclass
class OstrowskiIdeal:
    """Product of the primes above p sharing one (relative) residue degree.

    ``q`` is the absolute norm of each prime in the product.  In the relative
    case ``under_prime`` is the prime of the base field below them and ``f``
    is the relative residue degree.
    """

    p: int
    f: int
    q: int
    primes: tuple
    over_field: NumberField
    under_field: NumberField | None = None
    under_prime: PrimeIdealFactor | None = None
    _ideal: FracIdeal | None = field(default=None, repr=False)

    @property
    def ideal(self) -> FracIdeal:
        if self._ideal is None:
            self._ideal = ideal_from_factorization(self.over_field, [(P, 1) for P in self.primes])
        return self._ideal

    @property
    def under_label(self) -> str:
        return "Q" if self.under_field is None else _field_label(self.under_field)

    def factorization(self):
        return [(P, 1) for P in self.primes]


def ostrowski_ideals(K: NumberField, p: int) -> list[OstrowskiIdeal]:
    """The ideals Pi_q(K) for the prime p, one per occurring residue degree."""
    groups = {}
    for P in decompose_prime(K, p):
        groups.setdefault(P.f, []).append(P)
    return [OstrowskiIdeal(p, f, p**f, tuple(groups[f]), K) for f in sorted(groups)]


# ---------------------------------------------------------------- subgroups


class _Subgroup:
    """Subgroup of Z/d_1 x ... x Z/d_r generated by coordinate vectors."""

    def __init__(self, invariants, vectors=()):
        self.d = list(invariants)
        self.r = len(self.d)
        self.vectors = []
        self.H = [[self.d[i] * int(i == j) for j in range(self.r)] for i in range(self.r)]
        for v in vectors:
            self.add(v)

    def contains(self, v) -> bool:
        if self.r == 0:
            return True
        return _coords_in_hnf(self.H, list(v)) is not None

    def add(self, v) -> bool:
        """Add a generator; True when the subgroup grew."""
        if self.contains(v):
            return False
        self.vectors.append(tuple(v))
        self.H = hnf(self.H + [list(v)], self.r)
        return True

    @property
    def order(self) -> int:
        idx = 1
        for i in range(self.r):
            idx *= self.H[i][i]
        return math.prod(self.d) // idx

    def invariants(self) -> list[int]:
        """Invariant factors of the subgroup H / diag(d)."""
        if self.r == 0 or self.order == 1:
            return []
        # rows of diag(d) expressed in the basis given by the rows of H
        M = []
        for i in range(self.r):
            target = [Fraction(self.d[i] * int(i == j)) for j in range(self.r)]
            x = [Fraction(0)] * self.r
            for j in range(self.r - 1, -1, -1):
                s = target[j] - sum(x[k] * self.H[k][j] for k in range(j + 1, self.r))
                x[j] = s / self.H[j][j]
            assert all(c.denominator == 1 for c in x)
            M.append([int(c) for c in x])
        return smith_from_hnf(hnf(M, self.r)).invariants


@dataclass
class PolyaGroup:
    ambient: ClassGroup
    generators: list
    invariant_factors: list
    order: int
    bound: int
    window: int
    stabilized: bool
    certified_complete: bool
    primes_used: list = field(default_factory=list)
    last_growth: int | None = None
    under_field: NumberField | None = None
    _sub: _Subgroup | None = field(default=None, repr=False)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def contains(self, v) -> bool:
        return self._sub.contains(self.ambient.reduce(v))

    def contains_group(self, other: PolyaGroup) -> bool:
        if other.ambient.field != self.ambient.field:
            raise FieldMismatch("subgroups of different class groups")
        return all(self.contains(c) for _, c in other.generators)

    def nonprincipal_generator(self):
        """First Ostrowski ideal whose class is nontrivial, or None."""
        for o, c in self.generators:
            if not self.ambient.is_trivial(c):
                return o, c
        return None

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "invariant_factors": list(self.invariant_factors),
            "generators": [
                {"p": o.p, "f": o.f, "class_vector": list(c)} for o, c in self.generators if not self.ambient.is_trivial(c)
            ],
            "B": self.bound,
            "stabilized": self.stabilized,
            "certified_complete": self.certified_complete,
        }


def _looks_galois(K: NumberField) -> bool:
    if K.n <= 2:
        return True
    if K.n == 3:
        return K.poly_disc > 0 and math.isqrt(K.poly_disc) ** 2 == K.poly_disc
    return False


def _ramified_primes(K: NumberField) -> list[int]:
    return sorted(factorint(abs(K.disc))) if abs(K.disc) > 1 else []


def _generate(cg, prime_seq, ideals_of, window):
    """Shared loop: feed Ostrowski ideals prime by prime, tracking growth."""
    sub = _Subgroup(cg.invariant_factors)
    gens = []
    since = 0
    last = None
    used = []
    full = False
    for p in prime_seq:
        if sub.order == cg.h:
            full = True
            break
        used.append(p)
        grew = False
        for o in ideals_of(p):
            c = cg.coords_of_factorization(o.factorization())
            gens.append((o, c))
            if sub.add(c):
                grew = True
        if grew:
            since = 0
            last = p
        else:
            since += 1
    if sub.order == cg.h:
        full = True
    return sub, gens, used, last, full or since >= window


def polya_group(
    K: NumberField,
    cg: ClassGroup,
    B: int | None = None,
    window: int = DEFAULT_WINDOW,
    galois: bool | None = None,
) -> PolyaGroup:
    """Subgroup of Cl(K) generated by the classes of the Ostrowski ideals.

    Every prime p <= B and every ramified prime contributes.  For Galois K
    only ramified primes can contribute (for unramified p the Ostrowski
    ideal is pO_K), so the result is complete.
    """
    if cg.field != K:
        raise FieldMismatch("class group belongs to another field")
    if not cg.certified:
        raise RequiresCertifiedClassGroup("Polya group needs a certified class group")
    if galois is None:
        galois = _looks_galois(K)
    ram = _ramified_primes(K)
    if B is None:
        B = default_bound(K.disc)
    if galois:
        seq = ram
    else:
        seq = sorted(set(primerange(2, B + 1)) | set(ram))
    sub, gens, used, last, stabilized = _generate(cg, seq, lambda p: ostrowski_ideals(K, p), window)
    if galois:
        stabilized = True
    return PolyaGroup(
        cg,
        gens,
        sub.invariants(),
        sub.order,
        B,
        window,
        stabilized,
        galois or sub.order == cg.h,
        used,
        last,
        None,
        sub,
    )


# ---------------------------------------------------------------- embeddings


class Embedding:
    """K inside L, given by the image of K's generator in L's power basis."""

    def __init__(self, K: NumberField, L: NumberField, image):
        self.K = K
        self.L = L
        img = [Fraction(c) for c in image] + [Fraction(0)] * (L.n - len(image))
        if len(img) > L.n:
            raise BadEmbedding("image has more coefficients than the degree of L")
        self.image = img
        fL = list(L.poly.coeffs)
        powers = [[Fraction(1)] + [Fraction(0)] * (L.n - 1)]
        for _ in range(K.n):
            powers.append(_polymulmod(powers[-1], img, fL))
        val = [Fraction(0)] * L.n
        for i, c in enumerate(K.poly.coeffs):
            if c:
                for j in range(L.n):
                    val[j] += c * powers[i][j]
        if any(val):
            raise BadEmbedding("image is not a root of the defining polynomial of K")
        if L.n % K.n:
            raise BadEmbedding("degree of K does not divide the degree of L")
        self._powers = powers[: K.n]
        # images of the integral basis of K, as integral coordinates in L
        self.matrix = []
        for i in range(K.n):
            e = [int(i == j) for j in range(K.n)]
            self.matrix.append(self._map_power(K.to_power(e)))

    @property
    def degree(self) -> int:
        return self.L.n // self.K.n

    def _map_power(self, coeffs):
        out = [Fraction(0)] * self.L.n
        for i, c in enumerate(coeffs):
            if c:
                for j in range(self.L.n):
                    out[j] += c * self._powers[i][j]
        x = self.L.from_power(out)
        if any(c.denominator != 1 for c in x):
            raise BadEmbedding("an integral element of K maps to a non-integral element of L")
        return [int(c) for c in x]

    def map(self, x):
        """Integral-basis coordinates in L of the K-integer with coordinates x."""
        out = [0] * self.L.n
        for i, a in enumerate(x):
            if a:
                for j in range(self.L.n):
                    out[j] += a * self.matrix[i][j]
        return out

    def prime_below(self, Q: PrimeIdealFactor) -> PrimeIdealFactor:
        """The prime of K contained in the prime Q of L."""
        for P in decompose_prime(self.K, Q.p):
            if P.two_elt is not None:
                gens = [P.two_elt[1]]
            else:
                gens = [list(r) for r in P.hnf]
            if all(Q.contains(self.map(g)) for g in gens):
                return P
        raise BadEmbedding(f"no prime of K lies below a prime of L above {Q.p}")

    def split(self, p: int):
        """[(P, [(Q, e(Q/P), f(Q/P)), ...])] for the primes P of K above p."""
        out = {}
        for Q in decompose_prime(self.L, p):
            P = self.prime_below(Q)
            out.setdefault(P.key(), (P, []))[1].append((Q, Q.e // P.e, Q.f // P.f))
        return [out[k] for k in sorted(out)]


def rational_embedding(L: NumberField) -> Embedding:
    """Q inside L (Q is the degree-1 field X = 0)."""
    from .poly import IntPoly

    return Embedding(NumberField(IntPoly((0, 1))), L, [0])


def identity_embedding(L: NumberField) -> Embedding:
    return Embedding(L, L, [0, 1])


def relative_ostrowski_ideals(emb: Embedding, p: int) -> list[OstrowskiIdeal]:
    """The ideals Pi_{P^f}(L/K) for the primes P of K above p."""
    out = []
    for P, above in emb.split(p):
        groups = {}
        for Q, _, f in above:
            groups.setdefault(f, []).append(Q)
        for f in sorted(groups):
            out.append(OstrowskiIdeal(p, f, P.norm**f, tuple(groups[f]), emb.L, emb.K, P))
    return out


def relative_polya_group(
    L: NumberField,
    emb: Embedding,
    cgL: ClassGroup,
    B: int | None = None,
    window: int = DEFAULT_WINDOW,
    galois: bool = False,
) -> PolyaGroup:
    """Subgroup of Cl(L) generated by the relative Ostrowski ideals of L/K.

    When L/K is Galois and B reaches the Minkowski bound of K, the extended
    classes of K and all ramified primes are included, so the result is
    complete.
    """
    if emb.L != L or cgL.field != L:
        raise FieldMismatch("embedding or class group refers to another field")
    if not cgL.certified:
        raise RequiresCertifiedClassGroup("relative Polya group needs a certified class group")
    if B is None:
        B = default_bound(L.disc)
    seq = sorted(set(primerange(2, B + 1)) | set(_ramified_primes(L)))
    sub, gens, used, last, stabilized = _generate(cgL, seq, lambda p: relative_ostrowski_ideals(emb, p), window)
    complete = sub.order == cgL.h or (galois and B >= emb.K.minkowski_bound_exact())
    return PolyaGroup(
        cgL,
        gens,
        sub.invariants(),
        sub.order,
        B,
        window,
        stabilized or complete,
        complete,
        used,
        last,
        emb.K,
        sub,
    )


# ---------------------------------------------------------------- class maps


@dataclass
class ClassMap:
    """Homomorphism between class groups in generator coordinates.

    Row t of ``matrix`` is the image of the t-th source generator.
    """

    source: list
    target: list
    matrix: list

    def apply(self, v):
        out = [0] * len(self.target)
        for s, c in enumerate(v):
            if c:
                for t in range(len(self.target)):
                    out[t] += c * self.matrix[s][t]
        return tuple(x % d for x, d in zip(out, self.target))

    def compose(self, other: ClassMap) -> ClassMap:
        """other after self."""
        return ClassMap(self.source, other.target, [list(other.apply(row)) for row in self.matrix])

    def elements(self):
        return product(*[range(d) for d in self.source])

    def kernel(self) -> list:
        zero = tuple([0] * len(self.target))
        return [v for v in self.elements() if self.apply(v) == zero]

    @property
    def kernel_order(self) -> int:
        return len(self.kernel())

    @property
    def is_injective(self) -> bool:
        return self.kernel_order == 1

    @property
    def is_zero(self) -> bool:
        return all(self.apply(row) == tuple([0] * len(self.target)) for row in _unit_rows(len(self.source)))


def _unit_rows(r):
    return [[int(i == j) for j in range(r)] for i in range(r)]


def _generator_factorizations(cg: ClassGroup):
    """For each generator of cg, a list of (prime, exponent) representing it."""
    eng = cg._engine
    out = []
    for t in range(len(cg.invariant_factors)):
        y = [int(t == s) for s in range(len(cg.invariant_factors))]
        w = eng.smith.vector(y)
        out.append([(eng.fb[eng.dense[j]], w[j]) for j in range(len(w)) if w[j]])
    return out


def _check_certified(*cgs):
    for cg in cgs:
        if not cg.certified:
            raise RequiresCertifiedClassGroup("class map needs certified class groups")


def extend_class_map_epsilon(K: NumberField, L: NumberField, emb: Embedding, cgK: ClassGroup, cgL: ClassGroup) -> ClassMap:
    """Cl(K) -> Cl(L) induced by extending ideals to O_L."""
    _check_certified(cgK, cgL)
    if emb.K != K or emb.L != L:
        raise FieldMismatch("embedding does not match the fields")
    rows = []
    for fac in _generator_factorizations(cgK):
        acc = []
        for P, e in fac:
            above = {P2.key(): lst for P2, lst in emb.split(P.p)}
            acc += [(Q, e * eQ) for Q, eQ, _ in above[P.key()]]
        rows.append(list(cgL.coords_of_factorization(acc)))
    return ClassMap(list(cgK.invariant_factors), list(cgL.invariant_factors), rows)


def norm_class_map(L: NumberField, K: NumberField, emb: Embedding, cgL: ClassGroup, cgK: ClassGroup) -> ClassMap:
    """Cl(L) -> Cl(K) induced by the relative norm, N(Q) = P^f(Q/P)."""
    _check_certified(cgK, cgL)
    if emb.K != K or emb.L != L:
        raise FieldMismatch("embedding does not match the fields")
    rows = []
    for fac in _generator_factorizations(cgL):
        acc = []
        for Q, e in fac:
            P = emb.prime_below(Q)
            acc.append((P, e * (Q.f // P.f)))
        rows.append(list(cgK.coords_of_factorization(acc)))
    return ClassMap(list(cgL.invariant_factors), list(cgK.invariant_factors), rows)
