"""Number fields K = Q[X]/(f): maximal order by round 2, embeddings, prime decomposition."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from sympy import factorint

from ..errors import InvalidDefiningPolynomial
from ..linalg import det_bareiss, hnf, hnf_mod, kernel_mod_p
from ..poly import (
    IntPoly,
    _mp_divmod,
    _mp_gcd,
    _mp_mul,
    _mp_trim,
    discriminant,
    factor_mod_p,
    is_irreducible_over_Q,
    real_root_count,
)

__all__ = ["NumberField", "PrimeIdealFactor", "build_field", "decompose_prime"]


# ---------------------------------------------------------------- orders


def _polymulmod(a, b, f):
    """Product of power-basis coefficient lists modulo the monic f (lists of ints/Fractions)."""
    n = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n):
                prod[k - n + i] -= c * f[i]
        prod[k] = 0
    return (prod + [0] * n)[:n]


class _Order:
    """Order with basis rows B (lower triangular, power basis) over denominator den."""

    def __init__(self, f, B, den):
        self.f = f
        self.n = len(f) - 1
        self.B = [list(r) for r in B]
        self.den = den
        self.table = self._mult_table()

    def to_coords(self, num, den):
        """Coordinates of (sum num_j theta^j)/den in this basis (Fractions or ints)."""
        n = self.n
        v = [Fraction(x) * self.den / den for x in num]
        c = [Fraction(0)] * n
        for i in range(n - 1, -1, -1):
            if v[i]:
                q = v[i] / self.B[i][i]
                c[i] = q
                row = self.B[i]
                for j in range(i + 1):
                    v[j] -= q * row[j]
        return c

    def _mult_table(self):
        n = self.n
        T = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                prod = _polymulmod(self.B[i], self.B[j], self.f)
                c = self.to_coords(prod, self.den * self.den)
                if any(x.denominator != 1 for x in c):
                    raise InvalidDefiningPolynomial("basis does not span an order")
                T[i][j] = T[j][i] = [int(x) for x in c]
        return T

    def mul(self, x, y, mod=None):
        n = self.n
        out = [0] * n
        T = self.table
        for i, a in enumerate(x):
            if a:
                Ti = T[i]
                for j, b in enumerate(y):
                    if b:
                        ab = a * b
                        t = Ti[j]
                        for k in range(n):
                            if t[k]:
                                out[k] += ab * t[k]
        if mod:
            out = [c % mod for c in out]
        return out


def _coords_in_hnf(H, v):
    """Integer c with c*H = v for lower-triangular H, or None if v is not in the lattice."""
    n = len(H)
    v = list(v)
    c = [0] * n
    for i in range(n - 1, -1, -1):
        if v[i]:
            q, r = divmod(v[i], H[i][i])
            if r:
                return None
            c[i] = q
            row = H[i]
            for j in range(i + 1):
                v[j] -= q * row[j]
    return c


def _hnf_reduce(H, v):
    """Canonical representative of v modulo the lattice of the lower-triangular H."""
    v = list(v)
    for i in range(len(H) - 1, -1, -1):
        q = v[i] // H[i][i]
        if q:
            row = H[i]
            for j in range(i + 1):
                v[j] -= q * row[j]
    return v


def _order_pow_mod(order, x, e, p):
    n = order.n
    result = [1] + [0] * (n - 1)
    base = [c % p for c in x]
    while e:
        if e & 1:
            result = order.mul(result, base, p)
        e >>= 1
        if e:
            base = order.mul(base, base, p)
    return result


def _radical(order, p):
    """HNF (order coordinates) of the p-radical of the order."""
    n = order.n
    e = 1
    q = p
    while q < n:
        q *= p
        e += 1
    imgs = []
    for i in range(n):
        x = [0] * n
        x[i] = 1
        imgs.append(_order_pow_mod(order, x, q, p))
    ker = kernel_mod_p(imgs, p)
    gens = [[p * int(i == j) for j in range(n)] for i in range(n)] + ker
    return hnf_mod(gens, n, p**n)


def _dedekind_is_maximal(f: IntPoly, p: int) -> bool:
    facs = factor_mod_p(f, p)
    g = [1]
    h = [1]
    for fac, m in facs:
        c = list(fac.coeffs)
        g = _mp_mul(g, c, p)
        for _ in range(m - 1):
            h = _mp_mul(h, c, p)
    gi = IntPoly(tuple(g))
    hi = IntPoly(tuple(h))
    F = gi * hi - f
    Fp = _mp_trim([(c // p) % p for c in F.coeffs])
    z = _mp_gcd(_mp_gcd(Fp, g, p), h, p)
    return len(z) <= 1


def _round2_step(order, p):
    """Return the enlarged order at p, or None if the order is p-maximal."""
    n = order.n
    I = _radical(order, p)
    rows = []
    for i in range(n):
        x = [0] * n
        x[i] = 1
        row = []
        for g in I:
            c = _coords_in_hnf(I, order.mul(x, g))
            row.extend(v % p for v in c)
        rows.append(row)
    ker = kernel_mod_p(rows, p)
    if not ker:
        return None
    gens = [[p * int(i == j) for j in range(n)] for i in range(n)] + ker
    U = hnf_mod(gens, n, p**n)
    # new basis (U B) / (p den) in power coordinates
    newB = [[sum(U[i][k] * order.B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    den = p * order.den
    H = hnf(newB, n)
    g = den
    for r in H:
        for x in r:
            g = math.gcd(g, x)
    H = [[x // g for x in r] for r in H]
    return _Order(order.f, H, den // g)


def _maximal_order(f: IntPoly, pdisc: int):
    n = f.degree
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    order = _Order(list(f.coeffs), ident, 1)
    for p, e in sorted(factorint(abs(pdisc)).items()):
        if e < 2:
            continue
        if _dedekind_is_maximal(f, p):
            continue
        while True:
            nxt = _round2_step(order, p)
            if nxt is None:
                break
            order = nxt
    return order


# ---------------------------------------------------------------- prime ideals


@dataclass(eq=False)
class PrimeIdealFactor:
    """A prime ideal above p with ramification index e and residue degree f.

    ``hnf`` is the lower-triangular normal form in integral-basis coordinates.
    ``two_elt`` is (p, beta) with beta in integral-basis coordinates when known.
    """

    p: int
    e: int
    f: int
    hnf: tuple
    two_elt: tuple | None = None
    index: int = 0
    # internal: x -> x*beta/p lowers v_P by one and keeps other valuations integral
    _val_elt: list | None = field(default=None, repr=False)
    # internal: residue map O -> F_p when f = 1
    _residue: list | None = field(default=None, repr=False)

    @property
    def norm(self) -> int:
        return self.p**self.f

    def contains(self, x) -> bool:
        return not any(_hnf_reduce(self.hnf, x))

    def key(self):
        return (self.p, self.index)

    def __repr__(self):
        return f"PrimeIdealFactor(p={self.p}, e={self.e}, f={self.f}, index={self.index})"


def _residue_map(H, p):
    """For a degree-one prime with lower-triangular HNF H: linear map O -> F_p."""
    n = len(H)
    piv = [i for i in range(n) if H[i][i] == p]
    assert len(piv) == 1
    k = piv[0]
    # omega_i reduces to -H[i][k] for i > k (rows with unit diagonal express omega_i)
    # compute via reduction of unit vectors
    out = []
    for i in range(n):
        x = [0] * n
        x[i] = 1
        r = _hnf_reduce(H, x)
        out.append(r[k] % p)
    return out


class NumberField:
    """A number field with its maximal order.

    Elements of O_K are integer vectors in the integral basis omega_0 = 1, ...,
    omega_{n-1}, where omega_i = (sum_j basis_num[i][j] theta^j) / basis_den.
    """

    def __init__(self, poly: IntPoly):
        if poly.degree < 1:
            raise InvalidDefiningPolynomial("degree must be at least 1")
        if not poly.is_monic():
            raise InvalidDefiningPolynomial(f"{poly} is not monic")
        if not is_irreducible_over_Q(poly):
            raise InvalidDefiningPolynomial(f"{poly} is reducible over Q")
        self.poly = poly
        self.n = n = poly.degree
        self.poly_disc = discriminant(poly)
        order = _maximal_order(poly, self.poly_disc) if n > 1 else _Order(list(poly.coeffs), [[1]], 1)
        self._order = order
        self.basis_num = tuple(tuple(r) for r in order.B)
        self.basis_den = order.den
        detB = 1
        for i in range(n):
            detB *= order.B[i][i]
        idx, r = divmod(order.den**n, detB)
        assert r == 0
        self.index = idx
        q, r = divmod(self.poly_disc, idx * idx)
        assert r == 0
        self.disc = q
        r1 = real_root_count(poly)
        self.signature = (r1, (n - r1) // 2)
        self.table = order.table
        self._primes = {}
        self._init_embeddings()
        self._theta = [int(x) for x in order.to_coords([0, 1] + [0] * (n - 2), 1)] if n > 1 else [int(-poly.coeffs[0])]

    # -- basic arithmetic -------------------------------------------------

    @property
    def degree(self) -> int:
        return self.n

    @property
    def defining_poly(self) -> IntPoly:
        return self.poly

    @property
    def field_disc(self) -> int:
        return self.disc

    @property
    def integral_basis(self):
        return [[Fraction(x, self.basis_den) for x in r] for r in self.basis_num]

    def one(self):
        return [1] + [0] * (self.n - 1)

    def theta(self):
        return list(self._theta)

    def mul(self, x, y, mod=None):
        return self._order.mul(x, y, mod)

    def mul_matrix(self, x):
        """Rows: x * omega_i in integral-basis coordinates."""
        n = self.n
        T = self.table
        rows = []
        for i in range(n):
            row = [0] * n
            Ti = T[i]
            for j, a in enumerate(x):
                if a:
                    t = Ti[j]
                    for k in range(n):
                        row[k] += a * t[k]
            rows.append(row)
        return rows

    def norm(self, x) -> int:
        return det_bareiss(self.mul_matrix(x))

    def trace(self, x) -> int:
        M = self.mul_matrix(x)
        return sum(M[i][i] for i in range(self.n))

    def pow(self, x, e: int):
        result = self.one()
        base = list(x)
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def from_power(self, coeffs):
        """Integral-basis coordinates (Fractions) of sum coeffs[j] theta^j."""
        c = list(coeffs) + [0] * (self.n - len(coeffs))
        if len(c) > self.n:
            c = _polymulmod(c, [1], list(self.poly.coeffs))
        return self._order.to_coords(c, 1)

    def to_power(self, x):
        """Power-basis coefficients (Fractions) of the element with basis coordinates x."""
        out = [Fraction(0)] * self.n
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(self.basis_num[i]):
                    out[j] += Fraction(a) * b
        return [c / self.basis_den for c in out]

    def is_integral_power(self, coeffs) -> bool:
        return all(Fraction(c).denominator == 1 for c in self.from_power(coeffs))

    # -- embeddings -------------------------------------------------------

    def _init_embeddings(self):
        n = self.n
        r1, r2 = self.signature
        if n == 1:
            roots = np.array([complex(-self.poly.coeffs[0])])
        else:
            roots = np.roots([float(c) for c in reversed(self.poly.coeffs)]).astype(complex)
            fc = [complex(c) for c in reversed(self.poly.coeffs)]
            dc = [complex(c) for c in reversed(self.poly.derivative().coeffs)]
            for _ in range(6):
                fv = np.polyval(fc, roots)
                dv = np.polyval(dc, roots)
                ok = dv != 0
                roots[ok] = roots[ok] - fv[ok] / dv[ok]
        order = np.argsort(np.abs(roots.imag))
        real = np.sort(roots[order[:r1]].real)
        cplx = roots[order[r1:]]
        cplx = cplx[cplx.imag > 0]
        cplx = cplx[np.argsort(cplx.real)]
        self.roots = np.concatenate([real.astype(complex), cplx])
        # conj[i][k] = sigma_k(omega_i) for the r1 + r2 embeddings
        V = np.vander(self.roots, n, increasing=True)  # (r1+r2, n)
        Bf = np.array([[float(x) for x in r] for r in self.basis_num]) / self.basis_den
        self.conj = Bf @ V.T  # (n, r1+r2)
        mk = np.zeros((n, n))
        mk[:, :r1] = self.conj[:, :r1].real
        s2 = math.sqrt(2.0)
        mk[:, r1::2] = s2 * self.conj[:, r1:].real
        mk[:, r1 + 1 :: 2] = s2 * self.conj[:, r1:].imag
        self.minkowski = mk
        self.weights = np.array([1.0] * r1 + [2.0] * r2)

    def embed(self, x):
        return np.asarray(x, dtype=float) @ self.conj

    def log_embedding(self, x):
        return np.log(np.abs(self.embed(x)))

    def float_norm(self, x) -> float:
        return float(np.prod(np.abs(self.embed(x)) ** self.weights))

    def t2(self, x) -> float:
        v = np.asarray(x, dtype=float) @ self.minkowski
        return float(v @ v)

    def minkowski_bound(self) -> float:
        n = self.n
        r2 = self.signature[1]
        return math.factorial(n) / n**n * (4 / math.pi) ** r2 * math.sqrt(abs(self.disc))

    def minkowski_bound_exact(self) -> int:
        """floor of the Minkowski bound, computed with a rational upper estimate of 4/pi."""
        n = self.n
        r2 = self.signature[1]
        c = Fraction(math.factorial(n), n**n) * Fraction(4 * 113, 355) ** r2
        # 355/113 > pi, so 4/(355/113) < 4/pi; correct upward with a generous factor
        c *= Fraction(1000001, 1000000) ** max(r2, 1)
        # floor(c * sqrt|D|) via integer square roots
        D = abs(self.disc)
        num, den = c.numerator, c.denominator
        # want largest m with m*den <= num*sqrt(D)  <=>  (m*den)^2 <= num^2 * D
        m = math.isqrt(num * num * D // (den * den))
        while ((m + 1) * den) ** 2 <= num * num * D:
            m += 1
        return m

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def __repr__(self):
        return f"NumberField({self.poly}, disc={self.disc}, signature={self.signature})"


def build_field(f: IntPoly) -> NumberField:
    return NumberField(f)


# ---------------------------------------------------------------- decomposition


def _elt_from_power_int(K, coeffs):
    c = K.from_power(coeffs)
    assert all(x.denominator == 1 for x in c)
    return [int(x) for x in c]


def _ideal_from_gens(K, gens, D):
    """HNF of the ideal generated (as an O-module) by the given elements."""
    rows = []
    for g in gens:
        rows.extend(K.mul_matrix(g))
    return hnf_mod(rows, K.n, D)


def _valuation_element(K, H, p):
    """beta in p P^{-1} minus p O, from the kernel of x -> x*h mod p over the HNF rows h."""
    n = K.n
    rows = []
    for i in range(n):
        x = [0] * n
        x[i] = 1
        row = []
        for h in H:
            row.extend(c % p for c in K.mul(x, h))
        rows.append(row)
    ker = kernel_mod_p(rows, p)
    return [int(c) for c in ker[0]]


def _p_valuation_int(a, p):
    if a == 0:
        return math.inf
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def valuation(K, P: PrimeIdealFactor, x) -> int:
    """v_P(x) for a nonzero integral element x (integral-basis coordinates)."""
    if not any(x):
        return math.inf
    if P._val_elt is None:
        P._val_elt = _valuation_element(K, P.hnf, P.p)
    p = P.p
    beta = P._val_elt
    v = 0
    # strip the rational content first: v_P(p) = e
    g = 0
    for c in x:
        g = math.gcd(g, c)
    k = _p_valuation_int(g, p) if P.e else 0
    if k:
        x = [c // p**k for c in x]
        v += k * P.e
    while True:
        y = K.mul(x, beta)
        if any(c % p for c in y):
            return v
        x = [c // p for c in y]
        v += 1


def _split_algebra(K, J, p):
    """Split the radical-type ideal J (product of distinct primes above p) into primes."""
    n = K.n
    cols = [i for i in range(n) if J[i][i] == p]
    dim = len(cols)
    # Frobenius minus identity on O/J
    rows = []
    for c in cols:
        x = [0] * n
        x[c] = 1
        y = _hnf_reduce(J, _order_pow_mod(K._order, x, p, p))
        y[c] -= 1
        y = _hnf_reduce(J, y)
        rows.append([y[k] % p for k in cols])
    ker = kernel_mod_p(rows, p)
    if len(ker) <= 1:
        return [J]
    # pick a kernel element that is not a scalar
    import random

    rng = random.Random(p * 7919 + dim)
    one = _hnf_reduce(J, K.one())
    while True:
        coeffs = [rng.randrange(p) for _ in ker]
        xr = [0] * n
        for a, v in zip(coeffs, ker):
            for t, c in enumerate(cols):
                xr[c] += a * v[t]
        x = [c % p for c in xr]
        # minimal polynomial over F_p of x in O/J
        powers = [one]
        cur = one
        dep = None
        for _ in range(len(ker) + 1):
            cur = _hnf_reduce(J, K.mul(cur, x))
            powers.append(cur)
            vecs = [[pw[k] % p for k in cols] for pw in powers]
            kk = kernel_mod_p(vecs, p)
            if kk:
                dep = kk[0]
                break
        deg = max(i for i, c in enumerate(dep) if c % p)
        if deg < 2:
            continue
        minpoly = IntPoly(tuple(dep[: deg + 1]))
        roots = [int(-g.coeffs[0]) % p for g, _ in factor_mod_p(minpoly, p)]
        parts = []
        for r in roots:
            xm = list(x)
            xm[0] -= r
            gens = [list(row) for row in J] + [xm]
            Jc = _ideal_from_gens(K, gens, p**n)
            parts.extend(_split_algebra(K, Jc, p))
        return parts


def decompose_prime(K: NumberField, p: int) -> list[PrimeIdealFactor]:
    """Prime ideals above p with (e, f), sorted by residue degree."""
    if p in K._primes:
        return K._primes[p]
    n = K.n
    out = []
    if n == 1:
        out.append(PrimeIdealFactor(p, 1, 1, ((p,),), (p, [p])))
    elif K.index % p:
        for g, e in factor_mod_p(K.poly, p):
            gel = _elt_from_power_int(K, list(g.coeffs))
            H = _ideal_from_gens(K, [[p] + [0] * (n - 1), gel], p**n)
            out.append(PrimeIdealFactor(p, e, g.degree, tuple(tuple(r) for r in H), (p, gel)))
    else:
        J = _radical(K._order, p)
        for P in _split_algebra(K, J, p):
            f = sum(1 for i in range(n) if P[i][i] == p)
            pf = PrimeIdealFactor(p, 0, f, tuple(tuple(r) for r in P))
            pf.e = valuation(K, pf, [p] + [0] * (n - 1))
            out.append(pf)
    out.sort(key=lambda P: (P.f, P.e, P.hnf))
    for i, P in enumerate(out):
        P.index = i
        if P.f == 1:
            P._residue = _residue_map([list(r) for r in P.hnf], p)
    assert sum(P.e * P.f for P in out) == n
    K._primes[p] = out
    return out
