"""Exact univariate polynomials over Z, Q and F_p.

Coefficient lists are stored in ascending degree order everywhere:
``IntPoly((1, 5, -1, 0, 0, 1))`` is ``1 + 5X - X^2 + X^5``.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd, isqrt

from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod

from .errors import DegreeTooSmall, LeadingCoefficientVanishes, ZeroRadicand

__all__ = [
    "IntPoly",
    "ModPPoly",
    "resultant",
    "discriminant",
    "factor_mod_p",
    "factor_over_Z",
    "is_irreducible_over_Q",
    "squarefree_kernel",
    "real_root_count",
]


def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


@dataclass(frozen=True)
class IntPoly:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(_trim([int(x) for x in self.coeffs])))

    @classmethod
    def from_text(cls, text: str) -> IntPoly:
        """Parse comma-separated ascending coefficients, e.g. ``"-19,0,0,1"``."""
        parts = [t.strip() for t in text.replace(" ", "").split(",")]
        if not text.strip() or any(not t for t in parts):
            raise ValueError(f"bad polynomial text: {text!r}")
        return cls(tuple(int(t) for t in parts))

    @classmethod
    def x(cls) -> IntPoly:
        return cls((0, 1))

    def to_text(self) -> str:
        return ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lc == 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: IntPoly) -> IntPoly:
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return IntPoly(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)))

    def __neg__(self) -> IntPoly:
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: IntPoly) -> IntPoly:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly(tuple(c * other for c in self.coeffs))
        return IntPoly(tuple(_zmul(list(self.coeffs), list(other.coeffs))))

    __rmul__ = __mul__

    def derivative(self) -> IntPoly:
        return IntPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def content(self) -> int:
        return reduce(gcd, self.coeffs, 0)

    def primitive_part(self) -> IntPoly:
        c = self.content()
        if c == 0:
            return self
        if self.lc < 0:
            c = -c
        return IntPoly(tuple(x // c for x in self.coeffs))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = "X" if i == 1 else f"X^{i}"
                body = mono if a == 1 else f"{a}*{mono}"
            terms.append((sign, body))
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s


# ---------------------------------------------------------------- Z[x] / Q[x]


def _zmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _qdivmod(a, b):
    """Division with remainder over Q (lists of Fractions or ints)."""
    a = [Fraction(x) for x in a]
    _trim(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    q = [Fraction(0)] * (len(a) - db)
    lb = Fraction(b[-1])
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        c = a[-1] / lb
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] -= c * y
        a.pop()
        _trim(a)
    return _trim(q), a


def _qgcd(a, b):
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    _trim(a)
    _trim(b)
    while b:
        a, b = b, _qdivmod(a, b)[1]
    if not a:
        return []
    lc = a[-1]
    return [x / lc for x in a]


def _to_primitive_int(q):
    """Scale a rational coefficient list to a primitive integer list with positive lc."""
    if not q:
        return []
    den = reduce(lambda x, y: x * y // gcd(x, y), (Fraction(c).denominator for c in q), 1)
    ints = [int(Fraction(c) * den) for c in q]
    g = reduce(gcd, ints, 0)
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


def _exact_zdiv(a, b):
    """Return a / b if b divides a in Z[x], else None."""
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return None
    q = [0] * (len(a) - db)
    lb = b[-1]
    while len(a) - 1 >= db:
        k = len(a) - 1 - db
        c, r = divmod(a[-1], lb)
        if r:
            return None
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] -= c * y
        if a[-1] != 0:
            return None
        a.pop()
        _trim(a)
        if not a:
            break
    if any(a):
        return None
    return q


def _det_bareiss(m):
    m = [list(r) for r in m]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = m[k][k]
        for i in range(k + 1, n):
            aik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * m[n - 1][n - 1] if n else 1


def resultant(f: IntPoly, g: IntPoly) -> int:
    """Resultant via the determinant of the Sylvester matrix."""
    m, n = f.degree, g.degree
    if m < 0 or n < 0:
        return 0
    if m == 0:
        return f.lc**n
    if n == 0:
        return g.lc**m
    size = m + n
    fd = list(reversed(f.coeffs))
    gd = list(reversed(g.coeffs))
    rows = []
    for i in range(n):
        rows.append([0] * i + fd + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gd + [0] * (size - n - 1 - i))
    return _det_bareiss(rows)


def discriminant(f: IntPoly) -> int:
    n = f.degree
    if n < 1:
        raise DegreeTooSmall(f"discriminant needs degree >= 1, got {n}")
    if n == 1:
        return 1
    r = resultant(f, f.derivative())
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    q, rem = divmod(sign * r, f.lc)
    assert rem == 0
    return q


def real_root_count(f: IntPoly) -> int:
    """Number of distinct real roots, by a Sturm sequence over Q."""
    if f.degree < 1:
        return 0
    seq = [[Fraction(c) for c in f.coeffs], [Fraction(c) for c in f.derivative().coeffs]]
    while seq[-1] and len(seq[-1]) > 1:
        r = _qdivmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])

    def changes(signs):
        signs = [s for s in signs if s != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    at_pos = [1 if p[-1] > 0 else -1 for p in seq if p]
    at_neg = [(1 if p[-1] > 0 else -1) * (-1) ** (len(p) - 1) for p in seq if p]
    return changes(at_neg) - changes(at_pos)


def squarefree_kernel(n: int) -> int:
    """Signed squarefree d with Q(sqrt(n)) = Q(sqrt(d))."""
    if n == 0:
        raise ZeroRadicand("radicand is zero")
    d = -1 if n < 0 else 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            d *= p
    return d


# ---------------------------------------------------------------- F_p[x]


def _mp_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _mp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _mp_trim([c % p for c in out])


def _mp_sub(a, b, p):
    n = max(len(a), len(b))
    return _mp_trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _mp_divmod(a, b, p):
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    inv = pow(b[-1], -1, p)
    q = [0] * (len(a) - db)
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        c = a[-1] * inv % p
        q[k] = c
        if c:
            for i, y in enumerate(b):
                a[i + k] = (a[i + k] - c * y) % p
        a.pop()
        _mp_trim(a)
    return _mp_trim(q), a


def _mp_rem(a, b, p):
    return _mp_divmod(a, b, p)[1]


def _mp_monic(a, p):
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _mp_gcd(a, b, p):
    while b:
        a, b = b, _mp_rem(a, b, p)
    return _mp_monic(a, p)


def _mp_xgcd(a, b, p):
    """Return (g, s, t) with s*a + t*b = g monic."""
    r0, r1 = list(a), list(b)
    s0, s1, t0, t1 = [1], [], [], [1]
    while r1:
        q, r = _mp_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _mp_sub(s0, _mp_mul(q, s1, p), p)
        t0, t1 = t1, _mp_sub(t0, _mp_mul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    return [c * inv % p for c in r0], [c * inv % p for c in s0], [c * inv % p for c in t0]


def _mp_powmod(base, e, mod, p):
    result = [1]
    base = _mp_rem(base, mod, p)
    while e:
        if e & 1:
            result = _mp_rem(_mp_mul(result, base, p), mod, p)
        e >>= 1
        if e:
            base = _mp_rem(_mp_mul(base, base, p), mod, p)
    return result


def _mp_deriv(a, p):
    return _mp_trim([(i * c) % p for i, c in enumerate(a)][1:])


def _mp_sqf(f, p):
    """Squarefree decomposition of a monic f over F_p: list of (factor, multiplicity)."""
    out = []
    if len(f) <= 1:
        return out
    d = _mp_deriv(f, p)
    if d:
        c = _mp_gcd(f, d, p)
        w = _mp_divmod(f, c, p)[0]
        i = 1
        while len(w) > 1:
            y = _mp_gcd(w, c, p)
            z = _mp_divmod(w, y, p)[0]
            if len(z) > 1:
                out.append((z, i))
            i += 1
            w = y
            c = _mp_divmod(c, y, p)[0]
        if len(c) > 1:
            root = [c[k] for k in range(0, len(c), p)]
            out.extend((h, j * p) for h, j in _mp_sqf(root, p))
    else:
        root = [f[k] for k in range(0, len(f), p)]
        out.extend((h, j * p) for h, j in _mp_sqf(root, p))
    return out


def _mp_ddf(f, p):
    out = []
    h = [0, 1]
    x = [0, 1]
    i = 1
    g_rest = f
    while len(g_rest) - 1 >= 2 * i:
        h = _mp_powmod(h, p, g_rest, p)
        g = _mp_gcd(g_rest, _mp_sub(h, x, p), p)
        if len(g) > 1:
            out.append((g, i))
            g_rest = _mp_divmod(g_rest, g, p)[0]
            h = _mp_rem(h, g_rest, p)
        i += 1
    if len(g_rest) > 1:
        out.append((g_rest, len(g_rest) - 1))
    return out


def _mp_edf(g, d, p, rng):
    n = len(g) - 1
    if n == d:
        return [g]
    while True:
        a = _mp_trim([rng.randrange(p) for _ in range(n)])
        if len(a) < 2:
            continue
        if p == 2:
            b = list(a)
            t = a
            for _ in range(d - 1):
                t = _mp_rem(_mp_mul(t, t, p), g, p)
                b = _mp_trim([(x + y) % 2 for x, y in zip(b + [0] * (len(t) - len(b)), t + [0] * (len(b) - len(t)))])
        else:
            b = _mp_sub(_mp_powmod(a, (p**d - 1) // 2, g, p), [1], p)
        c = _mp_gcd(g, b, p)
        if 1 < len(c) < len(g):
            return _mp_edf(c, d, p, rng) + _mp_edf(_mp_divmod(g, c, p)[0], d, p, rng)


def _seeded_rng(coeffs, p):
    digest = hashlib.sha256(repr((tuple(coeffs), p)).encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _factor_monic_mod_p(f, p):
    rng = _seeded_rng(f, p)
    out = []
    for sq, mult in _mp_sqf(f, p):
        for g, d in _mp_ddf(sq, p):
            for h in _mp_edf(g, d, p, rng):
                out.append((h, mult))
    out.sort(key=lambda t: (len(t[0]), t[0][::-1]))
    return out


def _factor_quadratic_mod_p(f, p):
    """Fast path for monic X^2 + bX + c over F_p."""
    c, b = f[0], f[1]
    if p == 2:
        roots = [x for x in (0, 1) if (x * x + b * x + c) % 2 == 0]
    else:
        disc = (b * b - 4 * c) % p
        inv2 = (p + 1) // 2
        if disc == 0:
            return [([(b * inv2) % p, 1], 2)]
        if pow(disc, (p - 1) // 2, p) != 1:
            return [(f, 1)]
        r = sqrt_mod(disc, p)
        roots = sorted({((-b + r) * inv2) % p, ((-b - r) * inv2) % p})
    if not roots:
        return [(f, 1)]
    if len(roots) == 1:
        return [([(-roots[0]) % p, 1], 2)]
    return [(g, 1) for g in sorted(([(-x) % p, 1] for x in roots), key=lambda g: g[::-1])]


@dataclass(frozen=True)
class ModPPoly:
    coeffs: tuple[int, ...]
    p: int

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(_mp_trim([int(c) % self.p for c in self.coeffs])))

    @classmethod
    def from_int(cls, f: IntPoly, p: int) -> ModPPoly:
        return cls(f.coeffs, p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, other: ModPPoly) -> ModPPoly:
        return ModPPoly(tuple(_mp_mul(list(self.coeffs), list(other.coeffs), self.p)), self.p)

    def __pow__(self, e: int) -> ModPPoly:
        out = ModPPoly((1,), self.p)
        for _ in range(e):
            out = out * self
        return out

    def lift(self) -> IntPoly:
        return IntPoly(self.coeffs)

    def __str__(self) -> str:
        return f"({IntPoly(self.coeffs)}) mod {self.p}"


def factor_mod_p(f: IntPoly, p: int) -> list[tuple[ModPPoly, int]]:
    """Monic irreducible factors of ``f`` over F_p with multiplicities."""
    if f.lc % p == 0:
        raise LeadingCoefficientVanishes(f"{p} divides the leading coefficient of {f}")
    mono = _mp_monic(_mp_trim([c % p for c in f.coeffs]), p)
    if len(mono) == 3:
        return [(ModPPoly(tuple(g), p), m) for g, m in _factor_quadratic_mod_p(mono, p)]
    return [(ModPPoly(tuple(g), p), m) for g, m in _factor_monic_mod_p(mono, p)]


# ---------------------------------------------------------------- Hensel lifting


def _zm_trim_mod(a, m):
    return _trim([c % m for c in a])


def _zm_divmod_monic(a, b, m):
    a = [c % m for c in a]
    _trim(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    q = [0] * (len(a) - db)
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        c = a[-1]
        q[k] = c
        if c:
            for i, y in enumerate(b):
                a[i + k] = (a[i + k] - c * y) % m
        a.pop()
        _trim(a)
    return _trim(q), a


def _zm_mul(a, b, m):
    return _zm_trim_mod(_zmul(a, b), m)


def _zm_add(a, b, m):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % m for i in range(n)])


def _zm_sub(a, b, m):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % m for i in range(n)])


def _hensel_step(f, g, h, s, t, m):
    """One quadratic Hensel step from modulus m to m^2 (h monic)."""
    m2 = m * m
    e = _zm_sub(f, _zm_mul(g, h, m2), m2)
    q, r = _zm_divmod_monic(_zm_mul(s, e, m2), h, m2)
    g2 = _zm_add(_zm_add(g, _zm_mul(t, e, m2), m2), _zm_mul(q, g, m2), m2)
    h2 = _zm_add(h, r, m2)
    b = _zm_sub(_zm_add(_zm_mul(s, g2, m2), _zm_mul(t, h2, m2), m2), [1], m2)
    c, d = _zm_divmod_monic(_zm_mul(s, b, m2), h2, m2)
    s2 = _zm_sub(s, d, m2)
    t2 = _zm_sub(_zm_sub(t, _zm_mul(t, b, m2), m2), _zm_mul(c, g2, m2), m2)
    return g2, h2, s2, t2


def _hensel_lift(f, factors, p, k):
    """Lift monic factors of f mod p to monic factors mod p^k."""
    mod = p**k
    lc = f[-1]
    if len(factors) == 1:
        inv = pow(lc, -1, mod)
        return [_zm_trim_mod([c * inv for c in f], mod)]
    half = len(factors) // 2
    a = reduce(lambda x, y: _mp_mul(x, y, p), factors[:half], [1])
    b = reduce(lambda x, y: _mp_mul(x, y, p), factors[half:], [1])
    g = _zm_trim_mod([c * lc for c in a], p)
    h = list(b)
    _, s, t = _mp_xgcd(g, h, p)
    m = p
    while m < mod:
        g, h, s, t = _hensel_step(f, g, h, s, t, m)
        m = m * m
    g = _zm_trim_mod(g, mod)
    h = _zm_trim_mod(h, mod)
    inv = pow(lc, -1, mod)
    a_lift = _zm_trim_mod([c * inv for c in g], mod)
    return _hensel_lift(a_lift, factors[:half], p, k) + _hensel_lift(h, factors[half:], p, k)


def _symmetric(c, m):
    return [x - m if x > m // 2 else x for x in c]


def _good_primes(f, count):
    """Primes p not dividing lc(f) with f squarefree mod p."""
    out = []
    p = 2
    while len(out) < count:
        if isprime(p) and f[-1] % p:
            fp = _mp_trim([c % p for c in f])
            if len(_mp_gcd(fp, _mp_deriv(fp, p), p)) == 1:
                out.append(p)
        p += 1
    return out


def _degree_sums(degs):
    sums = {0}
    for d in degs:
        sums |= {s + d for s in sums}
    return sums


def _factor_squarefree_primitive(f):
    """Zassenhaus factorisation of a primitive squarefree f (degree >= 1, lc > 0)."""
    n = len(f) - 1
    if n <= 1:
        return [f]
    primes = _good_primes(f, 5)
    best = None
    possible = None
    for p in primes:
        fp = _mp_monic(_mp_trim([c % p for c in f]), p)
        facs = [g for g, _ in _factor_monic_mod_p(fp, p)]
        sums = _degree_sums([len(g) - 1 for g in facs])
        possible = sums if possible is None else possible & sums
        if best is None or len(facs) < len(best[1]):
            best = (p, facs)
    if possible <= {0, n}:
        return [f]
    p, facs = best
    lc = f[-1]
    norm2 = isqrt(sum(c * c for c in f)) + 1
    bound = 2 * (2**n) * norm2 * abs(lc)
    k = 1
    while p**k <= bound:
        k += 1
    mod = p**k
    lifted = _hensel_lift(list(f), facs, p, k)
    result = []
    remaining = list(f)
    active = list(range(len(lifted)))
    size = 1
    while 2 * size <= len(active):
        found = False
        for subset in combinations(active, size):
            lc_r = remaining[-1]
            prod = [lc_r % mod]
            for i in subset:
                prod = _zm_mul(prod, lifted[i], mod)
            cand = _symmetric(prod, mod)
            cand = _to_primitive_int(cand)
            q = _exact_zdiv(remaining, cand)
            if q is not None:
                result.append(cand)
                remaining = q
                active = [i for i in active if i not in subset]
                found = True
                break
        if not found:
            size += 1
    result.append(_to_primitive_int(remaining))
    return result


def _squarefree_decomposition_Z(f):
    """Yun over Q, returning primitive integer factors with multiplicities."""
    out = []
    a = [Fraction(c) for c in f]
    b = _qdivmod([i * c for i, c in enumerate(a)][1:], [1])[0]
    c = _qgcd(a, b)
    w = _qdivmod(a, c)[0] if c else a
    y = _qdivmod(b, c)[0] if c else b
    i = 1
    while len(w) > 1:
        dw = [k * x for k, x in enumerate(w)][1:]
        z = _qdivmod(y, [1])[0]
        z = [u - v for u, v in zip(z + [0] * (len(dw) - len(z)), dw + [0] * (len(z) - len(dw)))]
        _trim(z)
        g = _qgcd(w, z) if z else _qgcd(w, [0])
        if not g:
            g = [Fraction(1)]
        if len(g) > 1:
            out.append((_to_primitive_int(g), i))
        w = _qdivmod(w, g)[0]
        y = _qdivmod(z, g)[0] if z else []
        i += 1
    return out


def factor_over_Z(f: IntPoly) -> list[tuple[IntPoly, int]]:
    """Irreducible factors of the primitive part of ``f`` with multiplicities."""
    if f.degree < 1:
        raise DegreeTooSmall("factorisation needs degree >= 1")
    g = f.primitive_part()
    out = []
    for sq, mult in _squarefree_decomposition_Z(list(g.coeffs)):
        for fac in _factor_squarefree_primitive(sq):
            out.append((IntPoly(tuple(fac)), mult))
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return out


def is_irreducible_over_Q(f: IntPoly) -> bool:
    if f.degree < 1:
        raise DegreeTooSmall("irreducibility needs degree >= 1")
    if f.degree == 1:
        return True
    if f.degree == 2:
        d = discriminant(f)
        return d < 0 or isqrt(d) ** 2 != d
    facs = factor_over_Z(f)
    return len(facs) == 1 and facs[0][1] == 1
