"""Quadratic fields through binary quadratic forms.

This engine shares no code with ``numfield``: class groups come from reduced
forms and composition, units from continued fractions.  It serves both as a
fast path and as an independent oracle for the ideal-theoretic engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from sympy import divisors, factorint

from .errors import InternalInconsistency, NotSquarefree
from .poly import IntPoly

__all__ = [
    "QuadField",
    "FormClassGroup",
    "QuadPolyaSummary",
    "quad_field",
    "quad_class_group",
    "fundamental_unit",
    "quad_polya_group",
    "quadratic_poly",
    "fundamental_discriminant",
]


def _check_d(d: int):
    if d in (0, 1):
        raise NotSquarefree(f"d = {d} does not define a quadratic field")
    for p, e in factorint(abs(d)).items():
        if e > 1:
            raise NotSquarefree(f"{d} is divisible by {p}^2")


def fundamental_discriminant(d: int) -> int:
    return d if d % 4 == 1 else 4 * d


def quadratic_poly(d: int) -> IntPoly:
    """Index-one defining polynomial: X^2 - X + (1-d)/4 or X^2 - d."""
    if d % 4 == 1:
        return IntPoly(((1 - d) // 4, -1, 1))
    return IntPoly((-d, 0, 1))


# ---------------------------------------------------------------- units


def fundamental_unit(d: int):
    """Smallest unit > 1 of Q(sqrt d) as (x, y, denom, norm): (x + y sqrt d)/denom."""
    _check_d(d)
    if d < 0:
        raise ValueError("imaginary quadratic fields have no fundamental unit")
    s = math.isqrt(d)
    if d % 4 == 1:
        P, Q = 1, 2
    else:
        P, Q = 0, 1
    p2, p1 = 0, 1
    q2, q1 = 1, 0
    while True:
        a = (P + s) // Q
        p2, p1 = p1, a * p1 + p2
        q2, q1 = q1, a * q1 + q2
        if d % 4 == 1:
            # p - q*omega' with omega' = (1 - sqrt d)/2
            N = p1 * p1 - p1 * q1 + q1 * q1 * (1 - d) // 4
            if N in (1, -1):
                x, y, z = 2 * p1 - q1, q1, 2
                if x % 2 == 0 and y % 2 == 0:
                    x, y, z = x // 2, y // 2, 1
                return x, y, z, N
        else:
            N = p1 * p1 - d * q1 * q1
            if N in (1, -1):
                return p1, q1, 1, N
        P = a * Q - P
        Q = (d - P * P) // Q


@dataclass
class QuadField:
    d: int
    D: int
    ramified_primes: list
    s_count: int
    fundamental_unit: tuple | None
    unit_norm: int | None
    torsion_order: int


def quad_field(d: int) -> QuadField:
    _check_d(d)
    D = fundamental_discriminant(d)
    ram = sorted(factorint(abs(D)))
    if d > 0:
        x, y, z, N = fundamental_unit(d)
        fu, un = (x, y, z), N
    else:
        fu, un = None, None
    tors = 4 if d == -1 else 6 if d == -3 else 2
    return QuadField(d, D, ram, len(ram), fu, un, tors)


# ---------------------------------------------------------------- forms


def _normalize_imag(a, b, c):
    # bring b into (-a, a]
    if -a < b <= a:
        return a, b, c
    r = (a - b) // (2 * a)
    b2 = b + 2 * r * a
    c2 = a * r * r + b * r + c
    return a, b2, c2


def _reduce_imag(a, b, c):
    a, b, c = _normalize_imag(a, b, c)
    while a > c:
        a, b, c = _normalize_imag(c, -b, a)
    if a == c and b < 0:
        b = -b
    return a, b, c


def _compose(f1, f2, D):
    """Gauss composition (Cohen Algorithm 5.4.7), unreduced."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    if abs(a1) > abs(a2):
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1 = 0
        d = a1
    else:
        d, u, _v = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - D) // (4 * a3)
    return a3, b3, c3


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


class _RealForms:
    def __init__(self, D):
        self.D = D
        self.s = math.isqrt(D)

    def r_val(self, b, c):
        """The r = b mod 2|c| used by the reduction operator rho."""
        m = 2 * abs(c)
        if abs(c) > self.s:
            # -|c| < r <= |c|
            r = b % m
            if r > abs(c):
                r -= m
            return r
        # sqrt D - 2|c| < r < sqrt D, i.e. r in [s - 2|c| + 1, s]
        lo = self.s - m + 1
        return lo + (b - lo) % m

    def rho(self, f):
        a, b, c = f
        r = self.r_val(-b, c)
        return c, r, (r * r - self.D) // (4 * c)

    def is_reduced(self, f):
        a, b, c = f
        s = self.s
        # 0 < b < sqrt D and sqrt D - b < 2|a| < sqrt D + b
        if not (0 < b <= s):
            return False
        lo_ok = (2 * abs(a) + b > s) if True else False
        hi_ok = 2 * abs(a) - b <= s
        return lo_ok and hi_ok

    def reduce(self, f):
        for _ in range(10000):
            if self.is_reduced(f):
                return f
            f = self.rho(f)
        raise InternalInconsistency("form reduction did not terminate")


@dataclass
class FormClassGroup:
    D: int
    reduced_forms: list
    h: int
    invariant_factors: list
    narrow_h: int
    classes: list = field(default_factory=list, repr=False)
    _index: dict = field(default_factory=dict, repr=False)
    _wide: list = field(default_factory=list, repr=False)

    def class_of(self, form) -> int:
        """Wide class index of a primitive form of discriminant D."""
        a, b, c = form
        if self.D < 0:
            if a < 0:
                a, b, c = -a, b, -c
            f = _reduce_imag(a, b, c)
        else:
            f = _RealForms(self.D).reduce((a, b, c))
        return self._wide[self._index[f]]

    def compose(self, f1, f2):
        return _compose(f1, f2, self.D)

    def representative(self, k: int):
        return self.classes[k]


def _enumerate_imag(D):
    forms = []
    amax = math.isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            forms.append((a, b, c))
    return forms


def _enumerate_real(D):
    rf = _RealForms(D)
    s = rf.s
    forms = []
    for b in range(1, s + 1):
        if (b - D) % 2:
            continue
        ac = (b * b - D) // 4
        for a0 in divisors(-ac):
            for a in (a0, -a0):
                c = ac // a
                f = (a, b, c)
                if rf.is_reduced(f) and math.gcd(math.gcd(a, b), c) == 1:
                    forms.append(f)
    return forms


def _abelian_invariants(elements, mul, identity, h):
    """Invariant factors of a finite abelian group given by a multiplication callback."""
    parts = {}
    for q, e in factorint(h).items():
        # x -> x^q map
        def power(x, k):
            result = identity
            base = x
            while k:
                if k & 1:
                    result = mul(result, base)
                k >>= 1
                if k:
                    base = mul(base, base)
            return result

        qmap = {x: power(x, q) for x in elements}
        sizes = [1]
        cur = {x: x for x in elements}
        j = 0
        while sizes[-1] < q**e:
            j += 1
            cur = {x: qmap[y] for x, y in cur.items()}
            sizes.append(sum(1 for x in elements if cur[x] == identity))
        ranks = []
        for k in range(1, len(sizes)):
            ranks.append(round(math.log(sizes[k] // sizes[k - 1], q)))
        # ranks[k-1] = number of cyclic factors of order >= q^k
        exps = []
        for k in range(len(ranks)):
            nxt = ranks[k + 1] if k + 1 < len(ranks) else 0
            exps.extend([k + 1] * (ranks[k] - nxt))
        parts[q] = sorted(exps, reverse=True)
    r = max((len(v) for v in parts.values()), default=0)
    inv = []
    for i in range(r):
        d = 1
        for q, exps in parts.items():
            if i < len(exps):
                d *= q ** exps[i]
        inv.append(d)
    return sorted(inv)


def quad_class_group(d: int) -> FormClassGroup:
    """Wide class group of Q(sqrt d) by reduced binary quadratic forms."""
    _check_d(d)
    D = fundamental_discriminant(d)
    if D < 0:
        forms = _enumerate_imag(D)
        index = {f: i for i, f in enumerate(forms)}
        wide = list(range(len(forms)))
        classes = list(forms)

        def red(f):
            return _reduce_imag(*f)

        ident = _reduce_imag(1, D % 2, (D % 2 - D) // 4)
        narrow_h = len(forms)
    else:
        rf = _RealForms(D)
        forms = _enumerate_real(D)
        fset = set(forms)
        cyc = {}
        reps = []
        for f in forms:
            if f in cyc:
                continue
            k = len(reps)
            reps.append(f)
            g = f
            while g not in cyc:
                cyc[g] = k
                g = rf.rho(g)
                assert g in fset
        narrow_h = len(reps)
        # wide classes: identify x with x*J, J the class of the negative principal form
        delta = D % 2
        J = rf.reduce((-1, delta, (D - delta * delta) // 4))
        one = rf.reduce((1, delta, (delta * delta - D) // 4))
        jc = cyc[J]
        wide_of = {}
        classes = []
        for k, f in enumerate(reps):
            if k in wide_of:
                continue
            w = len(classes)
            classes.append(f)
            wide_of[k] = w
            other = cyc[rf.reduce(_compose(f, J, D))]
            wide_of.setdefault(other, w)
        index = cyc
        wide = [wide_of[k] for k in range(narrow_h)]

        def red(f):
            return rf.reduce(f)

        ident = one
        del jc
    h = len(set(wide))
    fcg = FormClassGroup(D, forms, h, [], narrow_h, classes, index, wide)

    def mul(x, y):
        return fcg.class_of(_compose(classes[x], classes[y], D))

    identity = fcg.class_of(ident)
    fcg.invariant_factors = _abelian_invariants(list(range(h)), mul, identity, h)
    return fcg


# ---------------------------------------------------------------- Polya group


def prime_form(D: int, p: int):
    """The form (p, b, c) attached to a prime p dividing the discriminant."""
    if p == 2:
        b = 0 if D % 8 == 0 else 2
    else:
        b = p if D % 2 else 0
    c = (b * b - D) // (4 * p)
    assert b * b - 4 * p * c == D
    return p, b, c


@dataclass
class QuadPolyaSummary:
    d: int
    D: int
    s: int
    unit_norm: int | None
    order: int
    formula_order: int
    invariant_factors: list
    generators: list
    class_number: int

    @property
    def is_polya(self) -> bool:
        return self.order == 1


def quad_polya_group(d: int, fcg: FormClassGroup | None = None) -> QuadPolyaSummary:
    """Polya group of Q(sqrt d): Hilbert's formula and the explicit ramified-class subgroup."""
    qf = quad_field(d)
    D = qf.D
    s = qf.s_count
    if d > 0 and qf.unit_norm == 1:
        formula = 2 ** (s - 2)
    else:
        formula = 2 ** (s - 1)
    fcg = fcg or quad_class_group(d)
    gens = []
    for p in qf.ramified_primes:
        f = prime_form(D, p)
        gens.append((p, f, fcg.class_of(f)))
    identity = fcg.class_of((1, D % 2, (D % 2 - D) // 4))
    sub = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for _, _, g in gens:
                y = fcg.class_of(_compose(fcg.classes[x], fcg.classes[g], D))
                if y not in sub:
                    sub.add(y)
                    nxt.append(y)
        frontier = nxt
    order = len(sub)
    if order != formula:
        raise InternalInconsistency(f"d={d}: explicit Polya subgroup has order {order}, formula gives {formula}")
    inv = [2] * (order.bit_length() - 1)
    return QuadPolyaSummary(d, D, s, qf.unit_norm, order, formula, inv, [(p, f) for p, f, _ in gens], fcg.h)
