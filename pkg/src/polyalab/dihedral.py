"""Dihedral D_l extensions of Q: construction, Galois evidence and Polya certification.

Throughout, K is a degree-l field given by a polynomial f, L its Galois
closure with group D_l, and E the unique quadratic subfield of L.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import factorint, integer_nthroot, isprime, primerange

from .errors import (
    ContradictsProposition,
    NotDihedral,
    PreconditionFailed,
    RelationSearchIncomplete,
)
from .numfield.classgroup import RelationEffort, class_group
from .numfield.field import NumberField, decompose_prime
from .poly import IntPoly, discriminant, factor_mod_p, is_irreducible_over_Q, squarefree_kernel
from .quadratic import QuadField, quad_field, quad_polya_group

__all__ = [
    "brumer_quintic",
    "lavallee_quintic",
    "lavallee_disc_root",
    "GaloisEvidence",
    "DihedralInstance",
    "make_instance",
    "brumer_instance",
    "lavallee_instance",
    "RamifiedPrime",
    "classify_ramified_prime",
    "PolyaCertificate",
    "certify_dihedral",
    "lavallee_sweep",
    "divisibility_audit",
    "cubic_closure",
    "cubic_consistency",
    "POLYA",
    "NOT_POLYA",
    "UNDECIDED",
    "SKIPPED",
]

POLYA = "POLYA"
NOT_POLYA = "NOT_POLYA"
UNDECIDED = "UNDECIDED"
SKIPPED = "SKIPPED"

DEFAULT_SAMPLES = 200


# ---------------------------------------------------------------- families


def brumer_quintic(s: int, t: int) -> tuple[IntPoly, int]:
    """Brumer's quintic f(s, t, X) and the (unreduced) radicand of its quadratic subfield."""
    f = IntPoly((t, s, t * t - t - 2 * s - 1, s - t + 3, t - 3, 1))
    r = -(
        4 * t**5
        - 4 * t**4
        - 24 * s * t**3
        - 40 * t**3
        - s * s * t * t
        + 34 * s * t * t
        + 91 * t * t
        + 30 * s * s * t
        + 14 * s * t
        - 4 * t
        - s * s
        + 4 * s**3
    )
    return f, r


def lavallee_disc_root(s: int) -> int:
    return 4 * s**3 + 28 * s**2 + 24 * s + 47


def lavallee_quintic(s: int) -> tuple[IntPoly, int, int]:
    """(f_s, D(s), -D(s)) with disc(f_s) = D(s)^2."""
    f = IntPoly((1, s, -(2 * s + 1), s + 2, -2, 1))
    D = lavallee_disc_root(s)
    return f, D, -D


# ---------------------------------------------------------------- Galois evidence


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def dihedral_patterns(l: int) -> set:
    """Cycle types of D_l acting on l points."""
    return {(1,) * l, (1,) + (2,) * ((l - 1) // 2), (l,)}


@dataclass
class GaloisEvidence:
    method: str
    primes_sampled: int
    patterns: dict
    parity_ok: bool
    ok: bool

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "primes_sampled": self.primes_sampled,
            "patterns": {"+".join(map(str, k)): v for k, v in sorted(self.patterns.items())},
            "parity_ok": self.parity_ok,
            "ok": self.ok,
        }


def sample_cycle_types(f: IntPoly, count: int = DEFAULT_SAMPLES) -> dict:
    """Degree patterns of f mod the first ``count`` primes not dividing disc(f)."""
    disc = discriminant(f)
    out = {}
    p = 1
    seen = 0
    while seen < count:
        p += 1
        if not isprime(p) or disc % p == 0 or f.lc % p == 0:
            continue
        seen += 1
        degs = []
        for g, m in factor_mod_p(f, p):
            degs += [g.degree] * m
        key = tuple(sorted(degs))
        out[key] = out.get(key, 0) + 1
    return out


# ---------------------------------------------------------------- instances


@dataclass
class DihedralInstance:
    l: int
    poly: IntPoly
    d_E: int
    radicand: int | None
    evidence: GaloisEvidence
    source: str = ""
    lavallee_s: int | None = None
    _K: NumberField | None = field(default=None, repr=False)
    _conductor: int | None = field(default=None, repr=False)

    @property
    def K(self) -> NumberField:
        if self._K is None:
            self._K = NumberField(self.poly)
        return self._K

    @property
    def E(self) -> QuadField:
        return quad_field(self.d_E)

    @property
    def D_E(self) -> int:
        return self.d_E if self.d_E % 4 == 1 else 4 * self.d_E

    @property
    def is_real(self) -> bool:
        return self.d_E > 0

    @property
    def conductor(self) -> int:
        """f with D_K = D_E^((l-1)/2) f^(l-1); checked against the totally ramified primes."""
        if self._conductor is None:
            DK = self.K.disc
            base = self.D_E ** ((self.l - 1) // 2)
            q, r = divmod(DK, base)
            if r or q <= 0:
                raise ContradictsProposition(f"D_K = {DK} is not D_E^((l-1)/2) times a positive integer")
            root, exact = integer_nthroot(q, self.l - 1)
            if not exact:
                raise ContradictsProposition(f"D_K / D_E^((l-1)/2) = {q} is not an (l-1)-th power")
            if set(factorint(int(root))) != set(self.totally_ramified()):
                raise ContradictsProposition("conductor primes differ from the totally ramified primes")
            self._conductor = int(root)
        return self._conductor

    def totally_ramified(self) -> list[int]:
        K = self.K
        out = []
        for p in sorted(factorint(abs(K.disc))):
            dec = decompose_prime(K, p)
            if len(dec) == 1 and dec[0].e == self.l:
                out.append(p)
        return out

    @property
    def conductor_primes(self) -> list[int]:
        return sorted(factorint(self.conductor))

    @property
    def t_K(self) -> int:
        return len(self.conductor_primes)

    def ramified_in_L(self) -> list[int]:
        return sorted(set(factorint(abs(self.K.disc))) | set(factorint(abs(self.D_E))))

    @property
    def s_L(self) -> int:
        return len(self.ramified_in_L())

    def to_dict(self) -> dict:
        return {
            "l": self.l,
            "f": list(self.poly.coeffs),
            "d_E": self.d_E,
            "source": self.source,
            "galois_evidence": self.evidence.to_dict(),
        }


def make_instance(
    f: IntPoly,
    radicand: int | None = None,
    source: str = "",
    samples: int = DEFAULT_SAMPLES,
    lavallee_s: int | None = None,
) -> DihedralInstance:
    """Check that f plausibly has group D_l and identify the quadratic subfield E.

    For l = 3 mod 4 the discriminant of f determines E; for l = 1 mod 4 it is
    a square and the radicand must be supplied.
    """
    l = f.degree
    if l < 3 or not isprime(l):
        raise PreconditionFailed(f"degree {l} is not an odd prime")
    if f.lc != 1:
        raise PreconditionFailed("defining polynomial must be monic")
    if not is_irreducible_over_Q(f):
        raise NotDihedral(f"{f} is reducible")
    disc = discriminant(f)
    # the reflections of D_l are even permutations exactly when l = 1 mod 4
    parity_ok = _is_square(disc) == (l % 4 == 1)
    if radicand is not None:
        d_E = squarefree_kernel(radicand)
        if l % 4 == 3 and squarefree_kernel(disc) != d_E:
            raise NotDihedral("radicand disagrees with the discriminant of f")
    elif l % 4 == 3:
        d_E = squarefree_kernel(disc)
    else:
        raise PreconditionFailed("for l = 1 mod 4 the radicand of E must be given")
    if d_E == 1:
        raise NotDihedral("radicand is a square, so the closure has no quadratic subfield")
    pats = sample_cycle_types(f, samples)
    allowed = dihedral_patterns(l)
    ok = parity_ok and set(pats) == allowed
    if lavallee_s is not None:
        method = "lavallee-nonsquare"
    elif l == 3:
        method = "cubic-nonsquare-disc+sampling"
    else:
        method = "parity+sampling"
    ev = GaloisEvidence(method, samples, pats, parity_ok, ok)
    if not ok:
        raise NotDihedral(f"cycle types {sorted(pats)} are not those of D_{l}")
    return DihedralInstance(l, f, d_E, radicand, ev, source, lavallee_s)


def brumer_instance(s: int, t: int, samples: int = DEFAULT_SAMPLES) -> DihedralInstance:
    f, r = brumer_quintic(s, t)
    if r == 0:
        raise NotDihedral(f"(s, t) = ({s}, {t}) is degenerate: radicand 0")
    return make_instance(f, r, f"brumer({s},{t})", samples)


def lavallee_instance(s: int, samples: int = DEFAULT_SAMPLES) -> DihedralInstance:
    f, D, r = lavallee_quintic(s)
    if _is_square(r):
        raise NotDihedral(f"-D({s}) = {r} is a square")
    return make_instance(f, r, f"lavallee({s})", samples, lavallee_s=s)


# ---------------------------------------------------------------- decomposition law


@dataclass
class RamifiedPrime:
    p: int
    e: int
    f: int
    shape: list
    case: str


def classify_ramified_prime(inst: DihedralInstance, p: int) -> RamifiedPrime:
    """Ramification index and residue degree of p in L, read off from K and E."""
    K = inst.K
    l = inst.l
    if K.disc % p and inst.D_E % p:
        raise PreconditionFailed(f"{p} is unramified in L")
    dec = decompose_prime(K, p)
    shape = sorted((P.e, P.f) for P in dec)
    in_E = inst.D_E % p == 0
    if shape == [(1, 1)] + [(2, 1)] * ((l - 1) // 2) and in_E:
        return RamifiedPrime(p, 2, 1, shape, "e=2")
    if shape == [(l, 1)]:
        if not in_E:
            # p is split or inert in E
            f = 1 if _kronecker(inst.D_E, p) == 1 else 2
            return RamifiedPrime(p, l, f, shape, "e=l")
        if p == l:
            return RamifiedPrime(p, 2 * l, 1, shape, "e=2l")
    raise ContradictsProposition(f"prime {p} has shape {shape} (p | D_E: {in_E}), impossible for D_{l}")


def _kronecker(D: int, p: int) -> int:
    from sympy import jacobi_symbol

    if p == 2:
        return 0 if D % 2 == 0 else (1 if D % 8 in (1, 7) else -1)
    return jacobi_symbol(D % p, p)


# ---------------------------------------------------------------- certification


@dataclass
class PolyaCertificate:
    instance: DihedralInstance
    verdict: str
    po_L_order: int | None
    po_E: dict
    h_K: int | None
    trace: list
    bound_audit: dict
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        inst = self.instance
        return {
            "l": inst.l,
            "f": list(inst.poly.coeffs),
            "d_E": inst.d_E,
            "h_K": self.h_K,
            "po_E": self.po_E,
            "po_L_order": self.po_L_order,
            "verdict": self.verdict,
            "trace": self.trace,
            "bound_audit": self.bound_audit,
        }


def _depressed_gcd_criterion(f: IntPoly):
    """gcd(a_2, ..., a_{l-1}, l a_l) for f = X^l + a_2 X^(l-2) + ... + a_l, or None."""
    l = f.degree
    c = f.coeffs
    if c[l - 1] != 0:
        return None
    a = [c[l - i] for i in range(2, l)] + [l * c[0]]
    g = 0
    for x in a:
        g = math.gcd(g, x)
    return g


def ramification_bound(inst: DihedralInstance) -> int:
    """Largest s_L allowed for a Polya L."""
    if inst.is_real:
        return 4
    if inst.l == 3 and inst.d_E == -3:
        return 3
    return 2


def bound_audit(inst: DihedralInstance, verdict: str) -> dict:
    limit = ramification_bound(inst)
    s = inst.s_L
    applies = verdict == POLYA
    return {
        "applicable": applies,
        "real": inst.is_real,
        "s_L": s,
        "limit": limit,
        "passed": (s <= limit) if applies else True,
    }


def _l_part_order(inst: DihedralInstance, cg, trace) -> int:
    """Order of the l-part of Po(L), from the classes of the totally ramified primes of K.

    For p totally ramified in K with pO_K = P^l, the Ostrowski ideal of L at p
    is PO_L (or its square root when p = l), and N o eps is squaring on Cl(K),
    so eps is injective on the odd part.  Hence the l-part of Po(L) is
    isomorphic to the subgroup of Cl(K) generated by these P.
    """
    from .polya import _Subgroup

    sub = _Subgroup(cg.invariant_factors)
    classes = []
    for p in inst.conductor_primes:
        P = decompose_prime(inst.K, p)[0]
        c = cg.coords_of_prime(P)
        classes.append({"p": p, "class_vector": list(c)})
        sub.add(c)
    trace.append(
        {
            "step": "l-part of Po(L)",
            "citation": "classes of the totally ramified primes of K; eps injective on odd-order classes",
            "data": {"classes": classes, "order": sub.order},
        }
    )
    return sub.order


def certify_dihedral(
    inst: DihedralInstance, effort: RelationEffort | None = None, resolve_l_part: bool = True
) -> PolyaCertificate:
    """Decide whether L is Polya by going through E and K only.

    With ``resolve_l_part`` false the case l | h(K) is left UNDECIDED.
    """
    trace = []
    notes = []
    l = inst.l
    qp = quad_polya_group(inst.d_E)
    po_E = {"d": inst.d_E, "order": qp.order, "s": qp.s, "unit_norm": qp.unit_norm, "class_number": qp.class_number}
    trace.append({"step": "Po(E)", "citation": "Hilbert's formula for quadratic fields", "data": po_E})

    ram = [classify_ramified_prime(inst, p) for p in inst.ramified_in_L()]
    trace.append(
        {
            "step": "ramified primes",
            "citation": "decomposition law for D_l fields",
            "data": [{"p": r.p, "e": r.e, "f": r.f, "case": r.case} for r in ram],
        }
    )
    trace.append(
        {
            "step": "conductor",
            "citation": "D_K = D_E^((l-1)/2) f^(l-1)",
            "data": {"f": inst.conductor, "t_K": inst.t_K},
        }
    )

    po_L = None
    h_K = None
    tr = inst.conductor_primes
    g = _depressed_gcd_criterion(inst.poly)
    if g == 1:
        if tr:
            raise ContradictsProposition(f"gcd criterion holds but {tr} are totally ramified in K")
        trace.append(
            {
                "step": "L/E unramified",
                "citation": "gcd(a_2, ..., a_{l-1}, l a_l) = 1",
                "data": {"gcd": g},
            }
        )
        po_L = qp.order
    elif inst.lavallee_s is not None:
        data = {"s": inst.lavallee_s, "D": lavallee_disc_root(inst.lavallee_s), "totally_ramified": tr}
        if tr:
            # a totally ramified prime of K ramifies in L/E, so the family's claim fails here
            trace.append({"step": "L/E ramified", "citation": "Lavallee family claim not applicable", "data": data})
            notes.append(f"Lavallee s={inst.lavallee_s}: primes {tr} are totally ramified in K, L/E is ramified")
        else:
            trace.append({"step": "L/E unramified", "citation": "Lavallee family with -D(s) not a square", "data": data})
            po_L = qp.order
    if po_L is not None:
        trace.append({"step": "Po(L) = Po(E)", "citation": "L/E unramified", "data": {"order": po_L}})
    else:
        try:
            cg = class_group(inst.K, effort)
        except RelationSearchIncomplete as exc:
            cg = None
            notes.append(f"class group of K: {exc}")
        if cg is not None and not cg.certified:
            notes.append("class group of K is not certified")
            cg = None
        if cg is not None:
            h_K = cg.h
            trace.append(
                {
                    "step": "h(K)",
                    "citation": "factor-base class group, certified",
                    "data": {"h": h_K, "invariants": list(cg.invariant_factors)},
                }
            )
            if h_K % l:
                po_L = qp.order
                trace.append(
                    {
                        "step": "Po(L) = Po(E)",
                        "citation": "2-part of Po(L) is Po(E), l-part embeds in Po(K); l does not divide h(K)",
                        "data": {"order": po_L},
                    }
                )
            elif resolve_l_part:
                po_L = qp.order * _l_part_order(inst, cg, trace)
            else:
                notes.append(f"{l} divides h(K): only an injection of the {l}-part is available")
    if po_L is None:
        verdict = UNDECIDED
    elif po_L == 1:
        verdict = POLYA
    else:
        verdict = NOT_POLYA
    audit = bound_audit(inst, verdict)
    if not audit["passed"]:
        raise ContradictsProposition(f"Polya verdict with s_L = {audit['s_L']} above {audit['limit']}")
    trace.append({"step": "bound audit", "citation": "ramified-prime bound for Polya D_l fields", "data": audit})
    return PolyaCertificate(inst, verdict, po_L, po_E, h_K, trace, audit, notes)


# ---------------------------------------------------------------- sweeps and audits


@dataclass
class SweepRow:
    s: int
    radicand: int
    d_E: int | None
    po_E_order: int | None
    verdict: str

    def to_dict(self) -> dict:
        return {"s": self.s, "radicand": self.radicand, "d_E": self.d_E, "po_E_order": self.po_E_order, "verdict": self.verdict}


def lavallee_sweep(s_values, samples: int = DEFAULT_SAMPLES) -> list[SweepRow]:
    """Per-s verdicts for the Lavallee family; square radicands are SKIPPED."""
    rows = []
    for s in s_values:
        _, _, r = lavallee_quintic(s)
        if _is_square(r):
            rows.append(SweepRow(s, r, None, None, SKIPPED))
            continue
        cert = certify_dihedral(lavallee_instance(s, samples))
        rows.append(SweepRow(s, r, cert.instance.d_E, cert.po_E["order"], cert.verdict))
    return rows


@dataclass
class DivisibilityReport:
    l: int
    t_K: int
    case: str
    threshold: int
    hypothesis: bool
    po_order: int
    po_complete: bool
    status: str

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def divisibility_audit(inst: DihedralInstance, effort: RelationEffort | None = None, B: int | None = None):
    """Check that l divides #Po(K) whenever K has enough totally ramified primes."""
    from .polya import polya_group

    K = inst.K
    l = inst.l
    if l == 3 and _is_square(K.disc):
        raise PreconditionFailed("cyclic cubic field: not a D_3 closure")
    if K.disc > 0:
        case, threshold = "D_K>0", 3
    elif l == 3 and inst.d_E == -3:
        case, threshold = "D_K<0 pure", 3
    elif l == 3:
        case, threshold = "D_K<0 non-pure", 2
    else:
        case, threshold = "D_K<0", 2
    cg = class_group(K, effort)
    pg = polya_group(K, cg, B=B, galois=False)
    hyp = inst.t_K >= threshold
    if not hyp:
        status = "hypothesis fails"
    elif pg.order % l == 0:
        status = "checked"
    elif pg.certified_complete:
        raise ContradictsProposition(f"t_K = {inst.t_K} but {l} does not divide #Po(K) = {pg.order}")
    else:
        status = "conditional"
    return DivisibilityReport(l, inst.t_K, case, threshold, hyp, pg.order, pg.certified_complete, status), pg


# ---------------------------------------------------------------- cubic closures


def cubic_closure(inst: DihedralInstance):
    """For l = 3: the degree-6 field L = K(sqrt d_E) with embeddings of K and E."""
    from sympy import CRootOf, Symbol, sqrt
    from sympy.polys.numberfields import primitive_element

    from .polya import Embedding
    from .quadratic import quadratic_poly

    if inst.l != 3:
        raise PreconditionFailed("only cubic closures are built explicitly")
    x = Symbol("x")
    fx = sum(c * x**i for i, c in enumerate(inst.poly.coeffs))
    g, _, reps = primitive_element([CRootOf(fx, 0), sqrt(inst.d_E)], x, ex=True)
    coeffs = [int(c) for c in reversed(g.as_poly(x).all_coeffs())]
    L = NumberField(IntPoly(tuple(coeffs)))
    alpha = [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(reps[0])]
    root = [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(reps[1])]
    embK = Embedding(inst.K, L, alpha)
    E = NumberField(quadratic_poly(inst.d_E))
    if inst.d_E % 4 == 1:
        omega = [(Fraction(int(i == 0)) + c) / 2 for i, c in enumerate(root)]
    else:
        omega = root
    embE = Embedding(E, L, omega)
    return L, embK, E, embE


def _elements_of(sub, invariants):
    from itertools import product as _product

    return [v for v in _product(*[range(d) for d in invariants]) if sub.contains(v)]


def _order_of(v, invariants):
    o = 1
    for x, d in zip(v, invariants):
        o = o * (d // math.gcd(x, d)) // math.gcd(o, d // math.gcd(x, d))
    return o


def cubic_consistency(inst: DihedralInstance, effort: RelationEffort | None = None) -> dict:
    """For l = 3, compare Po(L) on the explicit closure with Po(E) and Po(K)."""
    from .polya import norm_class_map, polya_group

    L, embK, _, _ = cubic_closure(inst)
    cgK = class_group(inst.K, effort)
    cgL = class_group(L, effort)
    if not (cgK.certified and cgL.certified):
        return {"status": "uncertified", "h_K": cgK.h, "h_L": cgL.h}
    if cgL.h % cgK.h:
        raise ContradictsProposition(f"h(K) = {cgK.h} does not divide h(L) = {cgL.h}")
    po_L = polya_group(L, cgL, galois=True)
    po_K = polya_group(inst.K, cgK, galois=False)
    po_E = quad_polya_group(inst.d_E).order
    inv = cgL.invariant_factors
    elems = _elements_of(po_L._sub, inv)
    two = sum(1 for v in elems if _order_of(v, inv) <= 2)
    if two != po_E:
        raise ContradictsProposition(f"2-torsion of Po(L) has order {two}, Po(E) has order {po_E}")
    N = norm_class_map(L, inst.K, embK, cgL, cgK)
    l_part = [v for v in elems if _order_of(v, inv) % 2 == 1]
    zero = tuple([0] * len(cgK.invariant_factors))
    for v in l_part:
        img = N.apply(v)
        if any(v) and img == zero:
            raise ContradictsProposition("norm map kills an element of the l-part of Po(L)")
        if po_K.certified_complete and not po_K.contains(img):
            raise ContradictsProposition("norm of the l-part of Po(L) leaves Po(K)")
    return {
        "status": "checked",
        "L": list(L.poly.coeffs),
        "h_K": cgK.h,
        "h_L": cgL.h,
        "po_L_order": po_L.order,
        "po_E_order": po_E,
        "po_K_order": po_K.order,
        "two_torsion": two,
        "l_part_order": len(l_part),
    }
