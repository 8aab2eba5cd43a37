"""The twelve acceptance criteria, one test each.

Every test records a single PASS/FAIL line that is printed in the terminal
summary.
"""

import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction as F

import pytest

from conftest import ACCEPTANCE_LINES
from polyalab.dihedral import (
    NOT_POLYA,
    POLYA,
    brumer_instance,
    brumer_quintic,
    certify_dihedral,
    classify_ramified_prime,
    lavallee_instance,
    lavallee_quintic,
    lavallee_sweep,
    make_instance,
)
from polyalab.errors import InternalInconsistency
from polyalab.numfield import NumberField, class_group, decompose_prime, ideal_mul, ideal_norm, is_principal, principal_ideal
from polyalab.poly import IntPoly, discriminant, is_irreducible_over_Q, squarefree_kernel
from polyalab.polya import (
    Embedding,
    extend_class_map_epsilon,
    norm_class_map,
    polya_group,
    relative_polya_group,
)
from polyalab.quadratic import quad_class_group, quad_polya_group, quadratic_poly

pytestmark = pytest.mark.acceptance

# certificates produced anywhere in this module, audited by criterion 12
CERTIFICATES = []
INSTANCES = []

SWEEP_POLYA = {-6, -5, -2, -1, 0, 1, 2, 5, 6, 8}
SWEEP_NOT_POLYA = {-17, -16, -4, -3, 4, 7, 9, 10, 16, 17}


def squarefree_range(limit):
    out = []
    for d in range(-limit, limit + 1):
        if d in (0, 1):
            continue
        if all(d % (p * p) for p in range(2, math.isqrt(abs(d)) + 1)):
            out.append(d)
    return out


@contextmanager
def criterion(number, title, limit):
    """Record one PASS/FAIL line; the body raises AssertionError on failure."""
    t0 = time.perf_counter()
    status = "FAIL"
    detail = ""
    try:
        yield
        elapsed = time.perf_counter() - t0
        if elapsed > limit:
            detail = f"over the {limit} s budget"
            raise AssertionError(f"criterion {number} took {elapsed:.1f} s, budget {limit} s")
        status = "PASS"
    except Exception as exc:
        detail = detail or f"{type(exc).__name__}: {exc}"
        raise
    finally:
        elapsed = time.perf_counter() - t0
        line = f"criterion {number:>2} {status}  {title}  ({elapsed:.1f} s)"
        if detail:
            line += f"  [{detail}]"
        ACCEPTANCE_LINES.append(line)
        print(line)


def test_criterion_01_quadratic_suite():
    with criterion(1, "quadratic suite", 1):
        assert quad_class_group(-23).h == 3
        assert quad_polya_group(-15).order == 2
        assert quad_polya_group(-1367).order == 1
        assert quad_polya_group(-7).order == 1


def test_criterion_02_hilbert_formula():
    with criterion(2, "Hilbert formula vs explicit ramified classes, |d| <= 5000", 60):
        mismatches = []
        for d in squarefree_range(5000):
            try:
                qp = quad_polya_group(d)
            except InternalInconsistency:
                mismatches.append(d)
                continue
            if qp.order != qp.formula_order:
                mismatches.append(d)
        assert mismatches == []


def test_criterion_03_dual_engine():
    with criterion(3, "form classes vs ideal classes, |d| <= 5000", 120):
        mismatches = []
        uncertified = []
        for d in squarefree_range(5000):
            forms = quad_class_group(d).invariant_factors
            cg = class_group(NumberField(quadratic_poly(d)))
            if not cg.certified:
                uncertified.append(d)
            if cg.invariant_factors != forms:
                mismatches.append(d)
        assert uncertified == []
        assert mismatches == []


def test_criterion_04_brumer_radicands():
    with criterion(4, "Brumer radicands", 1):
        assert brumer_quintic(5, 1)[1] == -1367
        assert squarefree_kernel(brumer_quintic(-5, 3)[1]) == -15


def test_criterion_05_lavallee_identity():
    with criterion(5, "Lavallee discriminant identity, s in [-20, 20]", 10):
        for s in range(-20, 21):
            f, D, _ = lavallee_quintic(s)
            assert D == 4 * s**3 + 28 * s**2 + 24 * s + 47
            assert discriminant(f) == D * D


def test_criterion_06_example_a():
    with criterion(6, "Brumer (5, 1): L Polya, K not Polya", 600):
        inst = brumer_instance(5, 1)
        INSTANCES.append(inst)
        K = inst.K
        assert K.disc == 1367**2
        cert = certify_dihedral(inst)
        CERTIFICATES.append(cert)
        assert cert.h_K == 4
        assert cert.verdict == POLYA
        cg = class_group(K)
        pg = polya_group(K, cg)
        hit = pg.nonprincipal_generator()
        assert hit is not None
        ostrowski, _ = hit
        assert is_principal(K, ostrowski.ideal, cg) == (False, None)


def test_criterion_07_example_b():
    with criterion(7, "Brumer (-5, 3): Po(L) = C2, not Polya", 300):
        inst = brumer_instance(-5, 3)
        INSTANCES.append(inst)
        assert inst.K.disc == 3**2 * 5**6
        cert = certify_dihedral(inst)
        CERTIFICATES.append(cert)
        assert cert.h_K == 1
        assert cert.po_L_order == 2
        assert cert.verdict == NOT_POLYA


def test_criterion_08_sweep():
    with criterion(8, "Lavallee sweep over -17..17", 60):
        rows = lavallee_sweep(range(-17, 18))
        verdict = {r.s: r.verdict for r in rows}
        # the stated sets are examples, not a full classification of the range
        wrong = {s: verdict[s] for s in SWEEP_POLYA if verdict[s] != POLYA}
        wrong.update({s: verdict[s] for s in SWEEP_NOT_POLYA if verdict[s] != NOT_POLYA})
        assert wrong == {}
        unlisted = {s: v for s, v in verdict.items() if s not in SWEEP_POLYA | SWEEP_NOT_POLYA}
        print("unlisted values:", unlisted)
        assert unlisted[-7] == "SKIPPED"


@pytest.mark.slow
def test_criterion_09_d7():
    with criterion(9, "D7 instance", 900):
        f = IntPoly((-1, 0, 0, 0, -7, -7, -7, 1))
        assert discriminant(f) == -(3**6) * 7**9
        inst = make_instance(f)
        INSTANCES.append(inst)
        assert inst.d_E == -7
        cert = certify_dihedral(inst)
        CERTIFICATES.append(cert)
        assert cert.h_K == 1
        assert cert.verdict == POLYA


def test_criterion_10_pure_cubic():
    with criterion(10, "Po(Q(cbrt 19)) = Cl = Z/3", 30):
        K = NumberField(IntPoly((-19, 0, 0, 1)))
        cg = class_group(K)
        pg = polya_group(K, cg)
        assert cg.invariant_factors == [3]
        assert pg.invariant_factors == [3] and pg.order == cg.h
        assert pg.stabilized


def test_criterion_11_relative_suite():
    with criterion(11, "Hilbert class field of Q(sqrt -23)", 600):
        K = NumberField(quadratic_poly(-23))
        L = NumberField(IntPoly((23, 0, 9, 0, -6, 0, 1)))
        # L contains a root of X^3 - X - 1 and sqrt(-23), so it is the splitting field
        Embedding(NumberField(IntPoly((-1, -1, 0, 1))), L, [F(-4, 18), F(-9, 18), F(5, 18), 0, F(-1, 18)])
        emb = Embedding(K, L, [F(1, 2), F(3, 2), 0, F(-1, 2)])
        cgK = class_group(K)
        cgL = class_group(L)
        assert cgL.certified and cgL.h == 1
        assert relative_polya_group(L, emb, cgL).order == 1
        eps = extend_class_map_epsilon(K, L, emb, cgK, cgL)
        assert eps.kernel_order == cgK.h == 3
        comp = eps.compose(norm_class_map(L, K, emb, cgL, cgK))
        for v in comp.elements():
            assert comp.apply(v) == cgK.reduce(tuple(3 * x for x in v))


def _random_fields(rng, count):
    out = []
    while len(out) < count:
        n = rng.randint(2, 4)
        c = tuple(rng.randint(-9, 9) for _ in range(n)) + (1,)
        f = IntPoly(c)
        if is_irreducible_over_Q(f):
            out.append(NumberField(f))
    return out


def test_criterion_12_properties():
    with criterion(12, "property suite", 120):
        rng = random.Random(12)
        fields = _random_fields(rng, 60)
        primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        # sum of e f equals the degree
        for _ in range(1000):
            K = rng.choice(fields)
            p = rng.choice(primes)
            assert sum(P.e * P.f for P in decompose_prime(K, p)) == K.n
        # ideal norms are multiplicative
        for _ in range(200):
            K = rng.choice(fields)
            x = [rng.randint(-12, 12) for _ in range(K.n)]
            y = [rng.randint(-12, 12) for _ in range(K.n)]
            if K.norm(x) == 0 or K.norm(y) == 0:
                continue
            a, b = principal_ideal(K, x), principal_ideal(K, y)
            assert ideal_norm(ideal_mul(a, b)) == ideal_norm(a) * ideal_norm(b) == abs(K.norm(K.mul(x, y)))
        # Polya groups only grow with the prime bound
        for coeffs in ((-19, 0, 0, 1), (-11, 0, 0, 1), (5, 15, 0, 1)):
            K = NumberField(IntPoly(coeffs))
            cg = class_group(K)
            prev = None
            for B in (2, 5, 20, 100):
                pg = polya_group(K, cg, B=B, galois=False)
                if prev is not None:
                    assert pg.contains_group(prev)
                prev = pg
        # every POLYA certificate passes the ramification bound audit
        for s in sorted(SWEEP_POLYA):
            inst = lavallee_instance(s)
            INSTANCES.append(inst)
            CERTIFICATES.append(certify_dihedral(inst))
        polya_certs = [c for c in CERTIFICATES if c.verdict == POLYA]
        assert polya_certs
        for cert in polya_certs:
            assert cert.bound_audit["applicable"] and cert.bound_audit["passed"]
        # decomposition law: every ramified prime falls in one of the three cases
        for inst in INSTANCES:
            l = inst.l
            for p in inst.ramified_in_L():
                rp = classify_ramified_prime(inst, p)
                assert rp.case in ("e=2", "e=l", "e=2l")
                assert (p in inst.conductor_primes) == (rp.e in (l, 2 * l))
                assert rp.e * rp.f <= 2 * l and (2 * l) % (rp.e * rp.f) == 0
