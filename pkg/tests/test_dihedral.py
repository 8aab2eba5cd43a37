import math

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st
from sympy import Poly, symbols
from sympy.polys.numberfields.galoisgroups import galois_group

from polyalab.dihedral import (
    NOT_POLYA,
    POLYA,
    SKIPPED,
    bound_audit,
    brumer_instance,
    brumer_quintic,
    certify_dihedral,
    classify_ramified_prime,
    cubic_closure,
    cubic_consistency,
    dihedral_patterns,
    divisibility_audit,
    lavallee_disc_root,
    lavallee_instance,
    lavallee_quintic,
    lavallee_sweep,
    make_instance,
)
from polyalab.errors import NotDihedral, PreconditionFailed
from polyalab.numfield import decompose_prime
from polyalab.poly import IntPoly, discriminant, is_irreducible_over_Q, squarefree_kernel

X = symbols("X")


def sym(f: IntPoly):
    return Poly(list(reversed(f.coeffs)), X)


def test_brumer_examples():
    f, r = brumer_quintic(5, 1)
    assert f.coeffs == (1, 5, -11, 7, -2, 1)
    assert r == -1367
    f, r = brumer_quintic(-5, 3)
    assert f.coeffs == (3, -5, 15, -5, 0, 1)
    assert squarefree_kernel(r) == -15
    f, r = brumer_quintic(0, 0)
    assert r == 0 and not is_irreducible_over_Q(f)
    with pytest.raises(NotDihedral):
        brumer_instance(0, 0)


@settings(max_examples=40)
@given(st.integers(-30, 30), st.integers(-30, 30))
def test_brumer_discriminant_is_t_times_radicand_squared(s, t):
    f, r = brumer_quintic(s, t)
    assert sympy.discriminant(sym(f)) == (t * r) ** 2


@given(st.integers(-20, 20))
def test_lavallee_discriminant_identity(s):
    f, D, r = lavallee_quintic(s)
    assert D == lavallee_disc_root(s) == 4 * s**3 + 28 * s**2 + 24 * s + 47
    assert r == -D
    assert sympy.discriminant(sym(f)) == D**2


def test_dihedral_patterns():
    assert dihedral_patterns(5) == {(1, 1, 1, 1, 1), (1, 2, 2), (5,)}
    assert dihedral_patterns(3) == {(1, 1, 1), (1, 2), (3,)}


@settings(max_examples=12)
@given(st.integers(-8, 8), st.integers(-8, 8))
def test_galois_identification_matches_sympy(s, t):
    f, r = brumer_quintic(s, t)
    assume(r != 0 and is_irreducible_over_Q(f))
    name = galois_group(sym(f), by_name=True)[0].name
    try:
        make_instance(f, r, samples=120)
        ours = "D5"
    except NotDihedral:
        ours = "other"
    assert ours == ("D5" if name == "D5" else "other")


@pytest.mark.parametrize("coeffs", [(-1, -1, 0, 0, 0, 1), (-2, 0, 0, 0, 0, 1), (1, 3, -3, -4, 1, 1)])
def test_non_dihedral_quintics_rejected(coeffs):
    f = IntPoly(coeffs)
    name = galois_group(sym(f), by_name=True)[0].name
    assert name != "D5"
    with pytest.raises((NotDihedral, PreconditionFailed)):
        make_instance(f, -7, samples=150)


def test_preconditions():
    with pytest.raises(PreconditionFailed):
        make_instance(IntPoly((1, 0, 0, 0, 1)))  # degree 4
    with pytest.raises(PreconditionFailed):
        make_instance(IntPoly((1, 5, -11, 7, -2, 1)))  # l = 1 mod 4 needs a radicand
    with pytest.raises(NotDihedral):
        make_instance(IntPoly((-1, -2, 1, 1)))  # cyclic cubic


cubics = (
    st.tuples(st.integers(-15, 15), st.integers(1, 15))
    .map(lambda ab: IntPoly((ab[1], ab[0], 0, 1)))
    .filter(lambda f: is_irreducible_over_Q(f) and math.isqrt(abs(discriminant(f))) ** 2 != abs(discriminant(f)))
)


@settings(max_examples=15)
@given(cubics)
def test_classification_matches_explicit_closure(f):
    try:
        inst = make_instance(f, samples=60)
    except NotDihedral:
        return
    L, embK, _, _ = cubic_closure(inst)
    assert L.n == 6
    for p in inst.ramified_in_L():
        rp = classify_ramified_prime(inst, p)
        dec = decompose_prime(L, p)
        assert {(Q.e, Q.f) for Q in dec} == {(rp.e, rp.f)}
        assert len(dec) * rp.e * rp.f == 6


@settings(max_examples=25)
@given(cubics)
def test_conductor_formula(f):
    try:
        inst = make_instance(f, samples=60)
    except NotDihedral:
        return
    fc = inst.conductor
    assert inst.K.disc == inst.D_E * fc**2
    assert inst.conductor_primes == inst.totally_ramified()


@pytest.fixture(scope="module")
def example_a():
    return certify_dihedral(brumer_instance(5, 1))


@pytest.fixture(scope="module")
def example_b():
    return certify_dihedral(brumer_instance(-5, 3))


def test_example_a(example_a):
    inst = example_a.instance
    assert inst.d_E == -1367 and inst.K.disc == 1367**2
    assert inst.conductor == 1
    assert example_a.h_K == 4
    assert example_a.verdict == POLYA
    assert example_a.bound_audit["passed"]


def test_example_b(example_b):
    inst = example_b.instance
    assert inst.d_E == -15 and inst.K.disc == 3**2 * 5**6
    assert inst.conductor == 5
    assert example_b.h_K == 1
    assert example_b.po_L_order == 2
    assert example_b.verdict == NOT_POLYA
    cases = {p: classify_ramified_prime(inst, p) for p in inst.ramified_in_L()}
    assert (cases[3].e, cases[5].e) == (2, 10)


def test_certificate_schema(example_a):
    d = example_a.to_dict()
    for key in ("l", "f", "d_E", "h_K", "po_E", "verdict", "trace", "bound_audit"):
        assert key in d
    for step in d["trace"]:
        assert set(step) == {"step", "citation", "data"}


@pytest.mark.parametrize("s,verdict", [(0, POLYA), (7, NOT_POLYA), (-7, SKIPPED), (4, NOT_POLYA)])
def test_lavallee_verdicts(s, verdict):
    assert lavallee_sweep([s])[0].verdict == verdict


def test_lavallee_square_radicand():
    with pytest.raises(NotDihedral):
        lavallee_instance(-7)


def test_bound_audit_only_for_polya():
    inst = brumer_instance(-5, 3)
    assert bound_audit(inst, NOT_POLYA)["applicable"] is False
    a = bound_audit(inst, POLYA)
    assert a["applicable"] and a["limit"] == 2


@pytest.mark.parametrize("coeffs,expect_l_divides", [((5, 15, 0, 1), True), ((6, 6, 0, 1), True), ((-19, 0, 0, 1), None)])
def test_divisibility_audit(coeffs, expect_l_divides):
    inst = make_instance(IntPoly(coeffs))
    rep, pg = divisibility_audit(inst)
    if expect_l_divides is None:
        assert not rep.hypothesis
    else:
        assert rep.hypothesis and rep.status == "checked"
        assert pg.order % 3 == 0


@pytest.mark.parametrize("coeffs", [(-1, -1, 0, 1), (-2, 0, 0, 1), (-19, 0, 0, 1), (6, 6, 0, 1)])
def test_cubic_closure_consistency(coeffs):
    inst = make_instance(IntPoly(coeffs))
    rep = cubic_consistency(inst)
    assert rep["status"] == "checked"
    assert rep["two_torsion"] == rep["po_E_order"]
    cert = certify_dihedral(inst)
    assert cert.po_L_order == rep["po_L_order"]
