import itertools
import math

import numpy as np
from hypothesis import assume, given, strategies as st
from sympy import GF, Matrix, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.matrices.normalforms import invariant_factors

from polyalab.linalg import (
    det_bareiss,
    fincke_pohst,
    hnf,
    kernel_mod_p,
    lll_transform,
    smith_from_hnf,
    solve_mod_p,
    xgcd,
)


def square(n, lo=-9, hi=9):
    return st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n)


def in_lattice(H, v):
    """Solve v = x H for lower-triangular H by back substitution."""
    v = list(v)
    for i in range(len(H) - 1, -1, -1):
        if v[i] % H[i][i]:
            return False
        q = v[i] // H[i][i]
        v = [a - q * b for a, b in zip(v, H[i])]
    return not any(v)


@given(st.integers(-10**9, 10**9), st.integers(-10**9, 10**9))
def test_xgcd(a, b):
    g, u, v = xgcd(a, b)
    assert g == math.gcd(a, b)
    assert u * a + v * b == g


@given(st.integers(1, 5).flatmap(square))
def test_det_matches_sympy(m):
    assert det_bareiss(m) == Matrix(m).det()


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(square(n), square(n))))
def test_hnf_spans_same_lattice(pair):
    a, b = pair
    rows = a + b
    n = len(a)
    H = hnf(rows, n)
    if Matrix(rows).rank() < n:
        assert H is None
        return
    for i in range(n):
        assert H[i][i] > 0
        assert all(H[i][j] == 0 for j in range(i + 1, n))
        assert all(0 <= H[k][i] < H[i][i] for k in range(i + 1, n))
    assert all(in_lattice(H, r) for r in rows)
    # the gcd of maximal minors equals the lattice determinant
    g = 0
    for idx in itertools.combinations(range(len(rows)), n):
        g = math.gcd(g, int(Matrix([rows[i] for i in idx]).det()))
    assert math.prod(H[i][i] for i in range(n)) == g


@given(st.integers(1, 4).flatmap(square))
def test_smith_invariants_match_sympy(m):
    assume(Matrix(m).det() != 0)
    n = len(m)
    H = hnf(m, n)
    S = smith_from_hnf(H)
    theirs = [abs(int(d)) for d in invariant_factors(Matrix(m), domain=ZZ)]
    assert S.invariants == [d for d in theirs if d != 1]
    # every lattice row maps to zero and basis vectors map consistently
    for r in m:
        assert all(c == 0 for c in S.coords(r))
    for t in range(len(S.invariants)):
        y = [int(i == t) for i in range(len(S.invariants))]
        assert S.coords(S.vector(y)) == tuple(y)


@given(st.lists(st.lists(st.integers(0, 6), min_size=4, max_size=4), min_size=1, max_size=6))
def test_kernel_mod_p(rows):
    p = 7
    for v in kernel_mod_p(rows, p):
        s = [sum(v[i] * rows[i][j] for i in range(len(rows))) % p for j in range(4)]
        assert not any(s)
    rank = DomainMatrix([[GF(p)(x) for x in r] for r in rows], (len(rows), 4), GF(p)).rank()
    assert len(kernel_mod_p(rows, p)) == len(rows) - rank


@given(st.lists(st.lists(st.integers(0, 10), min_size=3, max_size=3), min_size=1, max_size=5), st.lists(st.integers(0, 10), min_size=3, max_size=3))
def test_solve_mod_p(rows, target):
    p = 11
    v = solve_mod_p(rows, target, p)
    if v is not None:
        s = [sum(v[i] * rows[i][j] for i in range(len(rows))) % p for j in range(3)]
        assert s == [t % p for t in target]


@given(st.integers(2, 4).flatmap(square))
def test_lll_is_unimodular(m):
    assume(Matrix(m).det() != 0)
    U = lll_transform(m)
    assert abs(Matrix(U).det()) == 1
    B = np.array(U) @ np.array(m)
    # the first reduced vector is no longer than any input row, up to the LLL factor
    shortest_in = min(np.dot(r, r) for r in np.array(m, dtype=float))
    n = len(m)
    assert np.dot(B[0], B[0]) <= 2 ** (n - 1) * shortest_in + 1e-9


def brute_short_vectors(gram, bound, box):
    n = len(gram)
    G = np.array(gram, dtype=float)
    out = set()
    for x in itertools.product(range(-box, box + 1), repeat=n):
        if any(x) and x @ G @ np.array(x) <= bound + 1e-9:
            y = tuple(-c for c in x)
            out.add(max(x, y))
    return out


@given(st.integers(2, 3).flatmap(lambda n: square(n, -3, 3)), st.integers(1, 30))
def test_fincke_pohst_matches_brute_force(m, bound):
    assume(Matrix(m).det() != 0)
    B = np.array(m, dtype=float)
    gram = B @ B.T
    vecs, complete = fincke_pohst(gram, bound)
    assert complete
    ours = {max(tuple(v), tuple(-c for c in v)) for v, _ in vecs}
    for v, val in vecs:
        assert abs(val - np.array(v) @ gram @ np.array(v)) < 1e-6
    # coordinates are bounded by sqrt(bound * max diag of gram^-1)
    box = int(math.isqrt(int(bound * np.max(np.diag(np.linalg.inv(gram)))) + 1)) + 1
    assert ours == brute_short_vectors(gram, bound, box)
