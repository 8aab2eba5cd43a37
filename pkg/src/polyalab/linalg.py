"""Integer and modular linear algebra: Hermite and Smith forms, LLL, short vectors.

Matrices are lists of integer rows. Lattices are spanned by their rows.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "det_bareiss",
    "xgcd",
    "hnf_mod",
    "hnf",
    "SmithForm",
    "smith_from_hnf",
    "rank_mod_p",
    "kernel_mod_p",
    "solve_mod_p",
    "lll_transform",
    "fincke_pohst",
]

_BIG_PRIME = (1 << 61) - 1


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, u, v) with u*a + v*b = g >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def det_bareiss(m) -> int:
    """Exact determinant of a square integer matrix (fraction-free elimination)."""
    m = [list(map(int, r)) for r in m]
    n = len(m)
    if n == 0:
        return 1
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
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * m[n - 1][n - 1]


def hnf_mod(rows, n: int, D: int):
    """Hermite form of the full-rank lattice spanned by ``rows`` and ``D*Z^n``.

    ``D`` must be a nonzero multiple of the lattice determinant.  The result is
    lower triangular: row i is zero beyond column i, has a positive diagonal
    entry, and its entries left of the diagonal are reduced modulo the
    diagonal entry of their column.
    """
    D = abs(int(D))
    work = [[int(x) % D for x in r] for r in rows]
    work = [r for r in work if any(r)]
    out = [None] * n
    for j in range(n - 1, -1, -1):
        piv = [0] * n
        piv[j] = D
        rest = []
        for r in work:
            a = r[j]
            if a == 0:
                rest.append(r)
                continue
            b = piv[j]
            g, u, v = xgcd(b, a)
            bg, ag = b // g, a // g
            new_piv = [(u * piv[k] + v * r[k]) % D for k in range(j)]
            new_r = [(bg * r[k] - ag * piv[k]) % D for k in range(j)]
            new_piv += [g] + [0] * (n - j - 1)
            new_r += [0] * (n - j)
            piv = new_piv
            if any(new_r):
                rest.append(new_r)
        out[j] = piv
        work = rest
    for i in range(n):
        ri = out[i]
        for j in range(i - 1, -1, -1):
            d = out[j][j]
            q = ri[j] // d
            if q:
                rj = out[j]
                for k in range(j + 1):
                    ri[k] -= q * rj[k]
    return out


def rank_mod_p(rows, p: int = _BIG_PRIME) -> int:
    return len(_echelon_mod_p(rows, p)[1])


def _echelon_mod_p(rows, p):
    """Row echelon form mod p; returns (reduced rows, pivot columns, source row indices)."""
    basis = []  # (pivot col, row)
    src = []
    for idx, r in enumerate(rows):
        v = [int(x) % p for x in r]
        for c, b in basis:
            if v[c]:
                f = v[c]
                v = [(x - f * y) % p for x, y in zip(v, b)]
        piv = next((c for c, x in enumerate(v) if x), None)
        if piv is None:
            continue
        inv = pow(v[piv], -1, p)
        v = [x * inv % p for x in v]
        for k, (c, b) in enumerate(basis):
            if b[piv]:
                f = b[piv]
                basis[k] = (c, [(x - f * y) % p for x, y in zip(b, v)])
        basis.append((piv, v))
        src.append(idx)
    return basis, [c for c, _ in basis], src


def independent_rows(rows, p: int = _BIG_PRIME) -> list[int]:
    """Indices of a maximal set of rows independent modulo ``p``."""
    return _echelon_mod_p(rows, p)[2]


def hnf(rows, n: int):
    """Hermite form of a full-rank lattice in Z^n, or None if rank < n."""
    rows = [list(map(int, r)) for r in rows]
    for p in (_BIG_PRIME, (1 << 31) - 1):
        idx = independent_rows(rows, p)
        if len(idx) == n:
            D = det_bareiss([rows[i] for i in idx])
            if D != 0:
                return hnf_mod(rows, n, D)
    return None


def kernel_mod_p(rows, p: int):
    """Basis of the left kernel {v : sum_i v_i rows[i] = 0} over F_p."""
    m = len(rows)
    if m == 0:
        return []
    ncols = len(rows[0])
    aug = [[int(x) % p for x in r] + [1 if k == i else 0 for k in range(m)] for i, r in enumerate(rows)]
    pivots_done = 0
    for c in range(ncols):
        piv = next((i for i in range(pivots_done, m) if aug[i][c]), None)
        if piv is None:
            continue
        aug[pivots_done], aug[piv] = aug[piv], aug[pivots_done]
        pr = aug[pivots_done]
        inv = pow(pr[c], -1, p)
        pr = [x * inv % p for x in pr]
        aug[pivots_done] = pr
        for i in range(m):
            if i != pivots_done and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], pr)]
        pivots_done += 1
    return [r[ncols:] for r in aug[pivots_done:]]


def solve_mod_p(rows, target, p: int):
    """Some v with sum_i v_i rows[i] = target mod p, or None."""
    m = len(rows)
    ker = kernel_mod_p(list(rows) + [target], p)
    for v in ker:
        if v[m] % p:
            inv = pow(-v[m], -1, p)
            return [x * inv % p for x in v[:m]]
    return None


class SmithForm:
    """Smith form of Z^k / L for a full-rank relation lattice L.

    ``invariants`` lists the nontrivial invariant factors d_1 | d_2 | ... .
    A vector e in Z^k has coordinates ``(e V) mod d``; the t-th generator is
    represented by row t of ``W``.
    """

    def __init__(self, invariants, V, W, k):
        self.invariants = list(invariants)
        self.V = V
        self.W = W
        self.k = k

    @property
    def order(self) -> int:
        return math.prod(self.invariants)

    def coords(self, e):
        r = len(self.invariants)
        out = []
        for t in range(r):
            s = 0
            for i, x in enumerate(e):
                if x:
                    s += x * self.V[i][t]
            out.append(s % self.invariants[t])
        return tuple(out)

    def vector(self, y):
        vec = [0] * self.k
        for t, c in enumerate(y):
            if c:
                w = self.W[t]
                for i in range(self.k):
                    vec[i] += c * w[i]
        return vec


def _snf_square(R):
    """Diagonalise a nonsingular square matrix; returns (diag, V, Vinv) with U R V = diag."""
    r = len(R)
    A = [list(row) for row in R]
    V = [[int(i == j) for j in range(r)] for i in range(r)]
    Vi = [[int(i == j) for j in range(r)] for i in range(r)]

    def col_swap(a, b):
        for row in A:
            row[a], row[b] = row[b], row[a]
        for row in V:
            row[a], row[b] = row[b], row[a]
        Vi[a], Vi[b] = Vi[b], Vi[a]

    def col_addmul(dst, src, q):
        # column dst -= q * column src
        if q == 0:
            return
        for row in A:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]
        # inverse: row src of Vi += q * row dst of Vi
        vd, vs = Vi[dst], Vi[src]
        for j in range(r):
            vs[j] += q * vd[j]

    def col_lincomb(a, b, u, v, x, y):
        # (col a, col b) <- (u*a + v*b, x*a + y*b), det [[u,x],[v,y]] = 1
        for M in (A, V):
            for row in M:
                ca, cb = row[a], row[b]
                row[a] = u * ca + v * cb
                row[b] = x * ca + y * cb
        # inverse of [[u, x], [v, y]] is [[y, -x], [-v, u]] acting on rows of Vi
        ra, rb = Vi[a], Vi[b]
        Vi[a] = [y * p - x * q for p, q in zip(ra, rb)]
        Vi[b] = [-v * p + u * q for p, q in zip(ra, rb)]

    for t in range(r):
        while True:
            # pick the smallest nonzero entry in the remaining block
            best = None
            for i in range(t, r):
                for j in range(t, r):
                    x = A[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            _, bi, bj = best
            A[t], A[bi] = A[bi], A[t]
            if bj != t:
                col_swap(t, bj)
            p = A[t][t]
            done = True
            for i in range(t + 1, r):
                q = A[i][t] // p
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, r):
                q = A[t][j] // p
                col_addmul(j, t, q)
                if A[t][j]:
                    done = False
            if done:
                break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
    d = [A[i][i] for i in range(r)]
    # enforce d_i | d_j
    for i in range(r):
        for j in range(i + 1, r):
            a, b = d[i], d[j]
            if b % a == 0:
                continue
            g, u, v = xgcd(a, b)
            # columns transform by [[1, -v b/g], [1, u a/g]]
            col_lincomb(i, j, 1, 1, -v * b // g, u * a // g)
            d[i], d[j] = g, a * b // g
    return d, V, Vi


def smith_from_hnf(H) -> SmithForm:
    """Smith form of Z^k / L where ``H`` is the lower-triangular HNF of L."""
    k = len(H)
    S = [i for i in range(k) if H[i][i] > 1]
    pos = {s: t for t, s in enumerate(S)}
    r = len(S)
    # P[i] expresses e_i as a combination of e_S modulo L
    P = []
    for i in range(k):
        if i in pos:
            row = [0] * r
            row[pos[i]] = 1
        else:
            row = [0] * r
            hi = H[i]
            for j in range(i):
                c = hi[j]
                if c:
                    pj = P[j]
                    for t in range(r):
                        row[t] -= c * pj[t]
        P.append(row)
    R = []
    for s in S:
        hs = H[s]
        row = [0] * r
        for j in range(s + 1):
            c = hs[j]
            if c:
                pj = P[j]
                for t in range(r):
                    row[t] += c * pj[t]
        R.append(row)
    if r == 0:
        return SmithForm([], [[] for _ in range(k)], [], k)
    d, Vs, Vsi = _snf_square(R)
    keep = [t for t in range(r) if d[t] != 1]
    inv = [d[t] for t in keep]
    V = []
    for i in range(k):
        pi = P[i]
        V.append([sum(pi[u] * Vs[u][t] for u in range(r)) % d[t] for t in keep])
    W = []
    for t in keep:
        vec = [0] * k
        for u in range(r):
            vec[S[u]] = Vsi[t][u]
        W.append(vec)
    return SmithForm(inv, V, W, k)


def lll_transform(B0, delta: float = 0.99):
    """LLL-reduce the real row basis ``B0``; returns the integer transform U.

    The reduced basis is ``U @ B0``.
    """
    B0 = np.asarray(B0, dtype=float)
    n = B0.shape[0]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    b = [B0[i].copy() for i in range(n)]

    def gso():
        bs = []
        mu = [[0.0] * n for _ in range(n)]
        Bn = []
        for i in range(n):
            v = b[i].copy()
            for j in range(i):
                mu[i][j] = float(np.dot(b[i], bs[j]) / Bn[j]) if Bn[j] > 0 else 0.0
                v = v - mu[i][j] * bs[j]
            bs.append(v)
            Bn.append(float(np.dot(v, v)))
        return mu, Bn

    mu, Bn = gso()
    k = 1
    guard = 0
    while k < n and guard < 100000:
        guard += 1
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = b[k] - q * b[j]
                U[k] = [x - q * y for x, y in zip(U[k], U[j])]
                for i in range(j + 1):
                    mu[k][i] -= q * (mu[j][i] if i < j else 1.0)
        if Bn[k] >= (delta - mu[k][k - 1] ** 2) * Bn[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            U[k], U[k - 1] = U[k - 1], U[k]
            mu, Bn = gso()
            k = max(k - 1, 1)
    return U


def fincke_pohst(gram, bound: float, limit: int = 200000):
    """Nonzero integer x (one of each pair +-x) with x^T gram x <= bound.

    Returns (vectors, complete). ``complete`` is False when more than
    ``limit`` nodes were visited; the list is then partial.
    """
    G = np.asarray(gram, dtype=float)
    n = G.shape[0]
    q = G.copy()
    for i in range(n):
        for j in range(i + 1, n):
            q[j, i] = q[i, j]
            q[i, j] = q[i, j] / q[i, i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k, l] -= q[k, i] * q[i, l]
    for i in range(n):
        if q[i, i] <= 0:
            raise ValueError("Gram matrix is not positive definite")
    eps = 1e-9 * max(1.0, bound)
    out = []
    visited = 0
    x = [0] * n
    T = [0.0] * n
    Ucen = [0.0] * n
    UB = [0] * n

    i = n - 1
    T[i] = bound
    Ucen[i] = 0.0

    def bounds(i):
        z = math.sqrt(max(T[i], 0.0) / q[i, i] + eps)
        return math.ceil(-z - Ucen[i]) - 1, math.floor(z - Ucen[i])

    lo, UB[i] = bounds(i)
    x[i] = lo
    while True:
        x[i] += 1
        visited += 1
        if visited > limit:
            return out, False
        if x[i] > UB[i]:
            i += 1
            if i >= n:
                break
            continue
        if i > 0:
            T[i - 1] = T[i] - q[i, i] * (x[i] + Ucen[i]) ** 2
            i -= 1
            Ucen[i] = sum(q[i, j] * x[j] for j in range(i + 1, n))
            lo, UB[i] = bounds(i)
            x[i] = lo
            continue
        if all(v == 0 for v in x):
            # everything before zero is one representative of each +-x pair
            break
        val = bound - T[0] + q[0, 0] * (x[0] + Ucen[0]) ** 2
        if val <= bound + eps:
            out.append((list(x), val))
    return out, True
