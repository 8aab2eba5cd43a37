"""Ideal class groups from factor-base relations.

The factor base holds every prime ideal of norm at most the Minkowski bound
together with every prime above a divisor of the discriminant.  A small
"dense" subset of the factor base carries the relation lattice; every other
factor-base prime is rewritten through a principal element in terms of
earlier primes.  Relations come from small elements of O_K and of random
products of dense primes.  The Smith form of the relation lattice gives the
group, and a lower-bound argument (non-principality of one class per line of
every p-torsion subgroup) upgrades the result to a certified one.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np
from sympy import factorint, primerange

from ..errors import NotSmooth, RelationSearchIncomplete
from ..linalg import fincke_pohst, hnf, hnf_mod, lll_transform, rank_mod_p, smith_from_hnf
from .field import NumberField, PrimeIdealFactor, _hnf_reduce, decompose_prime, valuation
from .ideals import FracIdeal, ideal_from_factorization, ideal_norm, ideal_valuation, principal_ideal

__all__ = ["RelationEffort", "ClassGroup", "class_group", "is_principal"]


@dataclass
class RelationEffort:
    """Budgets for the relation search (all positive)."""

    seed: int = 1
    max_rounds: int = 40
    stable_rounds: int = 2
    dense_size: int = 10
    products_per_round: int = 12
    search_height: int = 2
    elimination_heights: tuple = (1, 2, 3)
    enum_nodes: int = 400000
    certify: bool = True

    def scaled(self, factor: int) -> RelationEffort:
        return RelationEffort(
            seed=self.seed,
            max_rounds=self.max_rounds * factor,
            stable_rounds=self.stable_rounds,
            dense_size=self.dense_size,
            products_per_round=self.products_per_round * factor,
            search_height=self.search_height + (1 if factor > 1 else 0),
            elimination_heights=tuple(self.elimination_heights) + ((4,) if factor > 1 else ()),
            enum_nodes=self.enum_nodes * factor,
            certify=self.certify,
        )


# ---------------------------------------------------------------- helpers

_BOX_CACHE = {}


def _coeff_box(n, H, limit=60000):
    """Integer vectors in [-H, H]^n up to sign, sorted by squared length."""
    key = (n, H, limit)
    if key not in _BOX_CACHE:
        H = min(H, max(1, int(limit ** (1.0 / n) / 2)))
        axes = np.arange(-H, H + 1)
        grid = np.stack(np.meshgrid(*([axes] * n), indexing="ij"), -1).reshape(-1, n)
        # keep vectors whose last nonzero coordinate is positive
        nz = grid != 0
        last = np.where(nz.any(1), n - 1 - np.argmax(nz[:, ::-1], axis=1), -1)
        keep = last >= 0
        keep[keep] = grid[keep, last[keep]] > 0
        grid = grid[keep]
        order = np.argsort((grid * grid).sum(1), kind="stable")
        _BOX_CACHE[key] = grid[order][:limit]
    return _BOX_CACHE[key]


def _contains(P, x):
    if P._residue is not None:
        return sum(a * b for a, b in zip(P._residue, x)) % P.p == 0
    return not any(_hnf_reduce(P.hnf, x))


def _lll_rows(K, rows):
    B = np.array([[float(x) for x in r] for r in rows]) @ K.minkowski
    U = lll_transform(B)
    n = K.n
    return [[sum(U[i][k] * rows[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------- real quadratic cycles


def _qmul(a, b, D):
    x = a[0] * b[0] + a[1] * b[1] * D
    y = a[0] * b[1] + a[1] * b[0]
    z = a[2] * b[2]
    g = math.gcd(math.gcd(x, y), z)
    if z < 0:
        g = -g
    return (x // g, y // g, z // g)


def _qinv(a, D):
    x, y, z = a
    n = x * x - D * y * y
    return _qmul((z * x, -z * y, 1), (1, 0, n), D)


class _RealQuadraticCycles:
    """Continued-fraction cycles of ideal bases Z + Z(P + sqrt D)/Q in a real quadratic field.

    Two ideals are equivalent exactly when the periodic parts of the
    continued fractions of their basis quotients coincide.
    """

    def __init__(self, K: NumberField):
        self.K = K
        D = K.disc
        self.D = D
        self.s = math.isqrt(D)
        b = K.poly.coeffs[1]
        self.b = b
        self.idx = math.isqrt(K.poly_disc // D)
        u = K.to_power([0, 1])
        self.W = 2 * u[0] - u[1] * b
        self.v = u[1] * self.idx
        assert abs(self.v) == 1 and self.W.denominator == 1
        self.W = int(self.W)
        self.v = int(self.v)
        states, cum, start = self._walk(D % 2, 2, None)
        self.principal = {st: cum[i] for i, st in enumerate(states) if i >= start}

    def _floor(self, P, Q):
        if Q > 0:
            return (P + self.s) // Q
        return -((P + self.s) // (-Q)) - 1

    def _walk(self, P, Q, stop):
        """CF states from (P, Q) until a repeat or a state in ``stop``.

        Returns (states, cumulative psi products, index where the period starts or the hit index).
        """
        D = self.D
        seen = {}
        states = []
        cum = []
        psi = (1, 0, 1)
        while True:
            st = (P, Q)
            if stop is not None and st in stop:
                states.append(st)
                cum.append(psi)
                return states, cum, -1
            if st in seen:
                return states, cum, seen[st]
            seen[st] = len(states)
            states.append(st)
            cum.append(psi)
            a = self._floor(P, Q)
            P2 = a * Q - P
            Q2 = (D - P2 * P2) // Q
            psi = _qmul(psi, (-P2, 1, Q), D)
            P, Q = P2, Q2

    def ideal_form(self, rows):
        """(scale, P, Q) with a = scale * (Z + Z (P + sqrt D)/Q) for an integral ideal."""
        a00 = rows[0][0]
        a10, a11 = rows[1][0], rows[1][1]
        X = 2 * a10 + a11 * self.W
        Y = a11 * self.v
        if Y < 0:
            X, Y = -X, -Y
        c = Y
        A, r1 = divmod(a00, c)
        B, r2 = divmod(X, c)
        assert r1 == 0 and r2 == 0 and (self.D - B * B) % (4 * A) == 0
        return c * A, B, 2 * A

    def principal_generator(self, rows):
        """A generator (x, y, z) = (x + y sqrt D)/z of the ideal, or None if non-principal."""
        scale, P, Q = self.ideal_form(rows)
        states, cum, start = self._walk(P, Q, self.principal)
        if start != -1:
            return None
        st = states[-1]
        g = _qmul(cum[-1], _qinv(self.principal[st], self.D), self.D)
        return _qmul(g, (scale, 0, 1), self.D)

    def to_element(self, q):
        x, y, z = q
        # sqrt D = (2 theta + b) / idx
        c0 = Fraction(x, z) + Fraction(y * self.b, z * self.idx)
        c1 = Fraction(2 * y, z * self.idx)
        coords = self.K.from_power([c0, c1])
        assert all(c.denominator == 1 for c in coords)
        return [int(c) for c in coords]


# ---------------------------------------------------------------- class group


@dataclass
class ClassGroup:
    field: NumberField
    factor_base: list
    invariant_factors: list
    h: int
    certified: bool
    bound: int
    generator_coords: dict = field(default_factory=dict)
    units_log: list = field(default_factory=list)
    unit_rank_found: int = 0
    notes: list = field(default_factory=list)
    _engine: object = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def coords_of_prime(self, P: PrimeIdealFactor):
        return self._engine.prime_coords(P)

    def coords_of_factorization(self, exps):
        r = len(self.invariant_factors)
        out = [0] * r
        for P, e in exps:
            if e:
                c = self.coords_of_prime(P)
                for t in range(r):
                    out[t] += e * c[t]
        return tuple(x % d for x, d in zip(out, self.invariant_factors))

    def coords_of_ideal(self, a: FracIdeal):
        return self.coords_of_factorization(factor_ideal(a))

    def reduce(self, v):
        return tuple(x % d for x, d in zip(v, self.invariant_factors))

    def is_trivial(self, v) -> bool:
        return all(x % d == 0 for x, d in zip(v, self.invariant_factors))


def factor_ideal(a: FracIdeal):
    """[(P, v_P(a))] over all primes dividing the ideal."""
    K = a.field
    N = ideal_norm(a)
    N = Fraction(N)
    ps = set(factorint(N.numerator)) | set(factorint(N.denominator)) | set(factorint(a.den))
    out = []
    for p in sorted(ps):
        if p == 1:
            continue
        for P in decompose_prime(K, p):
            v = ideal_valuation(a, P)
            if v:
                out.append((P, v))
    return out


class _Engine:
    def __init__(self, K: NumberField, effort: RelationEffort):
        self.K = K
        self.n = K.n
        self.effort = effort
        self.rng = random.Random(effort.seed)
        self.r1, self.r2 = K.signature
        self.unit_rank = self.r1 + self.r2 - 1
        self.bound = K.minkowski_bound_exact()
        self.notes = []
        self._build_factor_base()
        self.expr = {}  # fb index -> dict dense index -> coeff
        self.dense = []  # fb indices of dense primes
        self.relations = []  # dense-coordinate relation vectors
        self._rel_seen = set()
        self.units_log = []
        self._collide = {}
        self._elt_logs = []
        self._ub_cache = (-1, [])
        self._echelon = {}
        self.extra_cache = {}
        self.rq = _RealQuadraticCycles(K) if (K.n == 2 and K.disc > 0) else None

    # -- factor base ------------------------------------------------------

    def _build_factor_base(self):
        K = self.K
        ram = set(factorint(abs(K.disc))) if abs(K.disc) > 1 else set()
        fb = []
        for p in sorted(set(primerange(2, self.bound + 1)) | ram):
            for P in decompose_prime(K, p):
                if P.norm <= self.bound or p in ram:
                    fb.append(P)
        fb.sort(key=lambda P: (P.norm, P.p, P.index))
        self.fb = fb
        self.pos = {P.key(): i for i, P in enumerate(fb)}
        self.fb_rat = sorted({P.p for P in fb})
        self.fb_rat_np = np.array(self.fb_rat, dtype=np.int64)
        self.complete_p = {p for p in self.fb_rat if all(Q.key() in self.pos for Q in decompose_prime(K, p))}

    # -- element search ---------------------------------------------------

    def candidates(self, rows, Na, H, limit=60000, primes=None):
        """Small elements of the ideal with rows whose norm is smooth over ``primes``.

        Returns a list of (alpha, |N(alpha)|) in order of increasing size.
        """
        K = self.K
        n = self.n
        R = _lll_rows(K, rows) if n > 1 else rows
        Rc = np.array([[float(x) for x in r] for r in R]) @ K.conj
        C = _coeff_box(n, H, limit)
        E = C @ Rc
        Nf = np.prod(np.abs(E) ** K.weights, axis=1)
        q = Nf / Na
        qi = np.rint(q)
        ok = (qi >= 1) & (np.abs(q - qi) < 1e-6 * np.maximum(1.0, q)) & (qi < 2.0**52)
        idx = np.nonzero(ok)[0]
        if len(idx) == 0:
            return []
        m = qi[idx].astype(np.int64)
        plist = self.fb_rat_np if primes is None else primes
        for p in plist:
            p = int(p)
            while True:
                d = m % p == 0
                if not d.any():
                    break
                m[d] //= p
        idx = idx[m == 1]
        out = []
        for i in idx:
            c = C[i]
            alpha = [sum(int(c[k]) * R[k][j] for k in range(n)) for j in range(n)]
            N = int(qi[i]) * Na
            if N >= 1 << 40:
                N = abs(K.norm(alpha))
            out.append((alpha, N))
        return out

    def factor_element(self, alpha, N, allow_outside=False):
        """Full valuation vector {P.key(): v} of alpha, given |N(alpha)|, or None if not smooth."""
        K = self.K
        rel = {}
        m = N
        ps = self.fb_rat if not allow_outside else sorted(factorint(m))
        for p in ps:
            if m % p:
                continue
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            above = decompose_prime(K, p)
            cont = [P for P in above if _contains(P, alpha)]
            if len(cont) == 1:
                P = cont[0]
                if k % P.f:
                    return None
                rel[P.key()] = k // P.f
            else:
                for P in cont:
                    v = valuation(K, P, alpha)
                    if v:
                        rel[P.key()] = v
            if not allow_outside:
                for key in rel:
                    if key[0] == p and key not in self.pos:
                        return None
            if m == 1:
                break
        if m != 1:
            return None
        return rel

    # -- dense projection ---------------------------------------------------

    def project(self, rel):
        """Dense-coordinate vector of a factor-base relation."""
        v = [0] * len(self.dense)
        for key, e in rel.items():
            i = self.pos[key]
            for d, c in self.expr[i].items():
                v[d] += e * c
        return v

    def add_relation(self, rel):
        v = self.project(rel)
        t = tuple(v)
        if any(v) and t not in self._rel_seen:
            self._rel_seen.add(t)
            self.relations.append(v)
            return True
        return False

    def note_unit_source(self, rel, alpha):
        if not rel:
            lg = self.K.log_embedding(alpha)
            self.units_log.append(lg)
            return
        key = tuple(sorted(rel.items()))
        lg = self.K.log_embedding(alpha)
        if key in self._collide:
            u = lg - self._collide[key]
            if np.max(np.abs(u)) > 1e-6:
                self.units_log.append(u)
            return
        self._collide[key] = lg
        if self.unit_rank and len(self.unit_basis()) < self.unit_rank:
            self._unit_from_dependency(rel, lg)

    def _unit_from_dependency(self, rel, lg):
        """Reduce a valuation vector against earlier ones; a dependency is a unit."""
        j = len(self._elt_logs)
        self._elt_logs.append(lg)
        vec = {k: Fraction(v) for k, v in rel.items()}
        coef = {j: Fraction(1)}
        for piv, (bvec, bcoef) in self._echelon.items():
            c = vec.get(piv)
            if not c:
                continue
            for k, x in bvec.items():
                y = vec.get(k, 0) - c * x
                if y:
                    vec[k] = y
                else:
                    vec.pop(k, None)
            for k, x in bcoef.items():
                y = coef.get(k, 0) - c * x
                if y:
                    coef[k] = y
                else:
                    coef.pop(k, None)
        if vec:
            piv = min(vec)
            inv = 1 / vec[piv]
            vec = {k: x * inv for k, x in vec.items()}
            coef = {k: x * inv for k, x in coef.items()}
            # keep the basis fully reduced so later reductions touch each pivot once
            for q, (bvec, bcoef) in self._echelon.items():
                c = bvec.get(piv)
                if c:
                    for k, x in vec.items():
                        y = bvec.get(k, 0) - c * x
                        if y:
                            bvec[k] = y
                        else:
                            bvec.pop(k, None)
                    for k, x in coef.items():
                        y = bcoef.get(k, 0) - c * x
                        if y:
                            bcoef[k] = y
                        else:
                            bcoef.pop(k, None)
            self._echelon[piv] = (vec, coef)
            return
        D = 1
        for x in coef.values():
            D = D * x.denominator // math.gcd(D, x.denominator)
        u = sum(float(x * D) * self._elt_logs[k] for k, x in coef.items())
        if np.max(np.abs(u)) > 1e-6:
            self.units_log.append(u)

    def make_dense(self, i):
        d = len(self.dense)
        self.dense.append(i)
        self.expr[i] = {d: 1}
        for r in self.relations:
            r.append(0)

    # -- elimination --------------------------------------------------------

    def _pO_expr(self, i):
        P = self.fb[i]
        if P.e != 1 or P.p not in self.complete_p:
            return None
        above = decompose_prime(self.K, P.p)
        if any(self.pos[Q.key()] > i for Q in above):
            return None
        ex = {}
        for Q in above:
            if Q is P:
                continue
            for d, c in self.expr[self.pos[Q.key()]].items():
                ex[d] = ex.get(d, 0) - Q.e * c
        return ex

    def _element_expr(self, P, limit_norm, resolve):
        """Rewrite [P] through alpha in P with (alpha) = P * (primes of smaller norm)."""
        K = self.K
        rows = [list(r) for r in P.hnf]
        for H in self.effort.elimination_heights:
            for alpha, N in self.candidates(rows, P.norm, H, primes=None if resolve is None else None):
                rel = self.factor_element(alpha, N)
                if rel is None:
                    continue
                if rel.get(P.key(), 0) != 1:
                    continue
                ok = True
                ex = {}
                for key, e in rel.items():
                    if key == P.key():
                        continue
                    j = self.pos.get(key)
                    if j is None or self.fb[j].norm > limit_norm or (self.fb[j].norm == limit_norm and j >= self.pos.get(P.key(), 10**9)):
                        ok = False
                        break
                    for d, c in self.expr[j].items():
                        ex[d] = ex.get(d, 0) - e * c
                if ok:
                    self.note_unit_source(rel, alpha)
                    return ex
        return None

    def eliminate(self):
        k0 = min(self.effort.dense_size, len(self.fb))
        for i in range(k0):
            self.make_dense(i)
        for i in range(k0, len(self.fb)):
            ex = self._pO_expr(i)
            if ex is None:
                ex = self._element_expr(self.fb[i], self.fb[i].norm, None)
            if ex is None:
                self.make_dense(i)
            else:
                self.expr[i] = ex

    # -- relation search ----------------------------------------------------

    def trivial_relations(self):
        K = self.K
        for p in sorted(self.complete_p):
            rel = {Q.key(): Q.e for Q in decompose_prime(K, p)}
            self.add_relation(rel)

    def search_round(self, rnd):
        K = self.K
        n = self.n
        one = [[int(i == j) for j in range(n)] for i in range(n)]
        H = self.effort.search_height + rnd // 3
        found = 0
        if rnd == 0 or rnd % 3 == 0:
            for alpha, N in self.candidates(one, 1, H, limit=20000):
                rel = self.factor_element(alpha, N)
                if rel is None:
                    continue
                self.note_unit_source(rel, alpha)
                if rel and self.add_relation(rel):
                    found += 1
        if not self.dense:
            return found
        target = 2 * len(self.dense) + 4
        for _ in range(self.effort.products_per_round):
            if rnd == 0 and len(self.relations) >= target:
                break
            k = self.rng.randint(1, min(3, len(self.dense)))
            picks = [self.rng.choice(self.dense) for _ in range(k)]
            exps = {}
            for i in picks:
                exps[i] = exps.get(i, 0) + 1
            a = ideal_from_factorization(K, [(self.fb[i], e) for i, e in exps.items()])
            rows = [list(r) for r in a.num]
            Na = ideal_norm(a)
            got = 0
            for alpha, N in self.candidates(rows, Na, 1 + rnd // 4, limit=4000):
                rel = self.factor_element(alpha, N)
                if rel is None:
                    continue
                self.note_unit_source(rel, alpha)
                if self.add_relation(rel):
                    found += 1
                    got += 1
                    if got >= 3:
                        break
        return found

    def lattice(self):
        k = len(self.dense)
        if k == 0:
            return []
        if len(self.relations) < k or rank_mod_p(self.relations) < k:
            return None
        return hnf(self.relations, k)

    # -- group structure ----------------------------------------------------

    def set_structure(self, H):
        self.H = H
        self.smith = smith_from_hnf(H) if H else None
        self.invariants = self.smith.invariants if H else []
        self.h = math.prod(self.invariants)

    def dense_vector(self, i):
        v = [0] * len(self.dense)
        for d, c in self.expr[i].items():
            v[d] += c
        return v

    def fb_coords(self, i):
        if not self.invariants:
            return ()
        return self.smith.coords(self.dense_vector(i))

    def prime_coords(self, P: PrimeIdealFactor):
        if not self.invariants:
            return ()
        i = self.pos.get(P.key())
        if i is not None:
            return self.fb_coords(i)
        key = P.key()
        if key in self.extra_cache:
            return self.extra_cache[key]
        c = self._extra_coords(P, 0)
        self.extra_cache[key] = c
        return c

    def _extra_coords(self, P, depth):
        """Class coordinates of a prime outside the factor base by descent."""
        K = self.K
        r = len(self.invariants)
        above = decompose_prime(K, P.p)
        # pO relation for the last prime above p
        if P.e == 1 and P is above[-1] and len(above) > 1:
            acc = [0] * r
            for Q in above[:-1]:
                c = self.prime_coords(Q)
                for t in range(r):
                    acc[t] -= Q.e * c[t]
            return self.reduce(acc)
        if len(above) == 1 and P.e == 1:
            return (0,) * r
        rows = [list(row) for row in P.hnf]
        # cofactors must have smaller norm, so only primes up to p can divide them
        small = np.array(list(primerange(2, P.p + 1)), dtype=np.int64)
        for H in tuple(self.effort.elimination_heights) + (4, 5):
            cands = self.candidates(rows, P.norm, H, primes=small)
            for alpha, N in cands:
                rel = self.factor_element(alpha, N, allow_outside=True)
                if rel is None or rel.get(P.key(), 0) != 1:
                    continue
                keys = [key for key in rel if key != P.key()]
                if any(self._norm_of_key(key) >= P.norm for key in keys):
                    continue
                acc = [0] * r
                for key in keys:
                    Q = decompose_prime(K, key[0])[key[1]]
                    c = self.prime_coords(Q)
                    for t in range(r):
                        acc[t] -= rel[key] * c[t]
                return self.reduce(acc)
        raise NotSmooth(f"could not express a prime above {P.p} through smaller primes")

    def _norm_of_key(self, key):
        return decompose_prime(self.K, key[0])[key[1]].norm

    def reduce(self, v):
        return tuple(x % d for x, d in zip(v, self.invariants))

    # -- certification ------------------------------------------------------

    def unit_basis(self):
        r = self.unit_rank
        if r == 0:
            return []
        if self._ub_cache[0] == len(self.units_log):
            return self._ub_cache[1]
        logs = sorted(self.units_log, key=lambda u: float(np.linalg.norm(u)))
        basis = []
        for u in logs:
            cand = basis + [u]
            if np.linalg.matrix_rank(np.array(cand), tol=1e-7) == len(cand):
                basis.append(u)
                if len(basis) == r:
                    break
        self._ub_cache = (len(self.units_log), basis)
        return basis

    def _representatives(self, targets):
        """Minimal-norm positive products of factor-base primes hitting each target class."""
        gens = []
        seen = set()
        for i, P in enumerate(self.fb):
            c = self.fb_coords(i)
            if any(c) and c not in seen:
                seen.add(c)
                gens.append((math.log(P.norm), c, i))
        start = tuple([0] * len(self.invariants))
        dist = {start: (0.0, ())}
        heap = [(0.0, start)]
        found = {}
        remaining = set(targets)
        while heap and remaining:
            d, node = heapq.heappop(heap)
            if dist[node][0] < d:
                continue
            if node in remaining:
                found[node] = dist[node][1]
                remaining.discard(node)
            for w, c, i in gens:
                nxt = self.reduce([a + b for a, b in zip(node, c)])
                nd = d + w
                if nxt not in dist or dist[nxt][0] > nd + 1e-12:
                    dist[nxt] = (nd, dist[node][1] + (i,))
                    heapq.heappush(heap, (nd, nxt))
        return found

    def torsion_lines(self, q):
        d = self.invariants
        ts = [t for t in range(len(d)) if d[t] % q == 0]
        lines = []
        for u in product(range(q), repeat=len(ts)):
            nz = [x for x in u if x]
            if not nz or nz[0] != 1:
                continue
            v = [0] * len(d)
            for t, x in zip(ts, u):
                v[t] = x * (d[t] // q)
            lines.append(tuple(v))
        return lines

    def principal_test(self, a: FracIdeal, need_witness=True):
        """Decide principality of an integral ideal: ('yes', alpha) / ('no', None) / ('unknown', None)."""
        K = self.K
        rows = [list(r) for r in a.num]
        Na = ideal_norm(a)
        if self.n == 1:
            return "yes", [rows[0][0]]
        if self.rq is not None:
            g = self.rq.principal_generator(rows)
            if g is None:
                return "no", None
            return "yes", self.rq.to_element(g)
        basis = self.unit_basis()
        if len(basis) < self.unit_rank:
            return "unknown", None
        delta = np.zeros(self.r1 + self.r2)
        for u in basis:
            delta += 0.5 * np.abs(u)
        # unit logs are float sums of exact combinations: allow for rounding
        delta += 1e-6
        bound = Na ** (2.0 / self.n) * float(np.sum(K.weights * np.exp(2 * delta)))
        bound = bound * (1 + 1e-7) + 1e-7
        R = _lll_rows(K, rows)
        Bm = np.array([[float(x) for x in r] for r in R]) @ K.minkowski
        gram = Bm @ Bm.T
        vecs, complete = fincke_pohst(gram, bound, limit=self.effort.enum_nodes)
        vecs.sort(key=lambda t: t[1])
        for x, _ in vecs:
            alpha = [sum(x[k] * R[k][j] for k in range(self.n)) for j in range(self.n)]
            nf = abs(K.float_norm(alpha))
            if abs(nf - Na) <= 1e-6 * Na + 0.5:
                if abs(K.norm(alpha)) == Na:
                    return "yes", alpha
        if not complete:
            return "unknown", None
        return "no", None

    def certify(self):
        """Return (certified, new_relation_added)."""
        if self.h == 1:
            return True, False
        for q in sorted(factorint(self.h)):
            lines = self.torsion_lines(q)
            reps = self._representatives(lines)
            for line in lines:
                if line not in reps:
                    self.notes.append("no factor-base product represents a torsion class")
                    return False, False
                picks = reps[line]
                exps = {}
                for i in picks:
                    exps[i] = exps.get(i, 0) + 1
                a = ideal_from_factorization(self.K, [(self.fb[i], e) for i, e in exps.items()])
                status, alpha = self.principal_test(a)
                if status == "yes":
                    rel = {self.fb[i].key(): e for i, e in exps.items()}
                    self.add_relation(rel)
                    return False, True
                if status == "unknown":
                    self.notes.append(f"principality of a {q}-torsion class left undecided")
                    return False, False
        return True, False


def class_group(K: NumberField, relation_effort: RelationEffort | None = None) -> ClassGroup:
    """Class group of K from factor-base relations, with a certification flag."""
    effort = relation_effort or RelationEffort()
    if K.n == 1:
        return ClassGroup(K, [], [], 1, True, 1, {}, [], 0, [], _TrivialEngine())
    eng = _Engine(K, effort)
    eng.eliminate()
    eng.trivial_relations()
    H = None
    last_h = None
    stable = 0
    rnd = 0
    certified = False
    while rnd < effort.max_rounds:
        eng.search_round(rnd)
        rnd += 1
        H = eng.lattice()
        if H is None:
            continue
        h = 1
        for i in range(len(H)):
            h *= H[i][i]
        if h == last_h:
            stable += 1
        else:
            stable = 0
            last_h = h
        eng.set_structure(H)
        if effort.certify:
            certified, added = eng.certify()
            if certified:
                break
            if added:
                stable = 0
                last_h = None
                continue
            if len(eng.unit_basis()) < eng.unit_rank:
                # undecided for lack of units: keep collecting elements
                continue
        if stable + 1 >= effort.stable_rounds:
            break
    if H is None:
        partial = ClassGroup(K, eng.fb, [], 0, False, eng.bound, {}, eng.units_log, 0, eng.notes, eng)
        raise RelationSearchIncomplete("relation lattice never reached full rank", partial)
    if not hasattr(eng, "H") or eng.H is not H:
        eng.set_structure(H)
    eng.notes = list(dict.fromkeys(eng.notes))
    coords = {P.key(): eng.fb_coords(i) for i, P in enumerate(eng.fb)}
    cg = ClassGroup(
        K,
        eng.fb,
        list(eng.invariants),
        eng.h,
        certified and effort.certify,
        eng.bound,
        coords,
        eng.units_log,
        len(eng.unit_basis()),
        eng.notes,
        eng,
    )
    return cg


class _TrivialEngine:
    invariants = []

    def prime_coords(self, P):
        return ()


def is_principal(K: NumberField, a: FracIdeal, cg: ClassGroup):
    """(True, generator) or (False, None); the generator satisfies (alpha) = a."""
    if a.field != K:
        from ..errors import FieldMismatch

        raise FieldMismatch("ideal and class group belong to different fields")
    c = cg.coords_of_ideal(a)
    if not cg.is_trivial(c):
        return False, None
    if K.n == 1:
        return True, [Fraction(ideal_norm(a))]
    num = FracIdeal(K, a.num, 1)
    eng = cg._engine
    status, alpha = eng.principal_test(num)
    if status == "yes":
        assert principal_ideal(K, alpha) == num
        if a.den != 1:
            return True, [Fraction(x, a.den) for x in alpha]
        return True, alpha
    if status == "no":
        # contradiction with a certified class group would be a bug
        from ..errors import InternalInconsistency

        raise InternalInconsistency("class coordinates vanish but the ideal has no generator")
    return True, None
