"""Integer linear algebra for finite abelian groups.

A subgroup of ``A = Z/m_1 + ... + Z/m_N`` is stored as the full-rank lattice
``L`` with ``diag(m) Z^N <= L <= Z^N``.  Its basis is kept in an upper
triangular echelon form whose diagonal entries divide the moduli, with all
entries reduced modulo the column modulus.  Because ``diag(m) Z^N`` always
lies in the lattice, reductions modulo the moduli never change the subgroup,
which keeps every intermediate entry small.

Smith normal form is done over Python integers (exact, arbitrary precision).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional
from functools import reduce
from math import gcd, prod

import numpy as np


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def lcm(*xs: int) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), xs, 1)


# ---------------------------------------------------------------------------
# Smith normal form over Z


def smith_normal_form(A, want_transforms: bool = True):
    """Smith normal form of an integer matrix.

    Returns ``(diag, U, V, Vinv)`` where ``U @ A @ V`` is diagonal with
    ``diag`` on the diagonal, each entry dividing the next, all entries
    non-negative.  ``U`` and ``V`` are unimodular; ``Vinv`` is the inverse of
    ``V``.  The length of ``diag`` is ``min(rows, cols)``.  Matrices are lists
    of lists of Python ints.
    """
    D = [[int(x) for x in row] for row in A]
    m = len(D)
    n = len(D[0]) if m else 0
    U = _identity(m) if want_transforms else None
    V = _identity(n) if want_transforms else None
    Vi = _identity(n) if want_transforms else None

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_add(dst, src, q):
        # row_dst += q * row_src
        if q == 0:
            return
        rs, rd = D[src], D[dst]
        for k in range(n):
            if rs[k]:
                rd[k] += q * rs[k]
        if U is not None:
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] += q * us[k]

    def col_add(dst, src, q):
        # col_dst += q * col_src
        if q == 0:
            return
        for row in D:
            if row[src]:
                row[dst] += q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]
            # inverse: row_src(Vinv) -= q * row_dst(Vinv)
            vs, vd = Vi[src], Vi[dst]
            for k in range(n):
                if vd[k]:
                    vs[k] -= q * vd[k]

    def row_combine(i, j, s, t, a, b):
        # (row_i, row_j) <- (s row_i + t row_j, a row_j - b row_i); det = s*a + t*b = 1
        ri, rj = D[i], D[j]
        D[i] = [s * x + t * y for x, y in zip(ri, rj)]
        D[j] = [a * y - b * x for x, y in zip(ri, rj)]
        if U is not None:
            ui, uj = U[i], U[j]
            U[i] = [s * x + t * y for x, y in zip(ui, uj)]
            U[j] = [a * y - b * x for x, y in zip(ui, uj)]

    def col_combine(i, j, s, t, a, b):
        # (col_i, col_j) <- (s col_i + t col_j, a col_j - b col_i)
        for row in D:
            x, y = row[i], row[j]
            row[i], row[j] = s * x + t * y, a * y - b * x
        if V is not None:
            for row in V:
                x, y = row[i], row[j]
                row[i], row[j] = s * x + t * y, a * y - b * x
            # inverse of [[s, -b], [t, a]] (acting on columns) is [[a, b], [-t, s]]
            xi, xj = Vi[i], Vi[j]
            Vi[i] = [a * x + b * y for x, y in zip(xi, xj)]
            Vi[j] = [-t * x + s * y for x, y in zip(xi, xj)]

    r = min(m, n)
    t = 0
    while t < r:
        # pivot: smallest nonzero absolute value in the trailing block
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)
        while True:
            # clear column t
            for i in range(t + 1, m):
                b = D[i][t]
                if b == 0:
                    continue
                a = D[t][t]
                if b % a == 0:
                    row_add(i, t, -(b // a))
                else:
                    g, s, u = egcd(a, b)
                    row_combine(t, i, s, u, a // g, b // g)
            # clear row t
            for j in range(t + 1, n):
                b = D[t][j]
                if b == 0:
                    continue
                a = D[t][t]
                if b % a == 0:
                    col_add(j, t, -(b // a))
                else:
                    g, s, u = egcd(a, b)
                    col_combine(t, j, s, u, a // g, b // g)
            if any(D[i][t] for i in range(t + 1, m)):
                continue
            a = D[t][t]
            bad = None
            for i in range(t + 1, m):
                row = D[i]
                for j in range(t + 1, n):
                    if row[j] % a:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    diag = [D[i][i] if i < m and i < n else 0 for i in range(r)]
    return diag, U, V, Vi


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def invariant_factors(A) -> list[int]:
    """Non-unit diagonal entries of the Smith form of ``A`` (0 for free rank)."""
    diag, *_ = smith_normal_form(A, want_transforms=False)
    return [d for d in diag if d != 1]


def abelian_invariants_from_relations(relations, ngens: int) -> list[int]:
    """Invariant factors of ``Z^ngens / rowspace(relations)`` (0 means Z)."""
    if not relations:
        return [0] * ngens
    diag, *_ = smith_normal_form(relations, want_transforms=False)
    diag = diag + [0] * (ngens - len(diag))
    return [d for d in diag if d != 1]


# ---------------------------------------------------------------------------
# Subgroups of a finite abelian group


_KERNEL_BLOCK = 256


def _echelon(gens: np.ndarray, moduli: np.ndarray) -> np.ndarray:
    """Echelon basis of the lattice spanned by ``gens`` and ``diag(moduli)``."""
    N = len(moduli)
    if N == 0:
        return np.zeros((0, 0), dtype=np.int64)
    rows = np.array(gens, dtype=np.int64).reshape(-1, N) % moduli
    rows = rows[np.any(rows != 0, axis=1)]
    basis = np.zeros((N, N), dtype=np.int64)
    for j in range(N):
        mj = int(moduli[j])
        piv = np.zeros(N, dtype=np.int64)
        piv[j] = mj
        if len(rows):
            col = rows[:, j]
            nz = np.flatnonzero(col)
            if len(nz):
                target = mj
                for v in col[nz]:
                    target = gcd(target, int(v))
                used = []
                for k in nz:
                    if piv[j] == target:
                        break
                    a, b = int(piv[j]), int(rows[k, j])
                    g, s, t = egcd(a, b)
                    newp = s * piv + t * rows[k]
                    rows[k] = (a // g) * rows[k] - (b // g) * piv
                    piv = newp
                    piv[j + 1:] %= moduli[j + 1:]
                    rows[k] %= moduli
                    used.append(k)
                q = rows[:, j] // piv[j]
                rows -= np.outer(q, piv)
                rows %= moduli
                rows = rows[np.any(rows != 0, axis=1)]
        piv[j + 1:] %= moduli[j + 1:]
        basis[j] = piv
    return basis


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup of ``Z/m_1 + ... + Z/m_N``; see module docstring."""

    moduli: np.ndarray
    basis: np.ndarray

    @classmethod
    def generated(cls, gens, moduli) -> "Subgroup":
        moduli = np.asarray(moduli, dtype=np.int64)
        gens = np.asarray(gens, dtype=np.int64)
        gens = gens.reshape(-1, len(moduli)) if len(moduli) else np.zeros((0, 0), dtype=np.int64)
        return cls(moduli, _echelon(gens, moduli))

    @classmethod
    def whole(cls, moduli) -> "Subgroup":
        moduli = np.asarray(moduli, dtype=np.int64)
        return cls(moduli, np.eye(len(moduli), dtype=np.int64))

    @classmethod
    def zero(cls, moduli) -> "Subgroup":
        moduli = np.asarray(moduli, dtype=np.int64)
        return cls(moduli, np.diag(moduli))

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.basis)

    def order(self) -> int:
        return prod(int(m) // int(d) for m, d in zip(self.moduli, self.diagonal))

    def generators(self) -> np.ndarray:
        """Basis rows that are not already in ``diag(m) Z^N``."""
        keep = self.diagonal != self.moduli
        return self.basis[keep] % self.moduli

    def contains(self, v) -> bool:
        v = np.array(v, dtype=np.int64) % self.moduli
        for j in range(self.rank):
            d = self.basis[j, j]
            if v[j] % d:
                return False
            v = (v - (v[j] // d) * self.basis[j]) % self.moduli
        return True

    def __le__(self, other: "Subgroup") -> bool:
        return all(other.contains(g) for g in self.generators())

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup)
                and np.array_equal(self.moduli, other.moduli)
                and np.array_equal(self.basis, other.basis))

    def __hash__(self):
        return hash((self.moduli.tobytes(), self.basis.tobytes()))

    def __add__(self, other: "Subgroup") -> "Subgroup":
        return Subgroup.generated(np.vstack([self.basis, other.basis]), self.moduli)

    def kernel(self, A, cod_moduli) -> "Subgroup":
        """``{x in self : A x = 0 in Z/n_1 + ... + Z/n_M}``.

        ``A`` must define a homomorphism, i.e. ``n_i | A[i, j] * m_j``.
        """
        A = np.asarray(A, dtype=np.int64)
        cod = np.asarray(cod_moduli, dtype=np.int64)
        if A.size == 0:
            return self
        bad = (A * self.moduli[None, :]) % cod[:, None]
        if np.any(bad):
            i, j = np.argwhere(bad)[0]
            raise ValueError(f"matrix entry ({i},{j}) is not a homomorphism for the given moduli")
        gens = self.basis.copy()
        N = self.rank
        # float64 products are exact while N * max(m) * max(n) < 2^53
        exact_float = N * int(self.moduli.max(initial=1)) * int(cod.max(initial=1)) < 2 ** 50
        for start in range(0, len(A), _KERNEL_BLOCK):
            blk, nb = A[start:start + _KERNEL_BLOCK] % cod[start:start + _KERNEL_BLOCK, None], \
                cod[start:start + _KERNEL_BLOCK]
            if exact_float:
                W = np.rint(gens.astype(np.float64) @ blk.T.astype(np.float64)).astype(np.int64) % nb
            else:
                W = (gens.astype(object) @ blk.T.astype(object)) % nb.astype(object)
                W = W.astype(np.int64)
            for k in range(len(blk)):
                n = int(nb[k])
                vals = W[:, k] % n
                nz = np.flatnonzero(vals)
                if not len(nz):
                    continue
                target = n
                for v in vals[nz]:
                    target = gcd(target, int(v))
                p = int(nz[0])
                for j in nz[1:]:
                    if vals[p] == target:
                        break
                    x, y = int(vals[p]), int(vals[j])
                    g, s_, t_ = egcd(x, y)
                    for M, mod in ((gens, self.moduli), (W, nb)):
                        newp = s_ * M[p] + t_ * M[j]
                        M[j] = ((x // g) * M[j] - (y // g) * M[p]) % mod
                        M[p] = newp % mod
                    vals[j] = 0
                    vals[p] = g
                vals = W[:, k] % n
                g0 = int(vals[p])
                q = vals // g0
                q[p] = 0
                mult = n // gcd(g0, n)
                for M, mod in ((gens, self.moduli), (W, nb)):
                    M -= np.outer(q, M[p])
                    M[p] *= mult
                    M %= mod
        return Subgroup.generated(gens, self.moduli)

    def image(self, A, cod_moduli) -> "Subgroup":
        """Image of this subgroup under the homomorphism with matrix ``A``."""
        A = np.asarray(A, dtype=np.int64)
        cod = np.asarray(cod_moduli, dtype=np.int64)
        return Subgroup.generated((self.basis @ A.T) % cod, cod)

    def coordinates(self, v, reduce: bool = True) -> list[int]:
        """Integer coefficients ``c`` with ``c @ basis == v`` (v must be a member).

        With ``reduce=False`` the equality holds in ``Z^N`` rather than modulo
        the moduli.
        """
        v = np.array(v, dtype=object)
        if reduce:
            v = v % self.moduli.astype(object)
        c = []
        for j in range(self.rank):
            d = int(self.basis[j, j])
            vj = int(v[j])
            if vj % d:
                raise ValueError("vector is not in the subgroup")
            q = vj // d
            c.append(q)
            v = v - q * self.basis[j].astype(object)
        return c

    def is_whole(self) -> bool:
        return bool(np.all(self.diagonal == 1))

    def generator_coordinates(self, V) -> np.ndarray:
        """Coefficients of rows of ``V`` on :meth:`generators` (members only)."""
        V = np.array(V, dtype=np.int64).reshape(-1, self.rank) % self.moduli
        keep = np.flatnonzero(self.diagonal != self.moduli)
        C = np.zeros((len(V), len(keep)), dtype=np.int64)
        for i, j in enumerate(keep):
            d = int(self.basis[j, j])
            if np.any(V[:, j] % d):
                raise ValueError("vector is not in the subgroup")
            C[:, i] = V[:, j] // d
            V = (V - np.outer(C[:, i], self.basis[j])) % self.moduli
        if np.any(V):
            raise ValueError("vector is not in the subgroup")
        return C

    def quotient(self, sub: "Subgroup") -> "Quotient":
        """Structure of ``self / sub``; ``sub`` must be contained in ``self``.

        ``A / sub`` is computed first (cheap, the ambient basis is the
        identity).  The generators of ``self`` map into it, and the quotient
        is the subgroup they generate there, presented as ``(Z/e)^k`` modulo
        the relations among the generator images.
        """
        if self.is_whole():
            return _ambient_quotient(self.moduli, sub)
        gens = self.generators()
        k = len(gens)
        e = max(lcm(*[int(m) for m in self.moduli]), 1)
        free = Subgroup.whole([e] * k)
        # relations: combinations of the generators that vanish, plus sub written on them
        rel = free.kernel(gens.T, self.moduli) if k else free
        sgens = sub.generators()
        if len(sgens):
            rel = rel + Subgroup.generated(self.generator_coordinates(sgens) % e, free.moduli)
        Q2 = _ambient_quotient(free.moduli, rel)
        reps = [(r @ gens) % self.moduli for r in Q2.representatives]
        cols = np.array(Q2._columns, dtype=np.int64).reshape(len(Q2.factors), k).T
        return Quotient(self, sub, list(Q2.factors), reps, list(Q2._columns), gens, cols, e)


def _ambient_quotient(moduli, sub: "Subgroup") -> "Quotient":
    """``(Z/m_1 + ... + Z/m_N) / sub`` by unit pivots and a dense Smith form on the rest."""
    moduli = np.asarray(moduli, dtype=np.int64)
    N = len(moduli)
    top = Subgroup.whole(moduli)
    e = max(lcm(*[int(m) for m in moduli]), 1) if N else 1
    if N == 0:
        return Quotient(top, sub, [], [], [])
    M = np.vstack([sub.basis % e, np.diag(moduli), e * np.eye(N, dtype=np.int64)]) % e
    M = M[np.any(M != 0, axis=1)]
    V = np.eye(N, dtype=np.int64)
    Vi = np.eye(N, dtype=np.int64)
    live_r = np.ones(len(M), dtype=bool)
    live_c = np.ones(N, dtype=bool)
    while True:
        rows = np.flatnonzero(live_r)
        cols = np.flatnonzero(live_c)
        sub_m = M[np.ix_(rows, cols)]
        hit = np.argwhere(np.gcd(sub_m, e) == 1)
        if not len(hit):
            break
        i, j = rows[hit[0, 0]], cols[hit[0, 1]]
        if M[i, j] != 1:
            # scaling by a unit mod e keeps the lattice, which contains e Z^N
            M[i] = (M[i] * pow(int(M[i, j]), -1, e)) % e
        row = M[i].copy()
        row[j] = 0
        # column ops col_k -= row[k] col_j, mirrored on V and V^-1
        M -= np.outer(M[:, j], row)
        V -= np.outer(V[:, j], row)
        Vi[j] += row @ Vi
        col = M[:, j].copy()
        col[i] = 0
        M -= np.outer(col, M[i])
        M %= e
        V %= e
        Vi %= e
        live_r[i] = False
        live_c[j] = False
    R = np.flatnonzero(live_c)
    rest = M[np.ix_(np.flatnonzero(live_r), R)]
    rest = rest[np.any(rest != 0, axis=1)]
    rest = np.vstack([rest, e * np.eye(len(R), dtype=np.int64)])
    diag, _, Vs, Vsi = smith_normal_form(rest.tolist())
    Vs = np.array(Vs, dtype=object).reshape(len(R), len(R))
    Vsi = np.array(Vsi, dtype=object).reshape(len(R), len(R))
    Vfull = (V[:, R].astype(object) @ Vs) % e if len(R) else np.zeros((N, 0), dtype=object)
    Vifull = (Vsi @ Vi[R].astype(object)) % e if len(R) else np.zeros((0, N), dtype=object)
    reps, factors, keep = [], [], []
    for i, d in enumerate(diag[:len(R)]):
        if d != 1:
            keep.append(i)
            factors.append(int(d))
            reps.append(np.array([int(x) % int(m) for x, m in zip(Vifull[i], moduli)], dtype=np.int64))
    Vkeep = [[int(x) for x in Vfull[:, i]] for i in keep]
    return Quotient(top, sub, factors, reps, Vkeep)


@dataclass(frozen=True, eq=False)
class Quotient:
    """``top / sub`` in invariant-factor form with representative vectors.

    When ``top`` is not the whole ambient group, elements are first written
    on the generators of ``top`` (``_gens``) and ``_gcols`` maps those
    coefficients to invariant-factor coordinates.
    """

    top: Subgroup
    sub: Subgroup
    factors: list
    representatives: list
    _columns: list
    _gens: Optional[np.ndarray] = None
    _gcols: Optional[np.ndarray] = None
    _e: int = 1

    def order(self) -> int:
        return prod(self.factors)

    def classes(self, V) -> np.ndarray:
        """Invariant-factor coordinates of ``v + sub`` for each row ``v`` of ``V``."""
        V = np.array(V, dtype=np.int64).reshape(-1, self.top.rank)
        f = np.array(self.factors, dtype=object)
        if not self.factors:
            return np.zeros((len(V), 0), dtype=np.int64)
        if self._gens is None:
            C = (V % self.top.moduli).astype(object) @ np.array(self._columns, dtype=object).T
        else:
            G = self.top.generator_coordinates(V) % self._e
            C = G.astype(object) @ self._gcols.astype(object)
        return (C % f).astype(np.int64)

    def class_of(self, v) -> tuple[int, ...]:
        """Coordinates of ``v + sub`` with respect to the invariant factors."""
        return tuple(int(x) for x in self.classes(v)[0])

    def element(self, coords) -> np.ndarray:
        v = np.zeros(self.top.rank, dtype=np.int64)
        for c, r in zip(coords, self.representatives):
            v = (v + int(c) * r) % self.top.moduli
        return v

    def elements(self):
        """All classes, as ``(coords, representative vector)`` pairs."""
        import itertools
        for coords in itertools.product(*[range(d) for d in self.factors]):
            yield coords, self.element(coords)


# ---------------------------------------------------------------------------
# linear systems and finite presentations


def solve_mod(A, b, dom_moduli, cod_moduli):
    """One solution ``x`` of ``A x = b`` in ``Z/n_1 + ... + Z/n_M``, or None.

    ``x`` ranges over ``Z/m_1 + ... + Z/m_N`` (``dom_moduli``).  The trick:
    the kernel of ``(t, x) -> A x - t b`` on ``Z/L + dom`` with ``L`` the lcm
    of the codomain moduli projects onto ``t``; a solution exists iff that
    projection hits 1.
    """
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).ravel()
    dom = np.asarray(dom_moduli, dtype=np.int64)
    cod = np.asarray(cod_moduli, dtype=np.int64)
    if not np.any(b % cod):
        return np.zeros(len(dom), dtype=np.int64)
    if A.size == 0:
        return None
    L = lcm(*[int(n) for n in cod]) if len(cod) else 1
    big = np.hstack([(-b % cod)[:, None], A % cod[:, None]])
    K = Subgroup.whole(np.concatenate([[L], dom])).kernel(big, cod)
    if K.basis[0, 0] != 1:
        return None
    return K.basis[0, 1:] % dom


def presentation_quotient(rows, ncols: int, exponent: int):
    """``Z^ncols / (span(rows) + exponent Z^ncols)`` in invariant-factor form.

    ``rows`` is an iterable of sparse relations ``{column: coefficient}``.
    Returns ``(factors, coords)`` where ``coords[c]`` is the image of the
    c-th generator in ``Z/factors[0] + ...``.  The relations are put into
    echelon form incrementally (pivot = smallest column), unit pivots are
    back-substituted, and only the leftover columns go through a dense Smith
    normal form.
    """
    E = int(exponent)
    piv: dict[int, dict[int, int]] = {}

    def combine(s, p, t, q):
        out = {}
        for k, v in p.items():
            out[k] = s * v
        for k, v in q.items():
            out[k] = out.get(k, 0) + t * v
        return {k: v % E for k, v in out.items() if v % E}

    for r in rows:
        r = {k: v % E for k, v in r.items() if v % E}
        while r:
            c = min(r)
            b = r[c]
            if c in piv:
                p = piv[c]
                a = p[c]
                if b % a == 0:
                    r = combine(1, r, -(b // a), p)
                else:
                    g, s, t = egcd(a, b)
                    piv[c] = combine(s, p, t, r)
                    r = combine(a // g, r, -(b // g), p)
            else:
                g, s, _ = egcd(b, E)
                newp = combine(s, r, 0, {})
                newp[c] = g
                piv[c] = newp
                r = combine(E // g, r, 0, {})
    survivors = [c for c in range(ncols) if c not in piv or piv[c][c] != 1]
    pos = {c: i for i, c in enumerate(survivors)}
    S = len(survivors)
    express = np.zeros((ncols, S), dtype=np.int64)
    for c in range(ncols - 1, -1, -1):
        if c in pos:
            express[c, pos[c]] = 1
        else:
            p = piv[c]
            acc = np.zeros(S, dtype=np.int64)
            for k, v in p.items():
                if k != c:
                    acc -= v * express[k]
            express[c] = acc % E
    rel = []
    for c in survivors:
        if c in piv:
            acc = np.zeros(S, dtype=np.int64)
            for k, v in piv[c].items():
                acc += v * express[k]
            rel.append((acc % E).tolist())
    rel += (E * np.eye(S, dtype=np.int64)).tolist()
    if S == 0:
        return [], np.zeros((ncols, 0), dtype=np.int64)
    diag, _, V, _ = smith_normal_form(rel)
    V = np.array(V, dtype=object)
    keep = [i for i, d in enumerate(diag) if d != 1]
    factors = [int(diag[i]) for i in keep]
    C = express.astype(object) @ V[:, keep]
    coords = np.array([[int(x) % d for x, d in zip(row, factors)] for row in C],
                      dtype=np.int64).reshape(ncols, len(keep))
    return factors, coords
