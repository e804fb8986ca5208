"""Finite groups as dense multiplication tables.

Elements are the indices ``0..n-1``; index 0 is always the identity.  Tables are
read-only ``int32`` numpy arrays so a group can be shared freely.

Permutations follow the left-to-right convention ``(p*q)(i) = q(p(i))``:
``p`` acts first.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Optional, Sequence

import numpy as np

from .errors import (CapExceeded, InvalidParameter, NoIdentity, NoInverse,
                     NotAssociative, NotNormal, NotSubgroup)

TABLE_CAP = 512
PERM_CAP = 4096


def _frozen(a) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int32)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    mul: np.ndarray
    labels: tuple
    name: str = ""
    perms: Optional[np.ndarray] = field(default=None, repr=False)

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    @property
    def order(self) -> int:
        return len(self.mul)

    @property
    def id(self) -> int:
        return 0

    @cached_property
    def inv(self) -> np.ndarray:
        rows, cols = np.nonzero(self.mul == 0)
        out = np.empty(self.order, dtype=np.int32)
        out[rows] = cols
        return _frozen(out)

    def op(self, a, b):
        return self.mul[a, b]

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = int(self.inv[x]), -k
        r, base = 0, int(x)
        while k:
            if k & 1:
                r = int(self.mul[r, base])
            base = int(self.mul[base, base])
            k >>= 1
        return r

    def powers(self, k: int) -> np.ndarray:
        """``x -> x^k`` for all elements at once."""
        out = np.zeros(self.order, dtype=np.int32)
        base = np.arange(self.order, dtype=np.int32)
        if k < 0:
            base, k = self.inv.copy(), -k
        while k:
            if k & 1:
                out = self.mul[out, base]
            base = self.mul[base, base]
            k >>= 1
        return out

    def conj(self, x, y):
        """``x^y = y^-1 x y``."""
        return self.mul[self.mul[self.inv[y], x], y]

    def comm(self, a, b):
        """``[a, b] = a^-1 b^-1 a b``."""
        return self.mul[self.mul[self.inv[a], self.inv[b]], self.mul[a, b]]

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        cur = np.arange(n, dtype=np.int32)
        for k in range(1, n + 1):
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            if orders.all():
                break
            cur = self.mul[cur, np.arange(n)]
        out = orders
        out.setflags(write=False)
        return out

    @cached_property
    def exponent(self) -> int:
        e = 1
        for o in set(self.element_orders.tolist()):
            e = e * o // gcd(e, o)
        return e

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def class_sizes(self) -> np.ndarray:
        n = self.order
        g = np.arange(n)
        C = self.mul[self.mul[self.inv[g][None, :], g[:, None]], g[None, :]]
        sizes = np.array([len(np.unique(row)) for row in C], dtype=np.int64)
        sizes.setflags(write=False)
        return sizes

    def digest(self) -> str:
        import hashlib
        return hashlib.sha256(self.mul.tobytes()).hexdigest()[:16]


def _check_cap(what, n, cap):
    if n > cap:
        raise CapExceeded(what, n, cap)


def build_from_table(labels: Sequence, mul_table, name: str = "", check: bool = True) -> FiniteGroup:
    """Validate a Cayley table and return the group with the identity moved to index 0."""
    T = np.asarray(mul_table)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise InvalidParameter("multiplication table must be square")
    n = T.shape[0]
    if n == 0:
        raise InvalidParameter("empty table")
    if labels is None:
        labels = [str(i) for i in range(n)]
    labels = [str(x) for x in labels]
    if len(labels) != n:
        raise InvalidParameter("label count does not match table size")
    if len(set(labels)) != n:
        raise InvalidParameter("labels must be unique")
    if T.min() < 0 or T.max() >= n:
        bad = np.argwhere((T < 0) | (T >= n))[0]
        raise InvalidParameter(f"table entry at {tuple(int(i) for i in bad)} out of range")
    _check_cap("table group order", n, TABLE_CAP)
    T = T.astype(np.int32)
    ar = np.arange(n)
    ids = [e for e in range(n) if np.array_equal(T[e], ar) and np.array_equal(T[:, e], ar)]
    if not ids:
        raise NoIdentity("no two-sided identity in table")
    e = ids[0]
    if e != 0:
        perm = np.arange(n)
        perm[0], perm[e] = e, 0
        # relabel: new index i corresponds to old element perm[i]
        T = perm[T[np.ix_(perm, perm)]]
        labels = [labels[i] for i in perm]
    for x in range(n):
        if not np.any(T[x] == 0) or not np.any(T[:, x] == 0):
            raise NoInverse(labels[x])
        r = int(np.flatnonzero(T[x] == 0)[0])
        if T[r, x] != 0:
            raise NoInverse(labels[x])
    if check:
        _check_associative(T, labels)
    return FiniteGroup(_frozen(T), tuple(labels), name)


def _check_associative(T, labels=None):
    n = len(T)
    for a in range(n):
        left = T[T[a]]          # left[b, c] = (ab)c
        right = T[a][T]         # right[b, c] = a(bc)
        if not np.array_equal(left, right):
            b, c = np.argwhere(left != right)[0]
            lab = labels if labels is not None else list(range(n))
            raise NotAssociative((lab[a], lab[int(b)], lab[int(c)]))


def build_from_permutations(degree: int, generators, name: str = "", cap: int = PERM_CAP) -> FiniteGroup:
    """Closure of a set of permutations of ``{0..degree-1}``.

    Generators may be image lists or lists of cycles.  Elements are ordered by
    word length in the generators, then lexicographically by image tuple.
    """
    gens = [_as_images(g, degree) for g in generators]
    ident = tuple(range(degree))
    layer = [ident]
    seen = {ident: 0}
    ordered = [ident]
    depth = 0
    while layer:
        depth += 1
        nxt = set()
        for p in layer:
            for g in gens:
                q = tuple(g[i] for i in p)
                if q not in seen and q not in nxt:
                    nxt.add(q)
        nxt = sorted(nxt)
        for q in nxt:
            seen[q] = len(ordered)
            ordered.append(q)
            if len(ordered) > cap:
                raise CapExceeded("permutation closure", len(ordered), cap)
        layer = nxt
    P = np.array(ordered, dtype=np.int64).reshape(len(ordered), degree)
    n = len(P)
    base = max(degree, 2)
    weights = base ** np.arange(degree, dtype=np.int64)[::-1]
    codes = P @ weights
    order = np.argsort(codes)
    sorted_codes = codes[order]
    mul = np.empty((n, n), dtype=np.int32)
    for a in range(n):
        prod = P[:, P[a]]                      # prod[b, i] = P[b][P[a][i]]: a acts first
        c = prod @ weights
        mul[a] = order[np.searchsorted(sorted_codes, c)]
    labels = tuple(_cycle_label(p) for p in ordered)
    return FiniteGroup(_frozen(mul), labels, name, _frozen(P))


def _as_images(g, degree):
    g = list(g)
    if g and isinstance(g[0], (list, tuple)):
        img = list(range(degree))
        for cyc in g:
            cyc = [int(c) for c in cyc]
            for i, c in enumerate(cyc):
                if not 0 <= c < degree:
                    raise InvalidParameter(f"cycle entry {c} out of range")
                img[c] = cyc[(i + 1) % len(cyc)]
        return tuple(img)
    if len(g) == 0:
        return tuple(range(degree))
    if sorted(g) != list(range(degree)):
        raise InvalidParameter(f"{g} is not a permutation of 0..{degree - 1}")
    return tuple(int(x) for x in g)


def _cycle_label(p):
    seen, cycles = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        c, j = [], i
        while j not in seen:
            seen.add(j)
            c.append(j)
            j = p[j]
        cycles.append("(" + " ".join(map(str, c)) + ")")
    return "".join(cycles) or "()"


def permutation_cycles(p) -> list[list[int]]:
    seen, cycles = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        c, j = [], i
        while j not in seen:
            seen.add(j)
            c.append(int(j))
            j = int(p[j])
        cycles.append(c)
    return cycles


# ---------------------------------------------------------------------------
# maps and extensions


@dataclass(frozen=True, eq=False)
class GroupMap:
    domain: FiniteGroup
    codomain: FiniteGroup
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))
        if len(self.values) != self.domain.order:
            raise InvalidParameter("map table length differs from domain order")

    def __call__(self, x):
        return self.values[x]

    @property
    def preserves_identity(self) -> bool:
        return int(self.values[0]) == 0

    def is_homomorphism(self) -> bool:
        f, G, K = self.values, self.domain, self.codomain
        return bool(np.array_equal(f[G.mul], K.mul[f[:, None], f[None, :]]))

    def is_injective(self) -> bool:
        return len(np.unique(self.values)) == len(self.values)

    def is_surjective(self) -> bool:
        return len(np.unique(self.values)) == self.codomain.order

    def kernel(self) -> np.ndarray:
        return np.flatnonzero(self.values == 0)

    def image(self) -> np.ndarray:
        return np.unique(self.values)

    def then(self, other: "GroupMap") -> "GroupMap":
        """``other o self``."""
        return GroupMap(self.domain, other.codomain, other.values[self.values])


def identity_map(G: FiniteGroup) -> GroupMap:
    return GroupMap(G, G, np.arange(G.order))


@dataclass(frozen=True, eq=False)
class ExtensionRecord:
    """``1 -> H --alpha--> G --beta--> K -> 1`` with an optional section."""

    H: FiniteGroup
    G: FiniteGroup
    K: FiniteGroup
    alpha: GroupMap
    beta: GroupMap
    section: Optional[GroupMap] = None
    notes: dict = field(default_factory=dict, compare=False)

    def validate(self) -> None:
        a, b = self.alpha, self.beta
        if not (a.is_homomorphism() and a.is_injective()):
            raise InvalidParameter("alpha must be an injective homomorphism")
        if not (b.is_homomorphism() and b.is_surjective()):
            raise InvalidParameter("beta must be a surjective homomorphism")
        if not np.array_equal(np.sort(a.values), b.kernel()):
            raise InvalidParameter("image(alpha) != kernel(beta)")
        if self.section is not None:
            s = self.section.values
            if not np.array_equal(b.values[s], np.arange(self.K.order)):
                raise InvalidParameter("beta o section is not the identity")

    def is_central(self) -> bool:
        G = self.G
        img = self.alpha.values
        return bool(np.all(G.mul[img, :] == G.mul[:, img].T))

    def with_section(self, section: GroupMap) -> "ExtensionRecord":
        return ExtensionRecord(self.H, self.G, self.K, self.alpha, self.beta, section, dict(self.notes))

    def alpha_inverse(self) -> np.ndarray:
        """Table ``G -> H`` that inverts alpha on its image (-1 elsewhere)."""
        out = np.full(self.G.order, -1, dtype=np.int64)
        out[self.alpha.values] = np.arange(self.H.order)
        return out


# ---------------------------------------------------------------------------
# builders


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise InvalidParameter("cyclic(n) needs n >= 1")
    a = np.arange(n)
    return FiniteGroup(_frozen((a[:, None] + a[None, :]) % n), tuple(str(i) for i in range(n)), f"Z{n}")


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str = "") -> FiniteGroup:
    """Element ``(g, h)`` has index ``g*|H| + h``."""
    m = H.order
    n = G.order * m
    _check_cap("direct product order", n, PERM_CAP)
    idx = np.arange(n)
    g, h = idx // m, idx % m
    mul = G.mul[g[:, None], g[None, :]].astype(np.int64) * m + H.mul[h[:, None], h[None, :]]
    labels = tuple(f"({G.labels[i]},{H.labels[j]})" for i, j in zip(g, h))
    return FiniteGroup(_frozen(mul), labels, name or f"{G.name}x{H.name}")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; element ``r^k s^b`` has index ``k + n*b``."""
    if n < 1:
        raise InvalidParameter("dihedral(n) needs n >= 1")
    idx = np.arange(2 * n)
    k, b = idx % n, idx // n
    K1, B1 = k[:, None], b[:, None]
    K2, B2 = k[None, :], b[None, :]
    kk = (K1 + np.where(B1 == 1, -K2, K2)) % n
    bb = (B1 + B2) % 2
    labels = tuple(("r^%d" % kk_ if kk_ else "e" if not bb_ else "") + ("s" if bb_ else "")
                   for kk_, bb_ in zip(k, b))
    labels = tuple(lab if lab else "e" for lab in labels)
    return FiniteGroup(_frozen(kk + n * bb), labels, f"D{n}")


def quaternion8() -> FiniteGroup:
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    # unit quaternion products on (sign, axis) with axis 0=1,1=i,2=j,3=k
    table = {(0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
             (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
             (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
             (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0)}

    def split(i):
        return (1 if i % 2 == 0 else -1), i // 2

    mul = np.zeros((8, 8), dtype=np.int32)
    for x in range(8):
        for y in range(8):
            sx, ax = split(x)
            sy, ay = split(y)
            s, a = table[(ax, ay)]
            s *= sx * sy
            mul[x, y] = 2 * a + (0 if s == 1 else 1)
    return FiniteGroup(_frozen(mul), tuple(names), "Q8")


def heisenberg_mod_p(p: int) -> FiniteGroup:
    """Unipotent upper triangular 3x3 matrices over Z/p.

    Element ``(a1, a2, a3)`` is the matrix with entries 12, 13, 23 equal to
    ``a1, a2, a3``; its index is ``a1*p^2 + a2*p + a3``.
    """
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise InvalidParameter(f"heisenberg_mod_p needs a prime, got {p}")
    n = p ** 3
    _check_cap("heisenberg group order", n, TABLE_CAP)
    idx = np.arange(n)
    a1, a2, a3 = idx // (p * p), (idx // p) % p, idx % p
    A1, A2, A3 = a1[:, None], a2[:, None], a3[:, None]
    B1, B2, B3 = a1[None, :], a2[None, :], a3[None, :]
    c1 = (A1 + B1) % p
    c2 = (A2 + B2 + A1 * B3) % p
    c3 = (A3 + B3) % p
    mul = c1 * p * p + c2 * p + c3
    labels = tuple(f"U({x},{y},{z})" for x, y, z in zip(a1, a2, a3))
    return FiniteGroup(_frozen(mul), labels, f"U3Z{p}")


def heisenberg_coords(p: int, index: int) -> tuple[int, int, int]:
    return index // (p * p), (index // p) % p, index % p


def extraspecial27(exponent: int = 3) -> FiniteGroup:
    """Nonabelian group of order 27 and the given exponent (3 or 9)."""
    if exponent == 3:
        G = heisenberg_mod_p(3)
        return FiniteGroup(G.mul, G.labels, "E27")
    if exponent == 9:
        # a^i b^j with b a b^-1 = a^4; index i + 9j
        idx = np.arange(27)
        i, j = idx % 9, idx // 9
        r = np.array([1, 4, 7])            # 4^j mod 9
        I1, J1 = i[:, None], j[:, None]
        I2, J2 = i[None, :], j[None, :]
        ii = (I1 + I2 * r[J1]) % 9
        jj = (J1 + J2) % 3
        labels = tuple(f"a^{x}b^{y}" for x, y in zip(i, j))
        return FiniteGroup(_frozen(ii + 9 * jj), labels, "M27")
    raise InvalidParameter("extraspecial27 exponent must be 3 or 9")


def symmetric(n: int) -> FiniteGroup:
    if n < 1:
        raise InvalidParameter("symmetric(n) needs n >= 1")
    if n == 1:
        return build_from_permutations(1, [], name="S1")
    gens = [[[0, 1]], [list(range(n))]] if n > 2 else [[[0, 1]]]
    return build_from_permutations(n, gens, name=f"S{n}")


def alternating(n: int) -> FiniteGroup:
    if n < 1:
        raise InvalidParameter("alternating(n) needs n >= 1")
    if n < 3:
        return build_from_permutations(max(n, 1), [], name=f"A{n}")
    gens = [[[0, 1, i]] for i in range(2, n)]
    return build_from_permutations(n, gens, name=f"A{n}")


def semidirect_product(N: FiniteGroup, Q: FiniteGroup, action, name: str = "") -> FiniteGroup:
    """``N x| Q`` with ``(n1,q1)(n2,q2) = (n1 * action[q1](n2), q1 q2)``.

    ``action[q]`` is the image table of an automorphism of ``N`` and must
    satisfy ``action[q1 q2] = action[q1] o action[q2]``.  Index ``q*|N| + n``.
    """
    act = np.asarray(action, dtype=np.int64)
    for q1 in range(Q.order):
        for q2 in range(Q.order):
            if not np.array_equal(act[Q.mul[q1, q2]], act[q1][act[q2]]):
                raise InvalidParameter("action is not a homomorphism Q -> Aut(N)")
    m = N.order
    n = m * Q.order
    _check_cap("semidirect product order", n, PERM_CAP)
    idx = np.arange(n)
    nn, qq = idx % m, idx // m
    n2 = act[qq[:, None], nn[None, :]]
    new_n = N.mul[nn[:, None], n2]
    new_q = Q.mul[qq[:, None], qq[None, :]]
    labels = tuple(f"({N.labels[a]},{Q.labels[b]})" for a, b in zip(nn, qq))
    return FiniteGroup(_frozen(new_q.astype(np.int64) * m + new_n), labels, name)


# ---------------------------------------------------------------------------
# subgroups, quotients, invariants


def subgroup_closure(G: FiniteGroup, subset) -> np.ndarray:
    """Sorted indices of the subgroup generated by ``subset``."""
    have = np.zeros(G.order, dtype=bool)
    have[0] = True
    for s in subset:
        have[int(s)] = True
    while True:
        cur = np.flatnonzero(have)
        new = np.zeros_like(have)
        new[G.mul[np.ix_(cur, cur)].ravel()] = True
        new[G.inv[cur]] = True
        if np.array_equal(new | have, have):
            return cur
        have |= new


def is_subgroup(G: FiniteGroup, subset) -> bool:
    s = np.unique(np.asarray(list(subset), dtype=np.int64))
    if len(s) == 0 or s[0] != 0:
        return False
    return len(subgroup_closure(G, s)) == len(s)


def is_normal(G: FiniteGroup, N) -> bool:
    N = np.asarray(N)
    mask = np.zeros(G.order, dtype=bool)
    mask[N] = True
    g = np.arange(G.order)
    conj = G.mul[G.mul[G.inv[g][:, None], N[None, :]], g[:, None]]
    return bool(mask[conj].all())


def center(G: FiniteGroup) -> np.ndarray:
    return np.flatnonzero(np.all(G.mul == G.mul.T, axis=1))


def commutator_subgroup(G: FiniteGroup, A=None, B=None) -> np.ndarray:
    """``[A, B]`` (defaults to ``[G, G]``)."""
    A = np.arange(G.order) if A is None else np.asarray(A)
    B = np.arange(G.order) if B is None else np.asarray(B)
    comms = G.comm(A[:, None], B[None, :]).ravel()
    return subgroup_closure(G, np.unique(comms))


def coset_table(G: FiniteGroup, N) -> np.ndarray:
    """Coset id (by increasing minimal representative) of each element of G."""
    N = np.asarray(N)
    cosets = G.mul[:, N]                       # right-multiplied: g N
    reps = cosets.min(axis=1)
    uniq = np.unique(reps)
    return np.searchsorted(uniq, reps)


def quotient_with_map(G: FiniteGroup, N, name: str = "") -> tuple[FiniteGroup, GroupMap]:
    N = np.asarray(sorted(int(x) for x in N))
    if not is_subgroup(G, N):
        raise NotSubgroup("N is not a subgroup")
    if not is_normal(G, N):
        raise NotNormal("N is not normal")
    cid = coset_table(G, N)
    k = int(cid.max()) + 1
    reps = np.array([int(np.flatnonzero(cid == c)[0]) for c in range(k)])
    mul = cid[G.mul[np.ix_(reps, reps)]]
    labels = tuple(G.labels[r] + "N" if len(N) > 1 else G.labels[r] for r in reps)
    Q = FiniteGroup(_frozen(mul), labels, name or (f"{G.name}/N" if G.name else ""))
    return Q, GroupMap(G, Q, cid)


def quotient(G: FiniteGroup, N, name: str = "") -> FiniteGroup:
    return quotient_with_map(G, N, name)[0]


def subgroup_as_group(G: FiniteGroup, subset, name: str = "") -> tuple[FiniteGroup, GroupMap]:
    """The subgroup on ``subset`` (identity first) with its inclusion map."""
    s = np.asarray(sorted(int(x) for x in subset))
    if not is_subgroup(G, s):
        raise NotSubgroup("subset is not a subgroup")
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[s] = np.arange(len(s))
    mul = pos[G.mul[np.ix_(s, s)]]
    S = FiniteGroup(_frozen(mul), tuple(G.labels[i] for i in s), name)
    return S, GroupMap(S, G, s)


def extension_from_normal(G: FiniteGroup, N, name: str = "") -> ExtensionRecord:
    """``1 -> N -> G -> G/N -> 1`` with the inclusion and the quotient map."""
    H, alpha = subgroup_as_group(G, N, name=f"{name or G.name}_N")
    K, beta = quotient_with_map(G, N, name=f"{G.name}/N")
    return ExtensionRecord(H, G, K, alpha, beta)


def central_extension(G: FiniteGroup) -> ExtensionRecord:
    """``1 -> Z(G) -> G -> G/Z(G) -> 1``."""
    return extension_from_normal(G, center(G))


def abelianization_order(G: FiniteGroup) -> int:
    return G.order // len(commutator_subgroup(G))


def lower_central_series(G: FiniteGroup) -> list[np.ndarray]:
    series = [np.arange(G.order)]
    while True:
        nxt = commutator_subgroup(G, series[-1], np.arange(G.order))
        if len(nxt) == len(series[-1]):
            return series
        series.append(nxt)


def nilpotency_class(G: FiniteGroup) -> Optional[int]:
    series = lower_central_series(G)
    if len(series[-1]) != 1:
        return None
    return len(series) - 1


def is_2_engel(G: FiniteGroup) -> bool:
    g = np.arange(G.order)
    c = G.comm(g[:, None], g[None, :])        # [x, y]
    return bool(np.all(G.comm(c, g[None, :]) == 0))


@dataclass(frozen=True)
class GroupInvariants:
    order: int
    center: tuple
    commutator_subgroup: tuple
    exponent: int
    nilpotency_class: Optional[int]
    is_perfect: bool
    every_element_commutator: bool
    is_2_engel: bool
    is_central_by_2_engel: bool


def is_central_by_2_engel(G: FiniteGroup) -> bool:
    return is_2_engel(quotient(G, center(G)))


def invariants_suite(G: FiniteGroup) -> GroupInvariants:
    g = np.arange(G.order)
    comms = np.unique(G.comm(g[:, None], g[None, :]))
    D = commutator_subgroup(G)
    Z = center(G)
    return GroupInvariants(
        order=G.order,
        center=tuple(int(x) for x in Z),
        commutator_subgroup=tuple(int(x) for x in D),
        exponent=G.exponent,
        nilpotency_class=nilpotency_class(G),
        is_perfect=len(D) == G.order,
        every_element_commutator=len(comms) == G.order,
        is_2_engel=is_2_engel(G),
        is_central_by_2_engel=is_central_by_2_engel(G),
    )


def inner_automorphism_action(G: FiniteGroup) -> tuple[FiniteGroup, np.ndarray]:
    """``Inn(G)`` as ``G/Z(G)`` together with the action tables ``x -> a x a^-1``."""
    Z = center(G)
    Q, pi = quotient_with_map(G, Z, name=f"Inn({G.name})")
    reps = [int(np.flatnonzero(pi.values == c)[0]) for c in range(Q.order)]
    g = np.arange(G.order)
    act = np.array([G.mul[G.mul[a, g], G.inv[a]] for a in reps])
    return Q, act


def isomorphism_search(G: FiniteGroup, H: FiniteGroup) -> Optional[GroupMap]:
    """An isomorphism ``G -> H`` or None (exact backtracking search)."""
    from .search import find_isomorphism
    res = find_isomorphism(G.mul, H.mul, group_invariants(G), group_invariants(H))
    return GroupMap(G, H, res.maps[0]) if res.found else None


def group_invariants(G: FiniteGroup) -> np.ndarray:
    """Per-element isomorphism invariants: element order and class size."""
    return np.stack([G.element_orders, G.class_sizes], axis=1)


def automorphisms(G: FiniteGroup, cap: int = 64) -> np.ndarray:
    """All automorphisms of G as image tables (rows), for ``|G| <= cap``."""
    from .search import magma_homs
    _check_cap("automorphism enumeration", G.order, cap)
    inv = group_invariants(G)
    allowed = np.all(inv[:, None, :] == inv[None, :, :], axis=2)
    res = magma_homs(G.mul, G.mul, allowed=allowed, injective=True, first_only=False)
    return np.array(sorted(m.tolist() for m in res.maps), dtype=np.int64)


# ---------------------------------------------------------------------------
# finite abelian groups


def abelian_group(factors, name: str = "") -> FiniteGroup:
    """``Z/d_1 + ... + Z/d_k``; element index is mixed radix, last factor fastest."""
    factors = [int(d) for d in factors if int(d) != 1]
    n = int(np.prod(factors)) if factors else 1
    _check_cap("abelian group order", n, PERM_CAP)
    coords = np.array(list(np.ndindex(*factors)), dtype=np.int64).reshape(n, len(factors))
    d = np.array(factors, dtype=np.int64)
    w = np.array([int(np.prod(factors[i + 1:])) for i in range(len(factors))], dtype=np.int64)
    summed = (coords[:, None, :] + coords[None, :, :]) % d
    mul = summed @ w if factors else np.zeros((1, 1), dtype=np.int64)
    labels = tuple("(" + ",".join(map(str, c)) + ")" for c in coords) if factors else ("0",)
    return FiniteGroup(_frozen(mul), labels, name or "x".join(f"Z{x}" for x in factors) or "1")


@dataclass(frozen=True, eq=False)
class AbelianDecomposition:
    """An explicit isomorphism ``H -> Z/m_1 + ... + Z/m_r``."""

    moduli: np.ndarray
    coords: np.ndarray           # coords[h] = coordinate vector of h

    @cached_property
    def _lookup(self) -> dict:
        return {tuple(c): i for i, c in enumerate(self.coords.tolist())}

    @property
    def rank(self) -> int:
        return len(self.moduli)

    def element(self, c) -> int:
        c = tuple(int(x) % int(m) for x, m in zip(c, self.moduli))
        return self._lookup[c]

    def elements(self, C) -> np.ndarray:
        """Vectorized :meth:`element` for an array of coordinate rows."""
        C = np.asarray(C, dtype=np.int64) % self.moduli
        if self.rank == 0:
            return np.zeros(len(C), dtype=np.int64)
        w = np.array([int(np.prod(self.moduli[i + 1:])) for i in range(self.rank)], dtype=np.int64)
        keys = self.coords @ w
        order = np.argsort(keys)
        return order[np.searchsorted(keys[order], C @ w)]


def abelian_decomposition(H: FiniteGroup) -> AbelianDecomposition:
    """Invariant-factor decomposition of an abelian group with explicit coordinates."""
    from .intlin import smith_normal_form
    from .search import greedy_generators
    if not H.is_abelian:
        from .errors import KernelNotAbelian
        raise KernelNotAbelian(f"{H.name or 'group'} is not abelian")
    n = H.order
    gens = greedy_generators(H.mul)
    k = len(gens)
    if k == 0:
        return AbelianDecomposition(np.zeros(0, dtype=np.int64), np.zeros((1, 0), dtype=np.int64))
    # breadth-first words give coordinates; every edge gives a relation
    coord = np.full((n, k), -1, dtype=np.int64)
    coord[0] = 0
    frontier = [0]
    rels = []
    while frontier:
        nxt = []
        for h in frontier:
            for i, g in enumerate(gens):
                h2 = int(H.mul[h, g])
                c = coord[h].copy()
                c[i] += 1
                if coord[h2, 0] < 0:
                    coord[h2] = c
                    nxt.append(h2)
                else:
                    r = c - coord[h2]
                    if np.any(r):
                        rels.append(r.tolist())
        frontier = nxt
    diag, _, V, _ = smith_normal_form(rels if rels else [[0] * k])
    diag = diag + [0] * (k - len(diag))
    V = np.array(V, dtype=object)
    keep = [j for j, d in enumerate(diag) if d != 1]
    moduli = np.array([diag[j] for j in keep], dtype=np.int64)
    C = (coord.astype(object) @ V)[:, keep]
    C = np.array([[int(x) % int(m) for x, m in zip(row, moduli)] for row in C], dtype=np.int64)
    return AbelianDecomposition(moduli, C.reshape(n, len(keep)))


def abelian_invariants(H: FiniteGroup) -> list[int]:
    return [int(m) for m in abelian_decomposition(H).moduli]


def abelian_invariants_from_orders(orders) -> list[int]:
    """Invariant factors of a finite abelian group from its multiset of element orders."""
    orders = [int(o) for o in orders]
    n = len(orders)
    primes = sorted({p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, int(p ** .5) + 1))})
    parts = {}
    for p in primes:
        counts = []
        k = 0
        while True:
            k += 1
            c = sum(1 for o in orders if (p ** k) % o == 0 and _is_p_power(o, p))
            counts.append(c)
            if k > 1 and counts[-1] == counts[-2]:
                break
        logs = [0] + [round(np.log(c) / np.log(p)) for c in counts]
        ge = [logs[i] - logs[i - 1] for i in range(1, len(logs))]   # #{cyclic factors with e_i >= k}
        exps = []
        for k in range(len(ge)):
            cnt = ge[k] - (ge[k + 1] if k + 1 < len(ge) else 0)
            exps += [k + 1] * cnt
        parts[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in parts.values()), default=0)
    inv = []
    for i in range(width):
        d = 1
        for p, exps in parts.items():
            if i < len(exps):
                d *= p ** exps[i]
        inv.append(d)
    return sorted(inv)


def _is_p_power(o, p):
    while o % p == 0:
        o //= p
    return o == 1
