"""Right loops built from groups, their inner mappings and gyro predicates.

A right loop is stored as its operation table ``op[x, y] = x o y`` with the
identity at index 0.  The right-loop law says every column is a permutation,
so right division is a column lookup: ``rdiv[b, a]`` is the unique ``X`` with
``X o a = b``.

Inner mappings are the permutations ``f(y, z)`` of the underlying set given by
``(x o y) o z = f(y, z)(x) o (y o z)``.  As permutations they are stored as
image arrays; composition is left to right, ``p`` then ``q`` is ``q[p]``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import CapExceeded, IdentityNotPreserved, NotRightLoop, NotSubgroup
from .groups import (PERM_CAP, FiniteGroup, GroupMap, _frozen, build_from_permutations,
                     center, is_subgroup)
from .search import closure

INNER_TABLE_CAP = 128
SUBLOOP_CAP = 128
SMALL_LOOP_CAP = 6


@dataclass(frozen=True, eq=False)
class RightLoopTable:
    op: np.ndarray
    labels: tuple
    name: str = ""

    def __repr__(self):
        return f"RightLoopTable({self.name or '?'}, order={self.order})"

    @property
    def order(self) -> int:
        return len(self.op)

    @property
    def id(self) -> int:
        return 0

    @cached_property
    def rdiv(self) -> np.ndarray:
        n = self.order
        out = np.empty((n, n), dtype=np.int32)
        cols = np.arange(n)
        out[self.op, cols[None, :]] = np.arange(n)[:, None]
        return _frozen(out)

    @cached_property
    def left_inv(self) -> np.ndarray:
        """``x'`` with ``x' o x = e``."""
        return _frozen(self.rdiv[0])

    def inner(self, y: int, z: int) -> np.ndarray:
        """Image array of ``f(y, z)``."""
        op = self.op
        return self.rdiv[op[op[:, y], z], op[y, z]]

    @cached_property
    def inner_table(self) -> np.ndarray:
        """``F[y, z, x] = f(y, z)(x)``; only for order <= 128."""
        n = self.order
        if n > INNER_TABLE_CAP:
            raise CapExceeded("inner mapping table", n, INNER_TABLE_CAP)
        op = self.op
        T = op[op]                             # T[x, y, z] = (x o y) o z
        F = self.rdiv[T.transpose(1, 2, 0), op[:, :, None]]
        return _frozen(F)

    def distinct_inner_maps(self) -> np.ndarray:
        """All distinct inner mappings as rows, computed block by block."""
        n = self.order
        seen = {}
        for y in range(n):
            T = self.op[self.op[:, y]]         # T[x, z] = (x o y) o z
            rows = self.rdiv[T.T, self.op[y][:, None]]
            for r in np.unique(rows, axis=0):
                seen.setdefault(r.tobytes(), r)
        out = np.array(list(seen.values()), dtype=np.int32).reshape(-1, n)
        return out[np.lexsort(out.T[::-1])]

    def right_power(self, x: int, k: int) -> int:
        """``((x o x) o x) ...`` with ``k`` factors; power 0 is the identity."""
        r = 0
        for _ in range(k):
            r = int(self.op[r, x])
        return r

    def to_group(self, name: str = "") -> FiniteGroup:
        """Reinterpret an associative loop as a :class:`FiniteGroup`."""
        from .groups import build_from_table
        return build_from_table(self.labels, self.op, name or self.name)


def check_right_loop(op) -> Optional[str]:
    """``None`` when ``op`` is a right loop with identity 0, else a reason."""
    op = np.asarray(op)
    n = len(op)
    if op.ndim != 2 or op.shape != (n, n):
        return "table is not square"
    ar = np.arange(n)
    if op.min() < 0 or op.max() >= n:
        return "entry out of range"
    if not np.array_equal(op[:, 0], ar):
        x = int(np.flatnonzero(op[:, 0] != ar)[0])
        return f"x o e != x at x={x}"
    if not np.array_equal(op[0], ar):
        y = int(np.flatnonzero(op[0] != ar)[0])
        return f"e o y != y at y={y}"
    srt = np.sort(op, axis=0)
    bad = np.flatnonzero(np.any(srt != ar[:, None], axis=0))
    if len(bad):
        return f"X o a = b not uniquely solvable for a={int(bad[0])}"
    return None


def loop_from_table(op, labels=None, name: str = "") -> RightLoopTable:
    op = np.asarray(op)
    reason = check_right_loop(op)
    if reason:
        raise NotRightLoop(reason)
    if labels is None:
        labels = [str(i) for i in range(len(op))]
    return RightLoopTable(_frozen(op), tuple(str(x) for x in labels), name)


def inner_mappings(S: RightLoopTable) -> np.ndarray:
    """``F[y, z]`` = image array of ``f(y, z)``, checked to be a bijection fixing e."""
    reason = check_right_loop(S.op)
    if reason:
        raise NotRightLoop(reason)
    F = S.inner_table
    if np.any(F[:, :, 0] != 0):
        raise NotRightLoop("an inner mapping moves the identity")
    return F


def group_loop(G: FiniteGroup) -> RightLoopTable:
    return RightLoopTable(G.mul, G.labels, G.name)


def circ_n(G: FiniteGroup, n: int) -> RightLoopTable:
    """``x o_n y = y^-n x y^(n+1)``, with n reduced modulo the exponent."""
    n = n % G.exponent
    ar = np.arange(G.order)
    Pm, P1 = G.powers(-n), G.powers(n + 1)
    A = G.mul[Pm[None, :], ar[:, None]]        # A[x, y] = y^-n x
    return RightLoopTable(_frozen(G.mul[A, P1[None, :]]), G.labels,
                          f"({G.name},o{n})" if G.name else "")


@dataclass
class LambdaValidity:
    valid: bool
    inverse_condition: bool
    equivariance_condition: bool
    witness: Optional[tuple] = None


def lambda_loop(G: FiniteGroup, lam) -> tuple[RightLoopTable, LambdaValidity]:
    """Loop ``x o y = lambda(y)^-1 x lambda(y) y`` induced by ``lambda: G -> G``.

    Validity means ``lambda(x^-1) lambda(x)`` and
    ``lambda(b^-1 x b) b^-1 lambda(x)^-1 b`` are central for all ``x, b``.
    """
    lam = np.asarray(lam.values if isinstance(lam, GroupMap) else lam, dtype=np.int64)
    if lam[0] != 0:
        raise IdentityNotPreserved("lambda(e) != e")
    n = G.order
    ar = np.arange(n)
    mul, inv = G.mul, G.inv
    L = lam
    A = mul[mul[inv[L][None, :], ar[:, None]], L[None, :]]   # lambda(y)^-1 x lambda(y)
    op = mul[A, ar[None, :]]
    zmask = np.zeros(n, dtype=bool)
    zmask[center(G)] = True
    c1 = mul[L[inv], L]
    ok1 = zmask[c1]
    # c2[x, b] = lambda(b^-1 x b) b^-1 lambda(x)^-1 b
    conj = G.conj(ar[:, None], ar[None, :])
    c2 = mul[L[conj], G.conj(inv[L][:, None], ar[None, :])]
    ok2 = zmask[c2]
    witness = None
    if not ok1.all():
        x = int(np.flatnonzero(~ok1)[0])
        witness = ("inverse", G.labels[x])
    elif not ok2.all():
        x, b = (int(i) for i in np.argwhere(~ok2)[0])
        witness = ("equivariance", G.labels[x], G.labels[b])
    v = LambdaValidity(bool(ok1.all() and ok2.all()), bool(ok1.all()), bool(ok2.all()), witness)
    return RightLoopTable(_frozen(op), G.labels, f"({G.name},lambda)"), v


# ---------------------------------------------------------------------------
# predicates


@dataclass
class GyroGroupReport:
    verdict: bool
    flags: dict
    witnesses: dict = field(default_factory=dict)

    def as_dict(self):
        return {"verdict": self.verdict, "flags": self.flags, "witnesses": self.witnesses}


def is_automorphism(op: np.ndarray, p: np.ndarray) -> bool:
    return bool(np.array_equal(p[op], op[p[:, None], p[None, :]]))


def _automorphism_witness(op, p):
    bad = np.argwhere(p[op] != op[p[:, None], p[None, :]])
    return None if len(bad) == 0 else tuple(int(i) for i in bad[0])


def is_right_gyrogroup(S) -> GyroGroupReport:
    """Right loop + inner maps are automorphisms + ``f(x', x) = I``."""
    op = S.op if isinstance(S, RightLoopTable) else np.asarray(S)
    reason = check_right_loop(op)
    flags = {"is_right_loop": reason is None,
             "inner_maps_are_automorphisms": False,
             "f_leftinv_identity": False}
    wit = {}
    if reason is not None:
        wit["is_right_loop"] = reason
        return GyroGroupReport(False, flags, wit)
    if not isinstance(S, RightLoopTable):
        S = RightLoopTable(_frozen(op), tuple(str(i) for i in range(len(op))))
    n = S.order
    auto_ok = True
    for y in range(n):
        T = S.op[S.op[:, y]]
        rows = S.rdiv[T.T, S.op[y][:, None]]          # rows[z] = f(y, z)
        uniq, first = np.unique(rows, axis=0, return_index=True)
        for r, z in zip(uniq, first):
            w = _automorphism_witness(S.op, r)
            if w is not None:
                auto_ok = False
                wit["inner_maps_are_automorphisms"] = {"y": y, "z": int(z), "x1": w[0], "x2": w[1]}
                break
        if not auto_ok:
            break
    flags["inner_maps_are_automorphisms"] = auto_ok
    ar = np.arange(n)
    li_ok = True
    for x in range(n):
        f = S.inner(int(S.left_inv[x]), x)
        if not np.array_equal(f, ar):
            li_ok = False
            wit["f_leftinv_identity"] = {"x": x, "moved": int(np.flatnonzero(f != ar)[0])}
            break
    flags["f_leftinv_identity"] = li_ok
    return GyroGroupReport(all(flags.values()), flags, wit)


def power_coherent(G: FiniteGroup, S: RightLoopTable) -> bool:
    """Right powers in ``S`` agree with powers in ``G`` up to the exponent."""
    ar = np.arange(G.order)
    cur_s = np.zeros(G.order, dtype=np.int64)
    for k in range(1, G.exponent + 1):
        cur_s = S.op[cur_s, ar]
        if not np.array_equal(cur_s, G.powers(k)):
            return False
    return True


# ---------------------------------------------------------------------------
# right multiplication group


@dataclass
class TorsionData:
    GS: FiniteGroup
    RS: FiniteGroup
    right_mults: np.ndarray        # index of R_y in RS, per y
    torsion_in_RS: np.ndarray      # indices of G_S inside RS
    factorization_ok: bool
    intersection_trivial: bool
    composition_law_ok: bool
    gyro_transversal: Optional[bool]


def right_multiplications(S: RightLoopTable) -> np.ndarray:
    """Row ``y`` is the image array of ``R_y: x -> x o y``."""
    return np.ascontiguousarray(S.op.T)


def group_torsion_and_extension(S: RightLoopTable, cap: int = PERM_CAP) -> TorsionData:
    n = S.order
    R = right_multiplications(S)
    inner = S.distinct_inner_maps()
    GS = build_from_permutations(n, [list(r) for r in inner], name="G_S", cap=cap)
    RS = build_from_permutations(n, [list(r) for r in R], name="R(S)", cap=cap)
    code = {p.tobytes(): i for i, p in enumerate(RS.perms.astype(np.int64))}
    ridx = np.array([code[R[y].astype(np.int64).tobytes()] for y in range(n)])
    gidx = np.array(sorted(code[p.astype(np.int64).tobytes()] for p in GS.perms))
    # R(S) = G_S S with unique factorization
    prods = RS.mul[gidx[:, None], ridx[None, :]].ravel()
    factorization_ok = len(np.unique(prods)) == len(prods) == RS.order
    intersection_trivial = len(set(gidx.tolist()) & set(ridx.tolist())) == 1
    # R_y then R_z equals f(y, z) then R_{y o z}
    law = True
    for y in range(n):
        for z in range(n):
            if not np.array_equal(R[z][R[y]], R[S.op[y, z]][S.inner(y, z)]):
                law = False
                break
        if not law:
            break
    gyro_t = None
    if is_right_gyrogroup(S).verdict:
        gyro_t = is_gyro_transversal(RS, gidx, ridx).verdict
    return TorsionData(GS, RS, ridx, gidx, bool(factorization_ok), intersection_trivial, law, gyro_t)


@dataclass
class TransversalReport:
    verdict: bool
    is_transversal: bool
    inverse_closed: bool
    conjugation_closed: bool
    witness: Optional[dict] = None
    loop: Optional[RightLoopTable] = None


def is_gyro_transversal(G: FiniteGroup, Hsub, S) -> TransversalReport:
    """Right transversal ``S`` to ``Hsub`` with ``S = S^-1`` and ``h^-1 S h = S``."""
    H = np.asarray(sorted(int(h) for h in Hsub))
    Sx = np.asarray([int(s) for s in S])
    if not is_subgroup(G, H):
        raise NotSubgroup("Hsub is not a subgroup")
    if 0 not in set(Sx.tolist()):
        raise NotSubgroup("S must contain the identity")
    coset = G.mul[H[:, None], np.arange(G.order)[None, :]].min(axis=0)   # min of H g
    cs = coset[Sx]
    is_t = len(Sx) * len(H) == G.order and len(np.unique(cs)) == len(Sx)
    smask = np.zeros(G.order, dtype=bool)
    smask[Sx] = True
    wit = None
    if not is_t:
        wit = {"reason": "not a right transversal"}
    inv_ok = bool(smask[G.inv[Sx]].all())
    if not inv_ok and wit is None:
        s = int(Sx[~smask[G.inv[Sx]]][0])
        wit = {"reason": "S != S^-1", "element": G.labels[s], "inverse": G.labels[int(G.inv[s])]}
    conj = G.conj(Sx[:, None], H[None, :])
    conj_ok = bool(smask[conj].all())
    if not conj_ok and wit is None:
        i, j = np.argwhere(~smask[conj])[0]
        wit = {"reason": "not closed under conjugation", "element": G.labels[int(Sx[i])],
               "by": G.labels[int(H[j])]}
    loop = None
    if is_t:
        rep_of_coset = {int(c): k for k, c in enumerate(cs)}
        prod = G.mul[Sx[:, None], Sx[None, :]]
        op = np.vectorize(lambda g: rep_of_coset[int(coset[g])])(prod)
        order = np.argsort(Sx != 0, kind="stable")       # identity first
        pos = np.empty(len(Sx), dtype=np.int64)
        pos[order] = np.arange(len(Sx))
        op = pos[op][np.ix_(order, order)]
        loop = RightLoopTable(_frozen(op), tuple(G.labels[int(Sx[k])] for k in order))
    return TransversalReport(bool(is_t and inv_ok and conj_ok), bool(is_t), inv_ok, conj_ok, wit, loop)


# ---------------------------------------------------------------------------
# sub right loops and congruences


def sub_right_loops(S: RightLoopTable, order: Optional[int] = None) -> list[tuple]:
    """All subsets containing e and closed under ``o`` (sorted tuples).

    In a finite right loop such a subset is automatically closed under left
    inverses and right division, so it is a sub right loop.
    """
    n = S.order
    if n > SUBLOOP_CAP:
        raise CapExceeded("sub right loop enumeration", n, SUBLOOP_CAP)
    start = tuple(closure(S.op, []).tolist())
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for T in frontier:
            inside = set(T)
            for x in range(n):
                if x in inside:
                    continue
                C = tuple(closure(S.op, list(T) + [x]).tolist())
                if C not in seen:
                    seen.add(C)
                    nxt.append(C)
        frontier = nxt
    out = sorted(seen, key=lambda t: (len(t), t))
    if order is not None:
        out = [t for t in out if len(t) == order]
    return out


def congruence_generated(S: RightLoopTable, pairs) -> np.ndarray:
    """Class labels of the smallest congruence of ``(S, o)`` containing ``pairs``."""
    n = S.order
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        a, b = find(a), find(b)
        if a != b:
            parent[max(a, b)] = min(a, b)
            return True
        return False

    for a, b in pairs:
        union(int(a), int(b))
    changed = True
    while changed:
        changed = False
        lab = np.array([find(i) for i in range(n)])
        for c in np.unique(lab):
            members = np.flatnonzero(lab == c)
            if len(members) < 2:
                continue
            right = S.op[members]          # rows: a o z for a in class
            left = S.op[:, members].T      # rows: z o a
            for block in (right, left):
                base = block[0]
                for row in block[1:]:
                    for u, v in zip(base, row):
                        if union(int(u), int(v)):
                            changed = True
    lab = np.array([find(i) for i in range(n)])
    _, labels = np.unique(lab, return_inverse=True)
    return labels


def is_normal_subloop(S: RightLoopTable, N) -> bool:
    """``N`` is the class of e in some congruence (kernel of a loop homomorphism).

    This reading of normality is a convention of this package.
    """
    N = sorted(int(x) for x in N)
    lab = congruence_generated(S, [(0, x) for x in N])
    return sorted(np.flatnonzero(lab == lab[0]).tolist()) == N


def quotient_loop(S: RightLoopTable, labels_of_classes: np.ndarray) -> RightLoopTable:
    cls = np.asarray(labels_of_classes)
    k = int(cls.max()) + 1
    reps = np.array([int(np.flatnonzero(cls == c)[0]) for c in range(k)])
    op = cls[S.op[np.ix_(reps, reps)]]
    return RightLoopTable(_frozen(op), tuple(S.labels[r] for r in reps))


# ---------------------------------------------------------------------------
# loop-property candidates


def loop_property_candidates(S: RightLoopTable) -> dict:
    """Evaluate the two right-handed loop-property identities on ``S``.

    ``A``: ``f(y, z) = f(y o z, z)``; ``B``: ``f(y, z) = f(y, z o y)``.
    """
    n = S.order
    a_ok = b_ok = True
    for y in range(n):
        for z in range(n):
            f = S.inner(y, z)
            if a_ok and not np.array_equal(f, S.inner(int(S.op[y, z]), z)):
                a_ok = False
            if b_ok and not np.array_equal(f, S.inner(y, int(S.op[z, y]))):
                b_ok = False
            if not (a_ok or b_ok):
                return {"f(y,z)=f(yoz,z)": False, "f(y,z)=f(y,zoy)": False}
    return {"f(y,z)=f(yoz,z)": a_ok, "f(y,z)=f(y,zoy)": b_ok}


# ---------------------------------------------------------------------------
# small right loops (for counterexamples)


def iter_right_loops(n: int):
    """All right loops on ``{0..n-1}`` with identity 0 (every column a permutation)."""
    if n > SMALL_LOOP_CAP:
        raise CapExceeded("small loop enumeration", n, SMALL_LOOP_CAP)
    if n == 1:
        yield np.zeros((1, 1), dtype=np.int32)
        return
    cols = []
    for y in range(1, n):
        # column y: x -> x o y, with e o y = y
        cs = [p for p in itertools.permutations(range(n)) if p[0] == y]
        cols.append(cs)
    for choice in itertools.product(*cols):
        op = np.empty((n, n), dtype=np.int32)
        op[:, 0] = np.arange(n)
        for y, c in enumerate(choice, start=1):
            op[:, y] = c
        yield op


def canonical_form(op: np.ndarray) -> bytes:
    """Lexicographically least relabelled table over relabellings fixing 0."""
    n = len(op)
    best = None
    for perm in itertools.permutations(range(1, n)):
        p = np.array((0,) + perm)
        q = np.empty(n, dtype=np.int64)
        q[p] = np.arange(n)
        t = q[op[np.ix_(p, p)]].astype(np.int8).tobytes()
        if best is None or t < best:
            best = t
    return best


def find_small_loop(n: int, predicate) -> Optional[RightLoopTable]:
    """First right loop of order ``n`` (canonical iteration order) satisfying ``predicate``."""
    for op in iter_right_loops(n):
        S = RightLoopTable(_frozen(op), tuple(str(i) for i in range(n)))
        if predicate(S):
            return S
    return None


def right_loops_up_to_isomorphism(n: int) -> list[RightLoopTable]:
    seen = {}
    for op in iter_right_loops(n):
        key = canonical_form(op)
        if key not in seen:
            seen[key] = RightLoopTable(_frozen(op), tuple(str(i) for i in range(n)))
    return list(seen.values())
