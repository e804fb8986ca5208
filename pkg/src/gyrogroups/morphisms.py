"""Gyro-homomorphisms, gyro-isomorphisms, gyro-semidirect decompositions, gyro-splittings.

A map ``f: G -> K`` is a gyro-homomorphism when
``f(y^-1 x y^2) = f(y)^-1 f(x) f(y)^2``, i.e. when it is a homomorphism of
the right loops ``(G, o_1) -> (K, o_1)``.  Two equivalent tests are offered:
identity preservation together with ``f(y^-1 x y^2) = f(y^-1) f(x) f(y^2)``,
and identity preservation together with
``dt(y^-1, x) dt(y^-1 x, y^2) = 1`` where ``dt(x, y) = t(x) t(y) t(xy)^-1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import CapExceeded, InvalidParameter, NotNormal, NoSection
from .groups import (ExtensionRecord, FiniteGroup, GroupMap, abelian_invariants_from_orders, is_normal)
from .intlin import lcm
from .loops import circ_n
from .search import SearchResult, find_isomorphism, magma_homs, magma_invariants

CRITERIA = ("definition", "powers", "deviation")
HOM_ENUM_CAP = 10 ** 5          # |G| * |K|
SECTION_SEARCH_CAP = 64         # |K| for the backtracking path


@dataclass
class GyroHomReport:
    verdict: bool
    witness: Optional[tuple]
    checked_criterion: str

    def as_dict(self):
        return {"verdict": self.verdict, "witness": self.witness, "criterion": self.checked_criterion}


def _tables(f):
    G, K = f.domain, f.codomain
    v = np.asarray(f.values)
    ar = np.arange(G.order)
    X, Y = ar[:, None], ar[None, :]
    Yi, Y2 = G.inv[Y], G.mul[Y, Y]
    W = G.mul[G.mul[Yi, X], Y2]           # y^-1 x y^2, indexed [x, y]
    return G, K, v, X, Y, Yi, Y2, W


def gyro_hom_violations(f: GroupMap, criterion: str = "definition") -> np.ndarray:
    """Boolean ``[x, y]`` table of pairs where the chosen criterion fails.

    ``definition``: ``f(y^-1 x y^2) = f(y)^-1 f(x) f(y)^2``; ``powers``:
    ``f(y^-1 x y^2) = f(y^-1) f(x) f(y^2)``; ``deviation``: the homomorphism
    defects at ``(y^-1, x)`` and ``(y^-1 x, y^2)`` multiply to e.
    """
    if criterion not in CRITERIA:
        raise InvalidParameter(f"criterion must be one of {CRITERIA}")
    G, K, v, X, Y, Yi, Y2, W = _tables(f)
    km = K.mul
    if criterion == "definition":
        fy = v[Y]
        rhs = km[km[K.inv[fy], v[X]], km[fy, fy]]
        bad = v[W] != rhs
    elif criterion == "powers":
        rhs = km[km[v[Yi], v[X]], v[Y2]]
        bad = v[W] != rhs
        if v[0] != 0:
            bad = bad.copy()
            bad[0, 0] = True
    else:
        def dt(a, b):
            return km[km[v[a], v[b]], K.inv[v[G.mul[a, b]]]]
        prod = km[dt(Yi, X), dt(G.mul[Yi, X], Y2)]
        bad = prod != 0
        if v[0] != 0:
            bad = bad.copy()
            bad[0, 0] = True
    return np.broadcast_to(bad, (G.order, G.order))


def is_gyro_hom(f: GroupMap, criterion: str = "definition") -> GyroHomReport:
    bad = gyro_hom_violations(f, criterion)
    if bad.any():
        x, y = (int(i) for i in np.argwhere(bad)[0])
        G = f.domain
        return GyroHomReport(False, (G.labels[x], G.labels[y]), criterion)
    return GyroHomReport(True, None, criterion)


# ---------------------------------------------------------------------------
# enumeration and isomorphism


@dataclass
class GHomResult:
    maps: list
    nodes: int
    invariants: Optional[list] = None     # GHom(G, K) under pointwise product, K abelian

    def __len__(self):
        return len(self.maps)


def enumerate_gyro_homs(G: FiniteGroup, K: FiniteGroup, cap: int = HOM_ENUM_CAP) -> GHomResult:
    """All gyro-homomorphisms ``G -> K`` (homomorphisms of the o_1 loops).

    Candidates for ``f(a)`` are restricted to elements whose order divides
    the order of ``a``, since ``f(a^n) = f(a)^n``.
    """
    if G.order * K.order > cap:
        raise CapExceeded("|G|*|K| for gyro-hom enumeration", G.order * K.order, cap)
    dom, cod = circ_n(G, 1).op, circ_n(K, 1).op
    allowed = (G.element_orders[:, None] % K.element_orders[None, :]) == 0
    res = magma_homs(dom, cod, allowed=allowed, first_only=False)
    maps = [GroupMap(G, K, m) for m in sorted(res.maps, key=lambda a: a.tolist())]
    inv = None
    if K.is_abelian:
        orders = []
        for m in maps:
            o = 1
            for x in np.unique(m.values):
                o = lcm(o, int(K.element_orders[x]))
            orders.append(o)
        inv = abelian_invariants_from_orders(orders)
    return GHomResult(maps, res.nodes, inv)


def gyro_isomorphism_search(G: FiniteGroup, K: FiniteGroup) -> SearchResult:
    if G.order != K.order:
        return SearchResult()
    if G.order > 4096:
        raise CapExceeded("gyro-isomorphism order", G.order, 4096)
    A, B = circ_n(G, 1).op, circ_n(K, 1).op
    inv_a = np.column_stack([magma_invariants(A), G.element_orders])
    inv_b = np.column_stack([magma_invariants(B), K.element_orders])
    return find_isomorphism(A, B, inv_a, inv_b)


def are_gyro_isomorphic(G: FiniteGroup, K: FiniteGroup) -> Optional[GroupMap]:
    """A bijective gyro-homomorphism ``G -> K``, or None after exhaustive search."""
    res = gyro_isomorphism_search(G, K)
    return GroupMap(G, K, res.witness) if res.found else None


# ---------------------------------------------------------------------------
# sub right loops under gyro-homomorphisms


def image_of_subloop(f: GroupMap, S) -> np.ndarray:
    return np.unique(f.values[np.asarray(list(S), dtype=np.int64)])


def preimage_of_subloop(f: GroupMap, T) -> np.ndarray:
    mask = np.zeros(f.codomain.order, dtype=bool)
    mask[np.asarray(list(T), dtype=np.int64)] = True
    return np.flatnonzero(mask[f.values])


def is_closed(op: np.ndarray, subset) -> bool:
    s = np.asarray(sorted(set(int(x) for x in subset)), dtype=np.int64)
    if 0 not in s:
        return False
    mask = np.zeros(len(op), dtype=bool)
    mask[s] = True
    return bool(mask[op[np.ix_(s, s)]].all())


@dataclass
class FirstIsoReport:
    verdict: bool
    kernel: np.ndarray                 # congruence class of e
    classes: int
    image_order: int
    note: str = "normal sub right loop read as the kernel of a right-loop homomorphism"


def first_isomorphism_check(f: GroupMap) -> FirstIsoReport:
    """Image of a gyro-hom is isomorphic to the domain loop modulo the kernel congruence."""
    dom = circ_n(f.domain, 1).op
    cod = circ_n(f.codomain, 1).op
    v = np.asarray(f.values)
    img = np.unique(v)
    pos = np.full(f.codomain.order, -1, dtype=np.int64)
    pos[img] = np.arange(len(img))
    cls = pos[v]                                  # class of x = position of f(x) in the image
    k = len(img)
    keys = (cls[:, None] * k + cls[None, :]).ravel()
    vals = cls[dom].ravel()
    op = np.full(k * k, -1, dtype=np.int64)
    op[keys] = vals
    well_defined = bool(np.array_equal(op[keys], vals))
    op = op.reshape(k, k)
    ok = well_defined
    if ok:
        # induced bijection class -> image element must be a loop isomorphism onto the subloop
        sub = cod[np.ix_(img, img)]
        ok = bool(np.array_equal(pos[sub], op)) and is_closed(cod, img)
    return FirstIsoReport(ok, np.flatnonzero(v == 0), k, len(img))


# ---------------------------------------------------------------------------
# gyro-semidirect decompositions


@dataclass
class SemidirectReport:
    verdict: bool
    product_is_G: bool
    square_condition: bool
    transversal: bool
    reason: Optional[str] = None

    @property
    def agrees(self) -> bool:
        return self.verdict == self.transversal or self.reason is not None


def is_gyro_semidirect(G: FiniteGroup, Hsub, S) -> SemidirectReport:
    """``G = H S`` and ``H y^2 n S = {y^2}`` for all ``y`` in ``S``.

    ``S`` must be a sub right loop of ``(G, o_1)``; if it is not, the verdict
    is False with the reason recorded.  The right-transversal test runs
    alongside as an independent check.
    """
    H = np.asarray(sorted(set(int(h) for h in Hsub)), dtype=np.int64)
    Sx = np.asarray(sorted(set(int(s) for s in S)), dtype=np.int64)
    if not is_normal(G, H):
        raise NotNormal("Hsub is not a normal subgroup")
    op = circ_n(G, 1).op
    if not is_closed(op, Sx):
        return SemidirectReport(False, False, False, False, "S is not a sub right loop of (G, o1)")
    HS = np.unique(G.mul[H[:, None], Sx[None, :]])
    product = len(HS) == G.order
    smask = np.zeros(G.order, dtype=bool)
    smask[Sx] = True
    sq = True
    for y in Sx:
        y2 = int(G.mul[y, y])
        coset = G.mul[H, y2]
        if set(coset[smask[coset]].tolist()) != {y2}:
            sq = False
            break
    coset_of = G.mul[H[:, None], np.arange(G.order)[None, :]].min(axis=0)
    transversal = len(Sx) * len(H) == G.order and len(np.unique(coset_of[Sx])) == len(Sx)
    return SemidirectReport(bool(product and sq), bool(product), sq, bool(transversal))


# ---------------------------------------------------------------------------
# gyro-splittings


@dataclass
class SplittingResult:
    section: Optional[GroupMap]
    method: str
    certificate: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.section is not None

    def as_dict(self):
        return {"found": self.found, "method": self.method,
                "section": None if self.section is None else
                [self.section.codomain.labels[int(v)] for v in self.section.values],
                "certificate": self.certificate}


def _section_allowed(E: ExtensionRecord) -> np.ndarray:
    K, G = E.K, E.G
    fibre = E.beta.values[None, :] == np.arange(K.order)[:, None]
    # t(x)^k = t(x^k) forces equal orders
    same_order = K.element_orders[:, None] == G.element_orders[None, :]
    return fibre & same_order


def gyro_splittings(E: ExtensionRecord, limit: Optional[int] = 1) -> list[np.ndarray]:
    """Gyro-homomorphic sections found by backtracking (at most ``limit``)."""
    K = E.K
    if K.order > SECTION_SEARCH_CAP:
        raise CapExceeded("section search |K|", K.order, SECTION_SEARCH_CAP)
    dom, cod = circ_n(K, 1).op, circ_n(E.G, 1).op
    res = magma_homs(dom, cod, allowed=_section_allowed(E), first_only=limit == 1)
    maps = res.maps if limit is None else res.maps[:limit]
    return maps


def _search_splitting(E: ExtensionRecord) -> SplittingResult:
    K = E.K
    if K.order > SECTION_SEARCH_CAP:
        raise CapExceeded("section search |K|", K.order, SECTION_SEARCH_CAP)
    dom, cod = circ_n(K, 1).op, circ_n(E.G, 1).op
    res = magma_homs(dom, cod, allowed=_section_allowed(E), first_only=True)
    cert = {"nodes": res.nodes, "exhausted": res.exhausted,
            "generators": [K.labels[g] for g in res.generators]}
    sec = GroupMap(K, E.G, res.witness) if res.found else None
    return SplittingResult(sec, "search", cert)


def _linear_splitting(E: ExtensionRecord) -> SplittingResult:
    from .cohomology import cocycle_spaces, factor_system_of, one_cochain_table
    kernel, f, t = factor_system_of(E)
    S = cocycle_spaces(kernel)
    dec = S.gyro_decomposition(f)
    cert = {"GH2": list(S.GH2.factors), "GZ2_plus_B2_order": S.GZ2_plus_B2.order(),
            "Z2_order": S.Z2.order()}
    if dec is None:
        return SplittingResult(None, "linear", cert)
    _, g = dec
    gtab = one_cochain_table(kernel, g)
    # t'(x) = alpha(-g(x)) t(x) has factor system f - dg, which lies in GZ2
    H, G = E.H, E.G
    sec = G.mul[E.alpha.values[H.inv[gtab]], t]
    return SplittingResult(GroupMap(E.K, G, sec), "linear", cert)


def find_gyro_splitting(E: ExtensionRecord, method: str = "auto") -> SplittingResult:
    """A section ``K -> G`` of the extension that is a gyro-homomorphism, if any.

    ``linear``: abelian kernel, decides ``[f] in GZ2 + B2`` and corrects the
    section by the solving 1-cochain.  ``search``: backtracking over the
    fibres of ``beta`` as a loop homomorphism ``(K, o1) -> (G, o1)``.
    ``auto`` picks linear when the kernel is abelian and small enough.
    """
    if method not in ("auto", "linear", "search"):
        raise InvalidParameter("method must be auto, linear or search")
    if method == "auto":
        from .cohomology import COCHAIN_CAP
        method = "linear" if E.H.is_abelian and (E.K.order - 1) ** 2 * 4 <= COCHAIN_CAP else "search"
    res = _linear_splitting(E) if method == "linear" else _search_splitting(E)
    if res.section is not None:
        if not np.array_equal(E.beta.values[res.section.values], np.arange(E.K.order)):
            raise NoSection("computed map is not a section")
        res.certificate["certified"] = is_gyro_hom(res.section).verdict
    return res


# ---------------------------------------------------------------------------
# left exactness


@dataclass
class LeftExactReport:
    ghom_K: int
    ghom_G: int
    ghom_H: int
    image_beta_star: int
    kernel_alpha_star: int
    exact: bool


def ghom_left_exactness(E: ExtensionRecord, A: FiniteGroup) -> LeftExactReport:
    """Exactness of ``GHom(K, A) -> GHom(G, A) -> GHom(H, A)`` at the middle term."""
    gk = enumerate_gyro_homs(E.K, A).maps
    gg = enumerate_gyro_homs(E.G, A).maps
    gh = enumerate_gyro_homs(E.H, A).maps
    img = {tuple(m.values[E.beta.values].tolist()) for m in gk}
    ker = {tuple(m.values.tolist()) for m in gg if np.all(m.values[E.alpha.values] == 0)}
    return LeftExactReport(len(gk), len(gg), len(gh), len(img), len(ker), img == ker)
