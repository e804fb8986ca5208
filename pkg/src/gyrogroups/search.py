"""Backtracking search for homomorphisms between finite magmas.

Both magmas are given as operation tables with the identity at index 0.  The
search assigns images to a generating set of the domain one at a time and
propagates through the closure: once ``x`` and ``y`` have images,
``op(x, y)`` is forced to ``op'(phi(x), phi(y))``.  Any conflict prunes the
branch.  Candidate images can be restricted by a boolean ``allowed`` matrix
(element invariants, fibres of a projection, ...).

Every result records the number of search nodes visited, which is the
exhaustion certificate when no map is found.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import CapExceeded


@dataclass
class SearchResult:
    maps: list = field(default_factory=list)
    nodes: int = 0
    exhausted: bool = True
    generators: tuple = ()

    @property
    def found(self) -> bool:
        return bool(self.maps)

    @property
    def witness(self) -> Optional[np.ndarray]:
        return self.maps[0] if self.maps else None


def closure(op: np.ndarray, seed) -> np.ndarray:
    """Smallest subset containing ``seed`` and 0 that is closed under ``op``."""
    have = np.zeros(len(op), dtype=bool)
    have[0] = True
    have[np.asarray(list(seed), dtype=np.int64)] = True
    while True:
        cur = np.flatnonzero(have)
        new = have.copy()
        new[op[np.ix_(cur, cur)].ravel()] = True
        if new.sum() == have.sum():
            return cur
        have = new


def greedy_generators(op: np.ndarray, priority=None) -> list[int]:
    """A generating set chosen greedily along ``priority`` (default: index order)."""
    n = len(op)
    order = range(n) if priority is None else priority
    gens: list[int] = []
    have = np.zeros(n, dtype=bool)
    have[0] = True
    for x in order:
        if have.all():
            break
        if not have[x]:
            gens.append(int(x))
            have[closure(op, gens)] = True
    return gens


def _propagate(dom, cod, phi, used, allowed, injective):
    """Extend ``phi`` through the closure; False on conflict.  Mutates in place."""
    while True:
        M = np.flatnonzero(phi >= 0)
        P = dom[np.ix_(M, M)].ravel()
        Q = cod[np.ix_(phi[M], phi[M])].ravel()
        cur = phi[P]
        known = cur >= 0
        if np.any(cur[known] != Q[known]):
            return False
        P, Q = P[~known], Q[~known]
        if len(P) == 0:
            return True
        # one image per new element; clashes surface in the next round
        P, idx = np.unique(P, return_index=True)
        Q = Q[idx]
        if allowed is not None and not np.all(allowed[P, Q]):
            return False
        if injective:
            if np.any(used[Q]) or len(np.unique(Q)) != len(Q):
                return False
            used[Q] = True
        phi[P] = Q


def magma_homs(dom: np.ndarray, cod: np.ndarray, allowed: Optional[np.ndarray] = None,
               injective: bool = False, first_only: bool = True, generators=None,
               node_cap: int = 50_000_000) -> SearchResult:
    """Homomorphisms ``dom -> cod`` sending 0 to 0, in canonical order.

    The canonical order is lexicographic in the images of the generators,
    with generators taken in the order returned by :func:`greedy_generators`.
    """
    dom = np.asarray(dom)
    cod = np.asarray(cod)
    n, m = len(dom), len(cod)
    if allowed is not None and not allowed[0, 0]:
        return SearchResult(nodes=0, generators=())
    if generators is None:
        if allowed is not None:
            counts = allowed.sum(axis=1)
            priority = sorted(range(n), key=lambda x: (counts[x], x))
        else:
            priority = None
        generators = greedy_generators(dom, priority)
    gens = list(generators)
    res = SearchResult(generators=tuple(gens))

    phi0 = np.full(n, -1, dtype=np.int64)
    used0 = np.zeros(m, dtype=bool)
    phi0[0] = 0
    used0[0] = True
    if not _propagate(dom, cod, phi0, used0, allowed, injective):
        return res

    def rec(i, phi, used):
        res.nodes += 1
        if res.nodes > node_cap:
            raise CapExceeded("search nodes", res.nodes, node_cap)
        if i == len(gens):
            if np.all(phi >= 0):
                res.maps.append(phi.copy())
                return first_only
            return False
        x = gens[i]
        if phi[x] >= 0:
            return rec(i + 1, phi, used)
        cands = np.arange(m) if allowed is None else np.flatnonzero(allowed[x])
        if injective:
            cands = cands[~used[cands]]
        for y in cands:
            phi2, used2 = phi.copy(), used.copy()
            phi2[x] = y
            if injective:
                used2[y] = True
            if _propagate(dom, cod, phi2, used2, allowed, injective):
                if rec(i + 1, phi2, used2):
                    return True
        return False

    rec(0, phi0, used0)
    res.exhausted = not (first_only and res.found)
    return res


def magma_invariants(op: np.ndarray) -> np.ndarray:
    """Per-element invariants preserved by magma isomorphisms fixing 0.

    Columns: right-power order (``x, x*x, (x*x)*x, ...`` until 0, or -1),
    number of elements commuting with ``x``, right-power order of ``x*x``.
    """
    n = len(op)
    ar = np.arange(n)
    orders = np.full(n, -1, dtype=np.int64)
    cur = ar.copy()
    for k in range(1, n + 1):
        hit = (cur == 0) & (orders < 0)
        orders[hit] = k
        cur = op[cur, ar]
    commuting = np.sum(op == op.T, axis=1)
    sq = orders[op[ar, ar]]
    return np.stack([orders, commuting, sq], axis=1)


def find_isomorphism(dom: np.ndarray, cod: np.ndarray, inv_dom=None, inv_cod=None) -> SearchResult:
    """Isomorphism search between two magmas with identity 0."""
    dom, cod = np.asarray(dom), np.asarray(cod)
    if len(dom) != len(cod):
        return SearchResult()
    if inv_dom is None:
        inv_dom = magma_invariants(dom)
    if inv_cod is None:
        inv_cod = magma_invariants(cod)
    inv_dom = np.asarray(inv_dom).reshape(len(dom), -1)
    inv_cod = np.asarray(inv_cod).reshape(len(cod), -1)
    key_d = sorted(map(tuple, inv_dom.tolist()))
    key_c = sorted(map(tuple, inv_cod.tolist()))
    if key_d != key_c:
        return SearchResult()
    allowed = np.all(inv_dom[:, None, :] == inv_cod[None, :, :], axis=2)
    return magma_homs(dom, cod, allowed=allowed, injective=True, first_only=True)
