"""The gyro-square ``K box K`` and the free gyro-split central extension ``U``.

``K box K`` is the abelian group on symbols ``x box y`` subject to

    (i)   e box x = x box e = 0,
    (ii)  x box y + xy box z = y box z + x box yz,
    (iii) y^-1 box x + y^-1 x box y^2 = 0.

Homomorphisms ``K box K -> A`` are exactly the normalized gyro-cocycles with
trivial action.  The group is reduced modulo ``E = |K| exp(K)``, which loses
nothing: with ``F(x) = sum_z x box z``, relation (ii) summed over ``z`` gives
``|K| (x box y) = F(x) + F(y) - F(xy)``; feeding that into (iii) shows ``F`` is
a gyro-homomorphism to an abelian group, so ``ord(x) F(x) = 0`` and
``exp(K) |K| (x box y) = 0``.

``U = (K box K) x K`` with ``(a, x)(b, y) = (a + b + x box y, xy)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .cohomology import cocycle_spaces, extension_from_factor_system, trivial_kernel
from .errors import CapExceeded, NoSection, NotAHomomorphism, RelationViolation
from .groups import (ExtensionRecord, FiniteGroup, GroupMap, abelian_decomposition, abelian_group,
                     abelian_invariants, commutator_subgroup, cyclic, subgroup_as_group)
from .intlin import presentation_quotient, solve_mod

BOXED_CAP = 64


@dataclass(frozen=True, eq=False)
class BoxedSquare:
    K: FiniteGroup
    factors: list                 # invariant factors of K box K
    canon: np.ndarray             # canon[x, y] = coordinates of x box y
    exponent_bound: int
    relations: int

    @property
    def order(self) -> int:
        return int(np.prod(self.factors)) if self.factors else 1

    @cached_property
    def group(self) -> FiniteGroup:
        return abelian_group(self.factors, name=f"{self.K.name}[x]{self.K.name}")

    @cached_property
    def weights(self) -> np.ndarray:
        f = self.factors
        return np.array([int(np.prod(f[i + 1:])) for i in range(len(f))], dtype=np.int64)

    def index(self, coords) -> np.ndarray:
        """Element index in :attr:`group` of coordinate rows."""
        c = np.asarray(coords, dtype=np.int64)
        if not self.factors:
            return np.zeros(c.shape[:-1], dtype=np.int64)
        return (c % np.array(self.factors)) @ self.weights

    @cached_property
    def pair_table(self) -> np.ndarray:
        """``[x, y] -> index of x box y`` in :attr:`group`."""
        return self.index(self.canon)

    def relation_violations(self) -> dict:
        """Counts of relation instances that fail under the canonical map (all zero)."""
        K, C = self.K, self.canon
        d = np.array(self.factors, dtype=np.int64)
        if not self.factors:
            return {"i": 0, "ii": 0, "iii": 0}
        ar = np.arange(K.order)
        X, Y, Z = ar[:, None, None], ar[None, :, None], ar[None, None, :]
        r1 = int(np.any(C[0] % d, axis=-1).sum() + np.any(C[:, 0] % d, axis=-1).sum())
        r2 = (C[X, Y] + C[K.mul[X, Y], Z] - C[Y, Z] - C[X, K.mul[Y, Z]]) % d
        x, y = ar[:, None], ar[None, :]
        yi = K.inv[y]
        r3 = (C[yi, x] + C[K.mul[yi, x], K.mul[y, y]]) % d
        return {"i": r1, "ii": int(np.any(r2, axis=-1).sum()), "iii": int(np.any(r3, axis=-1).sum())}

    def report(self) -> dict:
        K = self.K
        table = {f"{K.labels[x]}|{K.labels[y]}": [int(c) for c in self.canon[x, y]]
                 for x in range(K.order) for y in range(K.order) if np.any(self.canon[x, y])}
        return {"group": K.name, "invariant_factors": list(self.factors), "order": self.order,
                "relations": self.relations, "exponent_bound": self.exponent_bound,
                "relation_violations": self.relation_violations(), "canonical_form": table}


def relation_rows(K: FiniteGroup):
    """Sparse rows of relations (i)-(iii) over generators ``x |K| + y``."""
    n = K.order
    mul, inv = K.mul, K.inv
    for x in range(n):
        yield {x: 1}                      # e box x
        yield {x * n: 1}                  # x box e
    for y in range(1, n):
        yi, y2 = int(inv[y]), int(mul[y, y])
        for x in range(n):
            row: dict = {}
            for key in (yi * n + x, int(mul[yi, x]) * n + y2):
                row[key] = row.get(key, 0) + 1
            yield row
    for x in range(1, n):
        for y in range(1, n):
            xy = int(mul[x, y])
            for z in range(1, n):
                row = {}
                for key, v in ((x * n + y, 1), (xy * n + z, 1), (y * n + z, -1), (x * n + int(mul[y, z]), -1)):
                    row[key] = row.get(key, 0) + v
                yield row


def boxed_square(K: FiniteGroup, exponent_bound: Optional[int] = None) -> BoxedSquare:
    if K.order > BOXED_CAP:
        raise CapExceeded("boxed square |K|", K.order, BOXED_CAP)
    n = K.order
    E = exponent_bound or n * K.exponent
    count = [0]

    def counted():
        for r in relation_rows(K):
            count[0] += 1
            yield r

    factors, coords = presentation_quotient(counted(), n * n, E)
    canon = coords.reshape(n, n, len(factors))
    BS = BoxedSquare(K, factors, canon, E, count[0])
    bad = BS.relation_violations()
    if any(bad.values()):
        raise RelationViolation(f"canonical form violates relations: {bad}")
    return BS


# ---------------------------------------------------------------------------
# homomorphisms out of K box K


def hom_from_pair_values(BS: BoxedSquare, A: FiniteGroup, values) -> Optional[np.ndarray]:
    """Images of the invariant-factor generators under the hom with ``x box y -> values[x, y]``.

    Returns None when no homomorphism ``K box K -> A`` takes those values.
    """
    dec = abelian_decomposition(A)
    rA, mA = dec.rank, dec.moduli
    k = len(BS.factors)
    n = BS.K.order
    vals = dec.coords[np.asarray(values, dtype=np.int64).reshape(n * n)]        # (n^2, rA)
    if k == 0:
        return np.zeros(0, dtype=np.int64) if not np.any(vals) else None
    if rA == 0:
        return np.zeros(k, dtype=np.int64)
    C = BS.canon.reshape(n * n, k)
    rows, rhs, mods = [], [], []
    # unknown u[j, i] at column j * rA + i
    for p in range(n * n):
        for i in range(rA):
            row = np.zeros(k * rA, dtype=np.int64)
            row[np.arange(k) * rA + i] = C[p]
            rows.append(row); rhs.append(vals[p, i]); mods.append(mA[i])
    for j, d in enumerate(BS.factors):
        for i in range(rA):
            row = np.zeros(k * rA, dtype=np.int64)
            row[j * rA + i] = d
            rows.append(row); rhs.append(0); mods.append(mA[i])
    mods = np.array(mods, dtype=np.int64)
    A_ = np.array(rows) % mods[:, None]
    u = solve_mod(A_, np.array(rhs), np.tile(mA, k), mods)
    if u is None:
        return None
    return dec.elements(u.reshape(k, rA))


def homs_from_square(BS: BoxedSquare, A: FiniteGroup) -> list[np.ndarray]:
    """Every homomorphism ``K box K -> A`` as a pair table ``[x, y] -> A index``."""
    dec = abelian_decomposition(A)
    k = len(BS.factors)
    n = BS.K.order
    orders = A.element_orders
    choices = [np.flatnonzero(d % orders == 0) for d in BS.factors]
    out = []
    for imgs in itertools.product(*choices) if k else [()]:
        imgs = np.array(imgs, dtype=np.int64)
        coords = (BS.canon.reshape(n * n, k) @ dec.coords[imgs]) if k else np.zeros((n * n, dec.rank), dtype=np.int64)
        out.append(dec.elements(coords).reshape(n, n).astype(np.int64))
    return out


# ---------------------------------------------------------------------------
# the free extension U


@dataclass(frozen=True, eq=False)
class UGroup:
    square: BoxedSquare
    extension: ExtensionRecord
    central: bool
    section_certified: bool
    associative_checked: bool

    @property
    def G(self) -> FiniteGroup:
        return self.extension.G


def u_group(BS: BoxedSquare) -> UGroup:
    from .morphisms import is_gyro_hom
    K = BS.K
    A = BS.group
    n = A.order * K.order
    if n > 4096:
        raise CapExceeded("U group order", n, 4096)
    kern = trivial_kernel(K, A)
    E = extension_from_factor_system(kern, BS.pair_table, check=True)
    E.notes["kind"] = "U"
    certified = is_gyro_hom(E.section).verdict
    return UGroup(BS, E, E.is_central(), certified, n <= 512)


@dataclass
class MorphismTriple:
    lam: GroupMap            # K box K -> H'
    mu: GroupMap             # U -> G'
    nu: GroupMap             # K -> K'
    commutes: bool
    mu_is_hom: bool


def free_morphism_to(BS: BoxedSquare, Eprime: ExtensionRecord, nu: GroupMap,
                     U: Optional[UGroup] = None) -> MorphismTriple:
    """The morphism ``U -> E'`` over ``nu``.

    ``lam(x box y) = f^t(nu x, nu y)`` and ``mu(a, x) = alpha'(lam a) t(nu x)``.
    ``mu`` is a homomorphism exactly when ``nu`` is a group homomorphism, so a
    gyro-homomorphism ``nu`` that is not one is rejected.
    """
    from .cohomology import factor_system_of
    from .morphisms import is_gyro_hom
    if Eprime.section is None:
        raise NoSection("target extension has no gyro-splitting attached")
    if not Eprime.is_central():
        raise RelationViolation("target extension is not central")
    if not is_gyro_hom(nu).verdict:
        raise NotAHomomorphism("nu is not a gyro-homomorphism")
    if not nu.is_homomorphism():
        raise NotAHomomorphism("mu is a homomorphism only when nu is a group homomorphism")
    if not is_gyro_hom(Eprime.section).verdict:
        raise RelationViolation("attached section is not a gyro-homomorphism")
    U = U or u_group(BS)
    Hp = Eprime.H
    _, ft, t = factor_system_of(Eprime)
    nv = nu.values
    vals = ft[nv[:, None], nv[None, :]]
    gens = hom_from_pair_values(BS, Hp, vals)
    if gens is None:
        raise RelationViolation("factor set of the section does not satisfy the boxed relations")
    dec = abelian_decomposition(Hp)
    box = BS.group
    bcoords = np.array(list(np.ndindex(*BS.factors)), dtype=np.int64).reshape(box.order, len(BS.factors))
    lam_vals = dec.elements(bcoords @ dec.coords[gens]) if len(BS.factors) else np.zeros(box.order, dtype=np.int64)
    lam = GroupMap(box, Hp, lam_vals)
    G, Gp = U.G, Eprime.G
    idx = np.arange(G.order)
    a, x = idx % box.order, idx // box.order
    mu_vals = Gp.mul[Eprime.alpha.values[lam_vals[a]], t[nv[x]]]
    mu = GroupMap(G, Gp, mu_vals)
    hom = mu.is_homomorphism() and lam.is_homomorphism()
    sq1 = np.array_equal(mu.values[U.extension.alpha.values], Eprime.alpha.values[lam.values])
    sq2 = np.array_equal(Eprime.beta.values[mu.values], nv[U.extension.beta.values])
    return MorphismTriple(lam, mu, nu, bool(sq1 and sq2), bool(hom))


# ---------------------------------------------------------------------------
# gyro-Schur multiplier


@dataclass
class SchurResult:
    invariants: list
    order: int
    modulus: int
    gh2_order: int
    gh2_factors: list

    @property
    def agree(self) -> bool:
        return self.order == self.gh2_order

    def as_dict(self):
        return {"invariant_factors": self.invariants, "order": self.order, "modulus": self.modulus,
                "GH2_order": self.gh2_order, "GH2": self.gh2_factors, "agree": self.agree}


def gyro_schur_multiplier(K: FiniteGroup) -> SchurResult:
    """``(K box K x {e}) n [U, U]`` with a cross-check against ``|GH^2(K, Z_m)|``, m = exp(U)."""
    U = u_group(boxed_square(K))
    G = U.G
    comm = commutator_subgroup(G)
    M = np.intersect1d(comm, U.extension.alpha.values)
    Mg, _ = subgroup_as_group(G, M)
    inv = abelian_invariants(Mg)
    m = G.exponent
    S = cocycle_spaces(trivial_kernel(K, cyclic(m)))
    return SchurResult(inv, len(M), m, S.GH2.order(), list(S.GH2.factors))
