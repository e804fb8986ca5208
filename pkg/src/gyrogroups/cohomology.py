"""Second cohomology and gyro-cohomology with abelian coefficients.

Cochains are normalized throughout: ``f(e, y) = f(x, e) = 0`` for 2-cochains
and ``g(e) = 0`` for 1-cochains.  ``H`` is decomposed once into cyclic factors
``Z/m_1 + ... + Z/m_r`` and a 2-cochain becomes the integer vector of the
coordinates of ``f(x, y)`` for ``x, y != e``, so every space below is a
subgroup of ``(Z/m_1 + ... + Z/m_r)^((n-1)^2)``.

Conventions: an extension ``H -> G -> K`` with section ``t`` gives
``sigma_x(h) = t(x) h t(x)^-1`` and ``t(x) t(y) = f(x, y) t(xy)``, so the
cocycle identity reads ``f(x, y) + f(xy, z) = sigma_x f(y, z) + f(x, yz)``
and the gyro conditions read

    f(y^-1, x) + f(y^-1 x, y^2) = 0,
    sigma_{y^-1} f(x, y^2) + f(y^-1, x y^2) = 0.

Replacing ``t`` by ``x -> g(x) t(x)`` changes ``f`` by the coboundary
``dg(x, y) = g(x) + sigma_x g(y) - g(xy)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Optional

import numpy as np

from .errors import (BadModulus, CapExceeded, InvalidParameter, KernelNotAbelian, NoSection,
                     NotACocycle, NotCentral)
from .groups import (AbelianDecomposition, ExtensionRecord, FiniteGroup, GroupMap,
                     abelian_decomposition, abelian_invariants_from_orders, commutator_subgroup,
                     cyclic, isomorphism_search, subgroup_as_group, _frozen, TABLE_CAP,
                     build_from_table, abelian_invariants)
from .intlin import Quotient, Subgroup, invariant_factors, lcm, solve_mod
from .search import magma_homs

COCHAIN_CAP = 1500          # coordinates of a 2-cochain
WORK_CAP = 2 * 10 ** 10     # equations x coordinates^2 for the kernel computation


# ---------------------------------------------------------------------------
# abstract kernels


@dataclass(frozen=True, eq=False)
class AbstractKernel:
    """Abelian ``H`` with an action ``sigma: K -> Aut(H)``; ``sigma[x]`` is a table."""

    K: FiniteGroup
    H: FiniteGroup
    sigma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "sigma", _frozen(self.sigma))
        if not self.H.is_abelian:
            raise KernelNotAbelian(f"{self.H.name or 'H'} is not abelian")

    @classmethod
    def trivial(cls, K: FiniteGroup, H: FiniteGroup) -> "AbstractKernel":
        return cls(K, H, np.tile(np.arange(H.order), (K.order, 1)))

    def validate(self) -> None:
        s, H, K = self.sigma, self.H, self.K
        if s.shape != (K.order, H.order):
            raise InvalidParameter("sigma table has the wrong shape")
        for x in range(K.order):
            p = s[x]
            if len(np.unique(p)) != H.order or not np.array_equal(p[H.mul], H.mul[p[:, None], p[None, :]]):
                raise InvalidParameter(f"sigma({K.labels[x]}) is not an automorphism")
        if not np.array_equal(s[0], np.arange(H.order)):
            raise InvalidParameter("sigma(e) is not the identity")
        # sigma_{xy} = sigma_x o sigma_y
        comp = s[np.arange(K.order)[:, None, None], s[None, :, :]]      # comp[x, y] = s[x][s[y]]
        if not np.array_equal(comp, s[K.mul]):
            raise InvalidParameter("sigma is not a homomorphism K -> Aut(H)")

    @property
    def is_trivial(self) -> bool:
        return bool(np.all(self.sigma == np.arange(self.H.order)))

    @cached_property
    def dec(self) -> AbelianDecomposition:
        return abelian_decomposition(self.H)

    @property
    def moduli(self) -> np.ndarray:
        return self.dec.moduli

    @property
    def r(self) -> int:
        return self.dec.rank

    @cached_property
    def act(self) -> np.ndarray:
        """``act[x] @ coords(h) = coords(sigma_x(h))`` modulo the moduli."""
        r = self.r
        gens = [self.dec.element(np.eye(r, dtype=np.int64)[j]) for j in range(r)]
        A = np.zeros((self.K.order, r, r), dtype=np.int64)
        for j, g in enumerate(gens):
            A[:, :, j] = self.dec.coords[self.sigma[:, g]]
        return A

    @cached_property
    def fixed(self) -> np.ndarray:
        """``A = {h : sigma_x(h) = h for all x}``."""
        return np.flatnonzero(np.all(self.sigma == np.arange(self.H.order), axis=0))


def trivial_kernel(K: FiniteGroup, H: FiniteGroup) -> AbstractKernel:
    return AbstractKernel.trivial(K, H)


# ---------------------------------------------------------------------------
# cochain coordinates


class _Coords:
    """Index bookkeeping for normalized 1- and 2-cochains."""

    def __init__(self, kernel: AbstractKernel):
        self.kernel = kernel
        self.n = kernel.K.order
        self.r = kernel.r
        self.N = (self.n - 1) ** 2 * self.r
        self.M = (self.n - 1) * self.r
        self.moduli2 = np.tile(kernel.moduli, (self.n - 1) ** 2)
        self.moduli1 = np.tile(kernel.moduli, self.n - 1)

    def idx2(self, x, y, i):
        """Column of component ``i`` of ``f(x, y)``; -1 if x or y is e."""
        x, y, i = np.broadcast_arrays(np.asarray(x), np.asarray(y), np.asarray(i))
        out = ((x - 1) * (self.n - 1) + (y - 1)) * self.r + i
        return np.where((x == 0) | (y == 0), -1, out)

    def idx1(self, x, i):
        x, i = np.broadcast_arrays(np.asarray(x), np.asarray(i))
        return np.where(x == 0, -1, (x - 1) * self.r + i)


def _accumulate(rows: int, cols: int, R: list, C: list, V: list) -> np.ndarray:
    """Dense matrix from lists of (row, column, value) arrays; column -1 is dropped."""
    out = np.zeros((rows, cols), dtype=np.int64)
    if not R:
        return out
    trip = [np.broadcast_arrays(r, c, v) for r, c, v in zip(R, C, V)]
    R, C, V = (np.concatenate([t[k].ravel() for t in trip]) for k in range(3))
    keep = C >= 0
    np.add.at(out, (R[keep], C[keep]), V[keep])
    return out


def cochain_vector(kernel: AbstractKernel, f) -> np.ndarray:
    """Coordinate vector of a normalized 2-cochain given as a ``|K| x |K|`` table."""
    f = np.asarray(f, dtype=np.int64)
    if np.any(f[0, :] != 0) or np.any(f[:, 0] != 0):
        raise NotACocycle("2-cochain is not normalized (f(e, y) or f(x, e) nonzero)")
    return kernel.dec.coords[f[1:, 1:]].reshape(-1)


def cochain_table(kernel: AbstractKernel, v) -> np.ndarray:
    n, r = kernel.K.order, kernel.r
    f = np.zeros((n, n), dtype=np.int64)
    C = np.asarray(v, dtype=np.int64).reshape((n - 1) * (n - 1), r)
    f[1:, 1:] = kernel.dec.elements(C).reshape(n - 1, n - 1)
    return f


def one_cochain_table(kernel: AbstractKernel, v) -> np.ndarray:
    r = kernel.r
    g = np.zeros(kernel.K.order, dtype=np.int64)
    g[1:] = kernel.dec.elements(np.asarray(v, dtype=np.int64).reshape(kernel.K.order - 1, r))
    return g


def one_cochain_vector(kernel: AbstractKernel, g) -> np.ndarray:
    g = np.asarray(g, dtype=np.int64)
    if g[0] != 0:
        raise InvalidParameter("1-cochain is not normalized (g(e) != 0)")
    return kernel.dec.coords[g[1:]].reshape(-1)


# ---------------------------------------------------------------------------
# equation matrices


def cocycle_matrix(kernel: AbstractKernel, xs=None):
    """Rows of ``sigma_x f(y,z) - f(xy,z) + f(x,yz) - f(x,y)`` for triples with x in ``xs``."""
    c = _Coords(kernel)
    K, n, r = kernel.K, c.n, c.r
    xs = np.arange(1, n) if xs is None else np.asarray(xs)
    X, Y, Z = np.meshgrid(xs, np.arange(1, n), np.arange(1, n), indexing="ij")
    X, Y, Z = X.ravel(), Y.ravel(), Z.ravel()
    XY, YZ = K.mul[X, Y], K.mul[Y, Z]
    T = len(X)
    rows_R, rows_C, rows_V = [], [], []
    base = np.arange(T) * r
    for i in range(r):
        R = base + i
        for j in range(r):
            rows_R.append(R); rows_C.append(c.idx2(Y, Z, j)); rows_V.append(kernel.act[X, i, j])
        rows_R.append(R); rows_C.append(c.idx2(XY, Z, i)); rows_V.append(-np.ones(T, dtype=np.int64))
        rows_R.append(R); rows_C.append(c.idx2(X, YZ, i)); rows_V.append(np.ones(T, dtype=np.int64))
        rows_R.append(R); rows_C.append(c.idx2(X, Y, i)); rows_V.append(-np.ones(T, dtype=np.int64))
    A = _accumulate(T * r, c.N, rows_R, rows_C, rows_V)
    return A, np.tile(kernel.moduli, T)


def gyro_matrix(kernel: AbstractKernel):
    """Rows of both gyro conditions over all pairs ``(x, y)``."""
    c = _Coords(kernel)
    K, n, r = kernel.K, c.n, c.r
    X, Y = np.meshgrid(np.arange(n), np.arange(1, n), indexing="ij")
    X, Y = X.ravel(), Y.ravel()
    Yi, Y2 = K.inv[Y], K.mul[Y, Y]
    YiX = K.mul[Yi, X]
    XY2 = K.mul[X, Y2]
    T = len(X)
    one = np.ones(T, dtype=np.int64)
    R_, C_, V_ = [], [], []
    for i in range(r):
        R = np.arange(T) * r + i
        R_ += [R, R]
        C_ += [c.idx2(Yi, X, i), c.idx2(YiX, Y2, i)]
        V_ += [one, one]
        R2 = R + T * r
        for j in range(r):
            R_.append(R2); C_.append(c.idx2(X, Y2, j)); V_.append(kernel.act[Yi, i, j])
        R_.append(R2); C_.append(c.idx2(Yi, XY2, i)); V_.append(one)
    A = _accumulate(2 * T * r, c.N, R_, C_, V_)
    return A, np.tile(kernel.moduli, 2 * T)


def coboundary_matrix(kernel: AbstractKernel) -> np.ndarray:
    """Matrix of ``g -> dg`` from normalized 1-cochains to 2-cochains (N x M)."""
    c = _Coords(kernel)
    K, n, r = kernel.K, c.n, c.r
    X, Y = np.meshgrid(np.arange(1, n), np.arange(1, n), indexing="ij")
    X, Y = X.ravel(), Y.ravel()
    XY = K.mul[X, Y]
    R_, C_, V_ = [], [], []
    T = len(X)
    one = np.ones(T, dtype=np.int64)
    for i in range(r):
        R = c.idx2(X, Y, i)
        for j in range(r):
            R_.append(R); C_.append(c.idx1(Y, j)); V_.append(kernel.act[X, i, j])
        R_.append(R); C_.append(c.idx1(XY, i)); V_.append(-one)
        R_.append(R); C_.append(c.idx1(X, i)); V_.append(one)
    return _accumulate(c.N, c.M, R_, C_, V_)


def apply_mod(A, v, moduli) -> np.ndarray:
    return (np.asarray(A, dtype=np.int64) @ np.asarray(v, dtype=np.int64)) % moduli


def _check_caps(kernel: AbstractKernel):
    c = _Coords(kernel)
    if c.N > COCHAIN_CAP:
        raise CapExceeded("2-cochain coordinates", c.N, COCHAIN_CAP)
    work = (c.n - 1) ** 3 * c.r * c.N ** 2
    if work > WORK_CAP:
        raise CapExceeded("cocycle equation work", work, WORK_CAP)


# ---------------------------------------------------------------------------
# cocycle spaces


@dataclass(frozen=True, eq=False)
class CocycleSpaces:
    kernel: AbstractKernel
    moduli: np.ndarray            # coordinate moduli of a 2-cochain vector
    Z2: Subgroup
    B2: Subgroup
    GZ2: Subgroup
    GB2: Subgroup
    coboundary: np.ndarray        # N x M
    gyro_rows: np.ndarray
    gyro_moduli: np.ndarray
    normalized: bool = True

    @cached_property
    def H2(self) -> Quotient:
        return self.Z2.quotient(self.B2)

    @cached_property
    def GH2(self) -> Quotient:
        return self.GZ2.quotient(self.GB2)

    @cached_property
    def GZ2_plus_B2(self) -> Subgroup:
        return self.GZ2 + self.B2

    def vector(self, f) -> np.ndarray:
        return cochain_vector(self.kernel, f)

    def table(self, v) -> np.ndarray:
        return cochain_table(self.kernel, v)

    def is_cocycle(self, f) -> bool:
        return self.Z2.contains(self.vector(f))

    def is_gyro_cocycle(self, f) -> bool:
        return self.GZ2.contains(self.vector(f))

    def gh2_class(self, f) -> tuple:
        v = self.vector(f)
        if not self.GZ2.contains(v):
            raise NotACocycle("cochain is not a gyro-cocycle")
        return self.GH2.class_of(v)

    def h2_class(self, f) -> tuple:
        v = self.vector(f)
        if not self.Z2.contains(v):
            raise NotACocycle("cochain is not a cocycle")
        return self.H2.class_of(v)

    def gyro_decomposition(self, f):
        """``(z, g)`` with ``f = z + dg`` and ``z`` in GZ2, or None if f is not in GZ2 + B2."""
        v = self.vector(f)
        if not self.Z2.contains(v):
            raise NotACocycle("cochain is not a cocycle")
        A = (self.gyro_rows @ self.coboundary) % self.gyro_moduli[:, None]
        b = (self.gyro_rows @ v) % self.gyro_moduli
        c = _Coords(self.kernel)
        g = solve_mod(A, b, c.moduli1, self.gyro_moduli)
        if g is None:
            return None
        z = (v - self.coboundary @ g) % self.moduli
        return z, g

    def report(self) -> dict:
        return {
            "moduli_H": [int(m) for m in self.kernel.moduli],
            "coordinates": int(len(self.moduli)),
            "normalized_cochains": self.normalized,
            "orders": {"Z2": self.Z2.order(), "B2": self.B2.order(), "GZ2": self.GZ2.order(),
                       "GB2": self.GB2.order()},
            "H2": list(self.H2.factors),
            "GH2": list(self.GH2.factors),
            "GH2_representatives": [self.table(r).tolist() for r in self.GH2.representatives],
        }


def cocycle_spaces(kernel: AbstractKernel) -> CocycleSpaces:
    _check_caps(kernel)
    c = _Coords(kernel)
    whole = Subgroup.whole(c.moduli2)
    Z2 = whole
    # chunk by x to bound memory
    for x in range(1, c.n):
        A, mods = cocycle_matrix(kernel, [x])
        Z2 = Z2.kernel(A, mods)
    Gm, gmods = gyro_matrix(kernel)
    D = coboundary_matrix(kernel)
    B2 = Subgroup.whole(c.moduli1).image(D, c.moduli2) if c.M else Subgroup.zero(c.moduli2)
    GZ2 = Z2.kernel(Gm, gmods)
    GB2 = B2.kernel(Gm, gmods)
    return CocycleSpaces(kernel, c.moduli2, Z2, B2, GZ2, GB2, D, Gm, gmods)


# ---------------------------------------------------------------------------
# extensions and factor systems


def extension_from_factor_system(kernel: AbstractKernel, f, check: bool = True) -> ExtensionRecord:
    """``G = H x K`` with ``(a,x)(b,y) = (a + sigma_x(b) + f(x,y), xy)``.

    Element ``(a, x)`` has index ``x |H| + a``.  The section ``x -> (0, x)``
    is attached; ``notes['section_is_gyro']`` records whether ``f`` is a
    gyro-cocycle, i.e. whether that section is a gyro-homomorphism.
    """
    K, H = kernel.K, kernel.H
    f = np.asarray(f, dtype=np.int64)
    if f.shape != (K.order, K.order):
        raise InvalidParameter("factor system table has the wrong shape")
    if np.any(f[0, :] != 0) or np.any(f[:, 0] != 0):
        raise NotACocycle("factor system is not normalized")
    # cocycle identity checked directly on tables
    ar = np.arange(K.order)
    X, Y, Z = ar[:, None, None], ar[None, :, None], ar[None, None, :]
    lhs = H.mul[f[X, Y], f[K.mul[X, Y], Z]]
    rhs = H.mul[kernel.sigma[X, f[Y, Z]], f[X, K.mul[Y, Z]]]
    if not np.array_equal(lhs, rhs):
        x, y, z = (int(i) for i in np.argwhere(lhs != rhs)[0])
        raise NotACocycle(f"cocycle identity fails at ({K.labels[x]}, {K.labels[y]}, {K.labels[z]})")
    nh, nk = H.order, K.order
    n = nh * nk
    if n > 4096:
        raise CapExceeded("extension order", n, 4096)
    idx = np.arange(n)
    a, x = idx % nh, idx // nh
    A, B = a[:, None], a[None, :]
    Xx, Yy = x[:, None], x[None, :]
    first = H.mul[H.mul[A, kernel.sigma[Xx, B]], f[Xx, Yy]]
    mul = K.mul[Xx, Yy] * nh + first
    labels = tuple(f"({H.labels[i]},{K.labels[j]})" for i, j in zip(a, x))
    if check and n <= TABLE_CAP:
        G = build_from_table(labels, mul, name="ext")
    else:
        G = FiniteGroup(_frozen(mul), labels, "ext")
    alpha = GroupMap(H, G, np.arange(nh))
    beta = GroupMap(G, K, x)
    section = GroupMap(K, G, np.arange(nk) * nh)
    gyro = _gyro_conditions_hold(kernel, f)
    return ExtensionRecord(H, G, K, alpha, beta, section, {"section_is_gyro": gyro,
                                                           "factor_system": f})


def _gyro_conditions_hold(kernel, f) -> bool:
    K, H = kernel.K, kernel.H
    ar = np.arange(K.order)
    X, Y = ar[:, None], ar[None, :]
    Yi, Y2 = K.inv[Y], K.mul[Y, Y]
    c1 = H.mul[f[Yi, X], f[K.mul[Yi, X], Y2]]
    c2 = H.mul[kernel.sigma[Yi, f[X, Y2]], f[Yi, K.mul[X, Y2]]]
    return bool(np.all(c1 == 0) and np.all(c2 == 0))


def factor_system_of(E: ExtensionRecord, section=None):
    """``(kernel, f, t)`` for an extension with abelian kernel and a normalized section."""
    H, G, K = E.H, E.G, E.K
    if not H.is_abelian:
        raise KernelNotAbelian("kernel of the extension is not abelian")
    if section is None:
        section = E.section
    if section is None:
        t = np.array([int(np.flatnonzero(E.beta.values == x)[0]) for x in range(K.order)])
    else:
        t = np.asarray(section.values if isinstance(section, GroupMap) else section)
    if t[0] != 0:
        raise InvalidParameter("section must send e to e")
    ainv = E.alpha_inverse()
    av = E.alpha.values
    sigma = ainv[G.mul[G.mul[t[:, None], av[None, :]], G.inv[t][:, None]]]
    if np.any(sigma < 0):
        raise InvalidParameter("alpha(H) is not normal")
    f = ainv[G.mul[G.mul[t[:, None], t[None, :]], G.inv[t[K.mul]]]]
    return AbstractKernel(K, H, sigma), f, t


# ---------------------------------------------------------------------------
# classification


@dataclass
class GextClass:
    coords: tuple
    cocycle: np.ndarray
    extension: ExtensionRecord


def classify_gext(kernel: AbstractKernel, spaces: Optional[CocycleSpaces] = None) -> list[GextClass]:
    """One gyro-split extension per element of GH^2."""
    S = spaces or cocycle_spaces(kernel)
    out = []
    for coords, v in S.GH2.elements():
        f = S.table(v)
        out.append(GextClass(tuple(int(c) for c in coords), f, extension_from_factor_system(kernel, f)))
    return out


def same_class(spaces: CocycleSpaces, f1, f2) -> bool:
    """Equivalence of two extensions with factor systems ``f1``, ``f2``: difference in B2."""
    v = (spaces.vector(f1) - spaces.vector(f2)) % spaces.moduli
    return spaces.B2.contains(v)


def baer_sum(kernel: AbstractKernel, f1, f2) -> np.ndarray:
    H = kernel.H
    return H.mul[np.asarray(f1), np.asarray(f2)]


def _iso_label(G: FiniteGroup) -> str:
    if G.is_abelian:
        return "abelian " + "x".join(f"Z{d}" for d in abelian_invariants(G))
    return f"nonabelian, exponent {G.exponent}, |Z| = {int(np.sum(np.all(G.mul == G.mul.T, axis=0)))}"


@dataclass
class IsoTypeCensus:
    types: list           # dicts: label, classes, gyro_split_classes
    gyro_split_types: int

    def as_dict(self):
        return {"types": self.types, "gyro_split_types": self.gyro_split_types}


def gext_isotype_census(kernel: AbstractKernel, spaces: Optional[CocycleSpaces] = None) -> IsoTypeCensus:
    """All extension classes (H^2) grouped by isomorphism type of the middle group.

    A type counts as gyro-split when some class with that middle group lies
    in GZ2 + B2.
    """
    S = spaces or cocycle_spaces(kernel)
    reps: list[tuple[FiniteGroup, dict]] = []
    for _, v in S.H2.elements():
        f = S.table(v)
        G = extension_from_factor_system(kernel, f, check=False).G
        gyro = S.GZ2_plus_B2.contains(v)
        for H, info in reps:
            if isomorphism_search(G, H) is not None:
                info["classes"] += 1
                info["gyro_split_classes"] += int(gyro)
                break
        else:
            reps.append((G, {"label": _iso_label(G), "classes": 1, "gyro_split_classes": int(gyro)}))
    types = [info for _, info in reps]
    return IsoTypeCensus(types, sum(1 for t in types if t["gyro_split_classes"]))


# ---------------------------------------------------------------------------
# connecting map


def _homs(A: FiniteGroup, B: FiniteGroup) -> list[np.ndarray]:
    return magma_homs(A.mul, B.mul, first_only=False).maps


@dataclass
class DeltaReport:
    homs_H: list
    delta: list                  # GH^2 class per hom H -> A
    kernel_delta: set
    image_alpha_star: set
    exact_at_hom_H: bool
    exact_at_hom_G: bool
    injective_at_hom_K: bool
    is_homomorphism: bool
    independent_of_section: Optional[bool]
    gh2_factors: list

    @property
    def image(self) -> set:
        return set(self.delta)

    def as_dict(self):
        return {"hom_H_A": len(self.homs_H), "image_delta": len(self.image),
                "kernel_delta": len(self.kernel_delta), "image_alpha_star": len(self.image_alpha_star),
                "exact_at_hom_H": self.exact_at_hom_H, "exact_at_hom_G": self.exact_at_hom_G,
                "injective_at_hom_K": self.injective_at_hom_K, "delta_is_homomorphism": self.is_homomorphism,
                "independent_of_section": self.independent_of_section, "GH2": self.gh2_factors}


def _delta_values(E, t, A, homs, S):
    _, f, _ = factor_system_of(E, t)
    return [S.GH2.class_of(cochain_vector(S.kernel, eta[f])) for eta in homs]


def connecting_delta(E: ExtensionRecord, A: FiniteGroup, second_section: bool = True) -> DeltaReport:
    """``delta(eta) = [eta o f^t]`` in GH^2(K, A) and exactness of the fundamental sequence."""
    if not E.is_central():
        raise NotCentral("extension is not central")
    if E.section is None:
        raise NoSection("extension has no gyro-splitting attached")
    if not A.is_abelian:
        raise KernelNotAbelian("coefficient group is not abelian")
    S = cocycle_spaces(trivial_kernel(E.K, A))
    homs_H = _homs(E.H, A)
    delta = _delta_values(E, E.section.values, A, homs_H, S)
    zero = tuple([0] * len(S.GH2.factors))
    ker = {tuple(h.tolist()) for h, d in zip(homs_H, delta) if d == zero}
    homs_G = _homs(E.G, A)
    alpha_star = {tuple(h[E.alpha.values].tolist()) for h in homs_G}
    homs_K = _homs(E.K, A)
    beta_star = {tuple(h[E.beta.values].tolist()) for h in homs_K}
    ker_alpha = {tuple(h.tolist()) for h in homs_G if np.all(h[E.alpha.values] == 0)}
    # delta additive
    index = {tuple(h.tolist()): i for i, h in enumerate(homs_H)}
    additive = True
    for i, h1 in enumerate(homs_H):
        for j, h2 in enumerate(homs_H):
            k = index[tuple(A.mul[h1, h2].tolist())]
            s = tuple((a + b) % d for a, b, d in zip(delta[i], delta[j], S.GH2.factors))
            if s != delta[k]:
                additive = False
    independent = None
    if second_section:
        from .morphisms import gyro_splittings
        others = gyro_splittings(E, limit=2)
        other = next((t for t in others if not np.array_equal(t, E.section.values)), None)
        if other is not None:
            independent = _delta_values(E, other, A, homs_H, S) == delta
    return DeltaReport(homs_H, delta, ker, alpha_star, ker == alpha_star, ker_alpha == beta_star,
                       len(beta_star) == len(homs_K), additive, independent, list(S.GH2.factors))


def _subgroup_invariants_from_classes(classes, factors) -> list[int]:
    orders = []
    for c in classes:
        o = 1
        for x, d in zip(c, factors):
            o = lcm(o, d // gcd(int(x), d))
        orders.append(o)
    return abelian_invariants_from_orders(orders)


@dataclass
class DeltaImageReport:
    modulus: int
    image_delta: list
    hom_side: list
    agree: bool
    commutator_part: list
    gh2: Optional[list] = None
    gh2_agree: Optional[bool] = None

    def as_dict(self):
        return dict(self.__dict__)


def delta_image_check(E: ExtensionRecord, m: int, u_extension: Optional[bool] = None) -> DeltaImageReport:
    """``im(delta) = Hom([G,G] n alpha(H), Z_m)`` with ``Z_m`` as coefficient surrogate."""
    G = E.G
    if m <= 0 or m % G.exponent:
        raise BadModulus(f"modulus {m} is not a multiple of exponent {G.exponent}")
    A = cyclic(m)
    rep = connecting_delta(E, A, second_section=False)
    img = sorted(set(rep.delta))
    lhs = _subgroup_invariants_from_classes(img, rep.gh2_factors)
    C = np.intersect1d(commutator_subgroup(G), E.alpha.values)
    Cg, _ = subgroup_as_group(G, C)
    cinv = abelian_invariants(Cg)
    rhs = [d for d in invariant_factors(np.diag([gcd(c, m) for c in cinv]).tolist())] if cinv else []
    rhs = sorted(d for d in rhs if d not in (0, 1))
    out = DeltaImageReport(m, lhs, rhs, lhs == rhs, cinv)
    if u_extension is None:
        u_extension = E.notes.get("kind") == "U"
    if u_extension:
        out.gh2 = sorted(d for d in rep.gh2_factors)
        out.gh2_agree = out.gh2 == rhs
    return out


# ---------------------------------------------------------------------------
# gyro-crossed homomorphisms


@dataclass
class CrossedReport:
    kernel: AbstractKernel
    GC: Subgroup
    C: Subgroup
    GC_factors: list
    C_factors: list
    sequence: Optional[dict] = None

    def is_gyro_crossed(self, g) -> bool:
        return self.GC.contains(one_cochain_vector(self.kernel, g))

    def is_crossed(self, g) -> bool:
        return self.C.contains(one_cochain_vector(self.kernel, g))

    def as_dict(self):
        d = {"GC": self.GC_factors, "C": self.C_factors, "GC_order": self.GC.order(),
             "C_order": self.C.order()}
        if self.sequence is not None:
            d["sequence"] = self.sequence
        return d


def gyro_crossed_matrix(kernel: AbstractKernel):
    """Rows of ``sigma_{y^-1} g(x) + g(y^-1) + sigma_{y^-1 x} g(y^2) - g(y^-1 x y^2)``."""
    c = _Coords(kernel)
    K, n, r = kernel.K, c.n, c.r
    X, Y = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    X, Y = X.ravel(), Y.ravel()
    Yi, Y2 = K.inv[Y], K.mul[Y, Y]
    YiX = K.mul[Yi, X]
    W = K.mul[YiX, Y2]
    T = len(X)
    one = np.ones(T, dtype=np.int64)
    R_, C_, V_ = [], [], []
    for i in range(r):
        R = np.arange(T) * r + i
        for j in range(r):
            R_ += [R, R]
            C_ += [c.idx1(X, j), c.idx1(Y2, j)]
            V_ += [kernel.act[Yi, i, j], kernel.act[YiX, i, j]]
        R_ += [R, R]
        C_ += [c.idx1(Yi, i), c.idx1(W, i)]
        V_ += [one, -one]
    A = _accumulate(T * r, c.M, R_, C_, V_)
    return A, np.tile(kernel.moduli, T)


def gyro_crossed_homs(kernel: AbstractKernel, with_sequence: bool = True) -> CrossedReport:
    """GC (gyro-crossed) and C (crossed) as subgroups of normalized 1-cochains."""
    c = _Coords(kernel)
    if c.N > COCHAIN_CAP:
        raise CapExceeded("2-cochain coordinates", c.N, COCHAIN_CAP)
    D = coboundary_matrix(kernel)
    whole = Subgroup.whole(c.moduli1)
    C = whole.kernel(D, c.moduli2)
    # d g must take values in the fixed submodule: (sigma_x - 1) dg(y, z) = 0
    GC = whole
    r = c.r
    for x in range(1, c.n):
        M = kernel.act[x] - np.eye(r, dtype=np.int64)
        if not np.any(M % kernel.moduli[:, None]):
            continue
        big = np.zeros((c.N, c.N), dtype=np.int64)
        for p in range((c.n - 1) ** 2):
            big[p * r:(p + 1) * r, p * r:(p + 1) * r] = M
        GC = GC.kernel((big @ D) % c.moduli2[:, None], c.moduli2)
    Ag, mods = gyro_crossed_matrix(kernel)
    GC = GC.kernel(Ag, mods)
    zero = Subgroup.zero(c.moduli1)
    rep = CrossedReport(kernel, GC, C, list(GC.quotient(zero).factors), list(C.quotient(zero).factors))
    if with_sequence:
        rep.sequence = crossed_sequence(kernel, rep)
    return rep


def crossed_sequence(kernel: AbstractKernel, rep: CrossedReport) -> dict:
    """Exactness of ``0 -> C -> GC -> Hom(K box K, A) -> GEXT -> 0`` by enumeration."""
    from .boxed import boxed_square, homs_from_square
    K, H = kernel.K, kernel.H
    BS = boxed_square(K)
    Aset = kernel.fixed
    Ag, Amap = subgroup_as_group(H, Aset)
    back = np.full(H.order, -1, dtype=np.int64)
    back[Amap.values] = np.arange(Ag.order)
    homs = homs_from_square(BS, Ag)                      # tables: pair (x, y) -> A index
    key = {h.tobytes(): i for i, h in enumerate(homs)}
    S = cocycle_spaces(kernel)
    zeroQ = Subgroup.zero(rep.GC.moduli)
    # d-bar on every element of GC
    image_dbar, kernel_dbar, gc_count = set(), 0, 0
    D = coboundary_matrix(kernel)
    c = _Coords(kernel)
    lands_in_A = True
    for _, v in rep.GC.quotient(zeroQ).elements():
        gc_count += 1
        dg = cochain_table(kernel, (D @ v) % c.moduli2)
        if np.any(back[dg] < 0):
            lands_in_A = False
            continue
        table = back[dg].astype(np.int64)
        i = key.get(table.tobytes())
        if i is None:
            lands_in_A = False
            continue
        image_dbar.add(i)
        if not np.any(dg):
            kernel_dbar += 1
    # lambda on every hom
    zero = tuple([0] * len(S.GH2.factors))
    lam = []
    for h in homs:
        f = Amap.values[h]
        lam.append(S.gh2_class(f))
    ker_lam = {i for i, cl in enumerate(lam) if cl == zero}
    return {
        "C": rep.C.order(), "GC": gc_count, "hom_boxed_A": len(homs), "GEXT": S.GH2.order(),
        "dbar_lands_in_hom": lands_in_A,
        "exact_at_C": True,
        "exact_at_GC": kernel_dbar == rep.C.order(),
        "exact_at_hom": image_dbar == ker_lam,
        "surjective_at_GEXT": len(set(lam)) == S.GH2.order(),
    }


# ---------------------------------------------------------------------------
# obstruction to realizing an outer action


@dataclass
class AutData:
    """``Aut(H)`` with multiplication ``a o b``, its action on ``H`` and the inner subgroup."""

    aut: FiniteGroup
    action: np.ndarray            # action[a] = table of the automorphism a on H
    inner: np.ndarray             # indices of Inn(H) in aut
    inner_of: np.ndarray          # inner_of[h] = index of conjugation x -> h x h^-1


def aut_data_by_enumeration(H: FiniteGroup, cap: int = 64) -> AutData:
    from .groups import automorphisms, build_from_permutations
    if H.order > cap:
        raise CapExceeded("automorphism enumeration", H.order, cap)
    auts = automorphisms(H, cap=cap)
    A = build_from_permutations(H.order, [a.tolist() for a in auts], name=f"Aut({H.name})")
    return aut_data_from_action(H, A, _perm_tables(A, H.order))


def _perm_tables(A: FiniteGroup, degree: int) -> np.ndarray:
    perms = getattr(A, "perms", None)
    if perms is None:
        raise InvalidParameter("automorphism group carries no permutation data")
    return np.asarray(perms)[:, :degree]


def aut_data_from_action(H: FiniteGroup, A: FiniteGroup, action: np.ndarray) -> AutData:
    """Normalize so that ``aut.mul[a, b]`` is the composition ``a o b`` (b applied first)."""
    action = np.asarray(action, dtype=np.int64)
    direct = transposed = True
    for a in range(A.order):                      # row a of comp[a, b] = action[a][action[b]]
        comp = action[a][action]
        direct = direct and np.array_equal(action[A.mul[a]], comp)
        transposed = transposed and np.array_equal(action[A.mul[:, a]], comp)
        if not (direct or transposed):
            raise InvalidParameter("action tables do not represent the group")
    aut = A if direct else FiniteGroup(_frozen(A.mul.T), A.labels, A.name)
    lookup = {row.tobytes(): i for i, row in enumerate(action)}
    ar = np.arange(H.order)
    inner_of = np.empty(H.order, dtype=np.int64)
    for h in range(H.order):
        tab = H.mul[H.mul[h, ar], H.inv[h]]
        i = lookup.get(tab.astype(np.int64).tobytes())
        if i is None:
            raise InvalidParameter("action does not contain all inner automorphisms")
        inner_of[h] = i
    return AutData(aut, action, np.unique(inner_of), inner_of)


@dataclass
class ObstructionReport:
    psi_is_homomorphism: bool
    center_order: int
    obstruction_vanishes: bool
    gyro_lifting: Optional[np.ndarray] = None
    lifting_nodes: int = 0
    lifting_searched: bool = False

    @property
    def realizable(self) -> bool:
        return self.obstruction_vanishes

    def as_dict(self):
        return {"psi_is_homomorphism": self.psi_is_homomorphism, "center_order": self.center_order,
                "obstruction_vanishes": self.obstruction_vanishes,
                "gyro_lifting_searched": self.lifting_searched,
                "gyro_lifting_found": self.gyro_lifting is not None,
                "gyro_lifting": None if self.gyro_lifting is None else self.gyro_lifting.tolist(),
                "search_nodes": self.lifting_nodes}


def obstruction_realizable(H: FiniteGroup, K: FiniteGroup, psi_lift, gyro: bool = False,
                           aut: Optional[AutData] = None) -> ObstructionReport:
    """Realizability of the outer action ``K -> Out(H)`` given by lifts ``psi_lift[x]`` in Aut(H).

    The obstruction is the Eilenberg-MacLane 3-cocycle: choose ``phi(x)``
    lifting the outer action and ``g(x, y)`` in H with
    ``phi(x) phi(y) = i_{g(x,y)} phi(xy)``; then
    ``phi(x)(g(y,z)) g(x,yz) = k(x,y,z) g(x,y) g(xy,z)`` defines
    ``k`` with values in Z(H), and the action is realized by an extension
    iff ``k`` is a coboundary.  With ``gyro=True`` a lifting ``K -> Aut(H)``
    that is a gyro-homomorphism is searched as well.
    """
    from .groups import center, quotient_with_map
    from .loops import circ_n
    if aut is None:
        aut = aut_data_by_enumeration(H)
    Aut, act = aut.aut, aut.action
    Out, pi = quotient_with_map(Aut, aut.inner)
    phi = np.asarray(psi_lift, dtype=np.int64).copy()
    if len(phi) != K.order:
        raise InvalidParameter("psi must have one entry per element of K")
    phi[0] = 0
    bar = pi.values[phi]
    is_hom = bool(np.array_equal(bar[K.mul], Out.mul[bar[:, None], bar[None, :]]))
    if not is_hom:
        raise InvalidParameter("psi does not induce a homomorphism K -> Out(H)")
    # g(x, y): conjugation by g equals phi(x) phi(y) phi(xy)^-1
    conj_of = {}
    for h in range(H.order - 1, -1, -1):
        conj_of[int(aut.inner_of[h])] = h
    n = K.order
    Ainv = Aut.inv
    gxy = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            a = Aut.mul[Aut.mul[phi[x], phi[y]], Ainv[phi[K.mul[x, y]]]]
            gxy[x, y] = conj_of[int(a)]
    Z = center(H)
    report = ObstructionReport(is_hom, len(Z), True)
    if len(Z) > 1:
        Zg, Zmap = subgroup_as_group(H, Z)
        back = np.full(H.order, -1, dtype=np.int64)
        back[Zmap.values] = np.arange(Zg.order)
        sigma = np.array([back[act[phi[x]][Zmap.values]] for x in range(n)])
        kern = AbstractKernel(K, Zg, sigma)
        X, Y, W = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
        lhs = H.mul[act[phi[X], gxy[Y, W]], gxy[X, K.mul[Y, W]]]
        rhs = H.mul[gxy[X, Y], gxy[K.mul[X, Y], W]]
        k = back[H.mul[lhs, H.inv[rhs]]]
        if np.any(k < 0):
            raise InvalidParameter("obstruction cocycle does not lie in the center")
        report.obstruction_vanishes = _is_three_coboundary(kern, k)
    if gyro:
        if n > 64:
            raise CapExceeded("lifting search domain", n, 64)
        dom = circ_n(K, 1).op
        cod = circ_n(Aut, 1).op
        ok = Aut.element_orders
        allowed = (pi.values[None, :] == bar[:, None]) & ((K.element_orders[:, None] % ok[None, :]) == 0)
        res = magma_homs(dom, cod, allowed=allowed)
        report.lifting_searched = True
        report.lifting_nodes = res.nodes
        report.gyro_lifting = res.witness
    return report


def _is_three_coboundary(kernel: AbstractKernel, k) -> bool:
    """Whether the normalized 3-cochain table ``k`` is ``d c`` for a normalized 2-cochain ``c``."""
    c = _Coords(kernel)
    n = c.n
    k = np.asarray(k)
    if np.any(k[0]) or np.any(k[:, 0]) or np.any(k[:, :, 0]):
        # normalize: the Eilenberg-MacLane cocycle of a normalized lifting is normalized
        raise InvalidParameter("obstruction cocycle is not normalized")
    A, mods = cocycle_matrix(kernel)              # rows: (dc)(x,y,z) for x,y,z != e
    X, Y, Z = np.meshgrid(np.arange(1, n), np.arange(1, n), np.arange(1, n), indexing="ij")
    b = kernel.dec.coords[k[X.ravel(), Y.ravel(), Z.ravel()]].reshape(-1)
    return solve_mod(A, b, c.moduli2, mods) is not None
