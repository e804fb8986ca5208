"""Group catalog: JSON ingestion with diagnostics, the default catalog and name lookup.

A catalog file holds a JSON list of entries (or ``{"groups": [...]}``)::

    {"name": "S3", "kind": "perm", "degree": 3, "generators": [[[0, 1]], [[0, 1, 2]]]}
    {"name": "Z3", "kind": "table", "labels": ["0", "1", "2"], "table": [[0, 1, 2], ...]}
    {"name": "L", "kind": "loop", "labels": [...], "table": [...]}

Generators are lists of cycles.  Tables are validated on load (identity moved
to index 0); loops must satisfy the right-loop law.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import AutDataMissing, GyroError, ParseError, UnknownGroup
from .groups import (FiniteGroup, alternating, build_from_permutations, build_from_table, cyclic,
                     dihedral, direct_product, extraspecial27, heisenberg_mod_p, permutation_cycles,
                     quaternion8, symmetric)
from .loops import RightLoopTable, check_right_loop, loop_from_table
from .search import greedy_generators

ALIASES = {"E27x": "E27", "E27_3": "E27", "E27_9": "M27", "V4": "Z2xZ2", "1": "Z1"}


@dataclass
class CatalogEntry:
    name: str
    source: str
    group: Optional[FiniteGroup] = None
    loop: Optional[RightLoopTable] = None
    notes: dict = field(default_factory=dict)


def _fail(source, index, name, msg):
    where = f"{source}: entry {index}" + (f" ({name!r})" if name else "")
    raise ParseError(f"{where}: {msg}")


def _latin_defect(T: np.ndarray):
    """First cell ``(row, col)`` whose value repeats within its row or column."""
    n = len(T)
    for r in range(n):
        vals, counts = np.unique(T[r], return_counts=True)
        if np.any(counts > 1):
            v = vals[counts > 1][0]
            return r, int(np.flatnonzero(T[r] == v)[1])
    for c in range(n):
        vals, counts = np.unique(T[:, c], return_counts=True)
        if np.any(counts > 1):
            v = vals[counts > 1][0]
            return int(np.flatnonzero(T[:, c] == v)[1]), c
    return None


def _table(obj, source, index, name, loop=False):
    labels = obj.get("labels")
    table = obj.get("table")
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        _fail(source, index, name, "field 'table' must be a list of rows")
    n = len(table)
    for i, row in enumerate(table):
        if len(row) != n:
            _fail(source, index, name, f"field 'table' row {i} has {len(row)} cells, expected {n}")
        for j, v in enumerate(row):
            if isinstance(v, str) and labels is not None and v in labels:
                row[j] = labels.index(v)
            elif not isinstance(row[j], int) or not 0 <= row[j] < n:
                _fail(source, index, name, f"field 'table' cell [{i}][{j}] = {v!r} is not an element")
    if labels is not None and (not isinstance(labels, list) or len(labels) != n):
        _fail(source, index, name, f"field 'labels' must list {n} names")
    T = np.array(table, dtype=np.int64).reshape(n, n)
    if loop:
        reason = check_right_loop(T)
        if reason:
            _fail(source, index, name, f"not a right loop: {reason}")
        return None, loop_from_table(T, labels, name)
    if not group_table_is_latin(T):
        cell = _latin_defect(T)
        lab = labels or list(range(n))
        _fail(source, index, name, f"field 'table' cell [{cell[0]}][{cell[1]}] repeats a value in its row or "
                                   f"column (row {lab[cell[0]]!r}, column {lab[cell[1]]!r})")
    try:
        return build_from_table(labels, T, name=name), None
    except GyroError as exc:
        _fail(source, index, name, f"field 'table': {exc}")


def group_table_is_latin(T: np.ndarray) -> bool:
    n = len(T)
    ar = np.arange(n)
    return bool(np.all(np.sort(T, axis=0) == ar[:, None]) and np.all(np.sort(T, axis=1) == ar[None, :]))


def _perm(obj, source, index, name):
    degree = obj.get("degree")
    if not isinstance(degree, int) or degree < 1:
        _fail(source, index, name, "field 'degree' must be a positive integer")
    gens = obj.get("generators", [])
    if not isinstance(gens, list):
        _fail(source, index, name, "field 'generators' must be a list")
    for g, gen in enumerate(gens):
        if not isinstance(gen, list) or not all(isinstance(c, list) for c in gen):
            _fail(source, index, name, f"field 'generators' item {g} must be a list of cycles")
        seen = set()
        for cyc in gen:
            for pt in cyc:
                if not isinstance(pt, int) or not 0 <= pt < degree:
                    _fail(source, index, name, f"field 'generators' item {g}: point {pt!r} out of range")
                if pt in seen:
                    _fail(source, index, name, f"field 'generators' item {g}: point {pt} repeated")
                seen.add(pt)
    try:
        return build_from_permutations(degree, gens, name=name)
    except GyroError as exc:
        _fail(source, index, name, f"field 'generators': {exc}")


def parse_entries(text: str, source: str = "<string>") -> list[CatalogEntry]:
    if not text.strip():
        return []
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if isinstance(data, dict):
        data = data.get("groups", [data] if "name" in data else [])
    if not isinstance(data, list):
        raise ParseError(f"{source}: top level must be a list of entries")
    out, names = [], set()
    for i, obj in enumerate(data):
        if not isinstance(obj, dict):
            _fail(source, i, None, "entry must be an object")
        name = obj.get("name")
        if not isinstance(name, str) or not name:
            _fail(source, i, None, "field 'name' missing")
        if name in names:
            _fail(source, i, name, "duplicate name")
        names.add(name)
        kind = obj.get("kind", "table")
        notes = dict(obj.get("notes", {}))
        if kind == "table":
            G, _ = _table(obj, source, i, name)
            out.append(CatalogEntry(name, source, group=G, notes=notes))
        elif kind == "perm":
            out.append(CatalogEntry(name, source, group=_perm(obj, source, i, name), notes=notes))
        elif kind == "loop":
            _, S = _table(obj, source, i, name, loop=True)
            out.append(CatalogEntry(name, source, loop=S, notes=notes))
        else:
            _fail(source, i, name, f"field 'kind' must be table, perm or loop, got {kind!r}")
    return out


def load_catalog(path) -> list[CatalogEntry]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return parse_entries(text, str(path))


# ---------------------------------------------------------------------------
# export


def group_to_json(G: FiniteGroup, kind: str = "table", notes: Optional[dict] = None) -> dict:
    d = {"name": G.name}
    if kind == "perm":
        if G.perms is None:
            raise ValueError("group carries no permutation data")
        P = np.asarray(G.perms)
        d.update(kind="perm", degree=int(P.shape[1]),
                 generators=[permutation_cycles(P[g]) for g in greedy_generators(G.mul)])
    else:
        d.update(kind="table", labels=list(G.labels), table=np.asarray(G.mul).tolist())
    if notes:
        d["notes"] = notes
    return d


def loop_to_json(S: RightLoopTable, notes: Optional[dict] = None) -> dict:
    d = {"name": S.name, "kind": "loop", "labels": list(S.labels), "table": np.asarray(S.op).tolist()}
    if notes:
        d["notes"] = notes
    return d


def dump_catalog(entries: list[dict]) -> str:
    """One entry per line: diffs and ParseError line numbers stay readable."""
    return "[\n" + ",\n".join(json.dumps(e, separators=(",", ":")) for e in entries) + "\n]\n"


# ---------------------------------------------------------------------------
# default catalog


def _builder_entries() -> list[dict]:
    out = []
    for n in range(1, 17):
        out.append(group_to_json(cyclic(n), notes={"builder": f"cyclic({n})"}))
    Z2, Z3 = cyclic(2), cyclic(3)
    out.append(group_to_json(direct_product(Z2, Z2, "Z2xZ2"), notes={"builder": "Z2 x Z2"}))
    out.append(group_to_json(direct_product(Z3, Z3, "Z3xZ3"), notes={"builder": "Z3 x Z3"}))
    out.append(group_to_json(direct_product(direct_product(Z3, Z3), Z3, "Z3xZ3xZ3"),
                             notes={"builder": "Z3 x Z3 x Z3"}))
    out.append(group_to_json(symmetric(3), "perm", notes={"builder": "symmetric(3)"}))
    D4 = dihedral(4)
    out.append(group_to_json(D4, notes={"builder": "dihedral(4)", "order": 8}))
    out.append(group_to_json(quaternion8(), notes={"builder": "quaternion8()"}))
    out.append(group_to_json(alternating(4), "perm", notes={"builder": "alternating(4)"}))
    out.append(group_to_json(extraspecial27(3), notes={"builder": "extraspecial27(3)"}))
    out.append(group_to_json(extraspecial27(9), notes={"builder": "extraspecial27(9)"}))
    out.append(group_to_json(heisenberg_mod_p(3), notes={"builder": "heisenberg_mod_p(3)"}))
    out.append(group_to_json(heisenberg_mod_p(5), notes={"builder": "heisenberg_mod_p(5)"}))
    out.append(group_to_json(alternating(5), "perm", notes={"builder": "alternating(5)"}))
    return out


def _f9_projective_line():
    """Points of P^1(F9) as indices 0..9 (9 is infinity); F9 = F3[i], a + 3b <-> a + b i."""
    def mul(u, v):
        a, b = u % 3, u // 3
        c, d = v % 3, v // 3
        return (a * c - b * d) % 3 + 3 * ((a * d + b * c) % 3)

    def add(u, v):
        return (u % 3 + v % 3) % 3 + 3 * ((u // 3 + v // 3) % 3)

    inv = {u: next(v for v in range(1, 9) if mul(u, v) == 1) for u in range(1, 9)}
    return mul, add, inv


def a6_generators():
    """``PSL(2,9) = A6`` and ``PGammaL(2,9) = Aut(A6)`` on the 10 points of P^1(F9)."""
    mul, add, inv = _f9_projective_line()
    INF = 9
    w = 4                                   # 1 + i generates F9^*
    neg = {u: mul(u, 2) for u in range(9)}

    def mobius(f):
        return [f(p) for p in range(10)]

    translate = mobius(lambda p: INF if p == INF else add(p, 1))
    scale_sq = mobius(lambda p: INF if p == INF else mul(p, mul(w, w)))
    scale = mobius(lambda p: INF if p == INF else mul(p, w))
    flip = mobius(lambda p: 0 if p == INF else INF if p == 0 else neg[inv[p]])
    frob = mobius(lambda p: INF if p == INF else mul(p, mul(p, p)))
    cyc = lambda img: permutation_cycles(np.array(img))
    return ([cyc(translate), cyc(scale_sq), cyc(flip)],
            [cyc(translate), cyc(scale), cyc(flip), cyc(frob)])


def _optional_entries() -> list[dict]:
    a6, aut = a6_generators()
    return [{"name": "A6", "kind": "perm", "degree": 10, "generators": a6,
             "notes": {"builder": "PSL(2,9) on P^1(F9)", "order": 360}},
            {"name": "AutA6", "kind": "perm", "degree": 10, "generators": aut,
             "notes": {"builder": "PGammaL(2,9) on P^1(F9)", "order": 1440}}]


def _data_path(*parts) -> Path:
    return Path(str(resources.files("gyrogroups").joinpath("data", *parts)))


def default_catalog_path() -> Path:
    return _data_path("default_catalog.json")


def optional_catalog_path() -> Path:
    return _data_path("optional", "a6.json")


def regenerate(data_dir: Optional[Path] = None) -> None:
    """Rewrite the shipped catalog files from the builders."""
    d = Path(data_dir) if data_dir else _data_path()
    (d / "optional").mkdir(parents=True, exist_ok=True)
    (d / "default_catalog.json").write_text(dump_catalog(_builder_entries()), encoding="utf-8")
    (d / "optional" / "a6.json").write_text(dump_catalog(_optional_entries()), encoding="utf-8")


@lru_cache(maxsize=None)
def default_catalog() -> dict:
    return {e.name: e for e in load_catalog(default_catalog_path())}


@lru_cache(maxsize=None)
def optional_catalog() -> dict:
    p = optional_catalog_path()
    return {e.name: e for e in load_catalog(p)} if p.exists() else {}


_CYCLIC = re.compile(r"Z(\d+)$")


_EXTRA: dict = {}


def use_extra_catalog(path) -> None:
    """Entries of ``path`` shadow the shipped catalogs; ``None`` clears them."""
    _EXTRA.clear()
    if path is not None:
        _EXTRA.update({e.name: e for e in load_catalog(path)})


def get_loop(name: str) -> Optional[RightLoopTable]:
    """A right loop entry (kind ``loop``) by name, or None."""
    for cat in (_EXTRA, default_catalog(), optional_catalog()):
        if name in cat and cat[name].loop is not None:
            return cat[name].loop
    return None


def get_group(name: str) -> FiniteGroup:
    """Catalog lookup; also accepts ``Zn`` for any n and products ``AxB`` of known names."""
    if name in _EXTRA and _EXTRA[name].group is not None:
        return _EXTRA[name].group
    name = ALIASES.get(name, name)
    for cat in (default_catalog(), optional_catalog()):
        if name in cat and cat[name].group is not None:
            return cat[name].group
    m = _CYCLIC.match(name)
    if m and int(m.group(1)) >= 1:
        return cyclic(int(m.group(1)))
    if "x" in name:
        parts = name.split("x")
        try:
            G = get_group(parts[0])
            for p in parts[1:]:
                G = direct_product(G, get_group(p))
        except UnknownGroup:
            raise UnknownGroup(f"unknown group {name!r}") from None
        return FiniteGroup(G.mul, G.labels, name)
    raise UnknownGroup(f"unknown group {name!r}")


def catalog_groups(max_order: Optional[int] = None, include_optional: bool = False) -> list[FiniteGroup]:
    cats = [default_catalog()] + ([optional_catalog()] if include_optional else [])
    out = [e.group for c in cats for e in c.values() if e.group is not None]
    return [G for G in out if max_order is None or G.order <= max_order]


def aut_data_for(H: FiniteGroup):
    """Aut(H) for groups too large to enumerate; only A6 (via Aut(A6) in the optional files)."""
    from .cohomology import aut_data_from_action
    opt = optional_catalog()
    if H.order != 360 or "AutA6" not in opt or H.perms is None:
        raise AutDataMissing(f"no automorphism data for {H.name}; |H| <= 64 is enumerated")
    A6, Aut = opt["A6"].group, opt["AutA6"].group
    hp = np.asarray(H.perms)
    if {tuple(p) for p in hp.tolist()} != {tuple(p) for p in np.asarray(A6.perms).tolist()}:
        raise AutDataMissing(f"no automorphism data for {H.name}")
    index = {tuple(p): i for i, p in enumerate(hp.tolist())}
    action = np.empty((Aut.order, H.order), dtype=np.int64)
    for a, p in enumerate(np.asarray(Aut.perms)):
        pinv = np.argsort(p)
        conj = p[hp[:, pinv]]
        action[a] = [index[tuple(c)] for c in conj.tolist()]
    return aut_data_from_action(H, Aut, action)


if __name__ == "__main__":
    regenerate()
