"""Command line front end.

Every subcommand produces a report with the fields ``command``,
``inputs_digest``, ``results``, ``witnesses``, ``annotations`` and (unless
``--deterministic``) ``timing``.  Exit codes: 0 ok, 1 usage, 2 input,
3 cap exceeded, 4 property violation.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path
from typing import Optional

import numpy as np

from . import catalog
from .errors import GyroError, InvalidParameter, ParseError

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_CAP, EXIT_VIOLATION = 0, 1, 2, 3, 4


class UsageError(Exception):
    exit_code = EXIT_USAGE


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class Report:
    def __init__(self, argv):
        self.command = list(argv)
        self.inputs: list = []
        self.results: dict = {}
        self.witnesses: dict = {}
        self.annotations: list = []
        self.seconds = 0.0
        self.exit_code = EXIT_OK

    def add_input(self, what: str, obj) -> None:
        if hasattr(obj, "mul"):
            self.inputs.append((what, obj.name, np.asarray(obj.mul, dtype=np.int64).tobytes()))
        elif isinstance(obj, (bytes, str)):
            self.inputs.append((what, "", obj.encode() if isinstance(obj, str) else obj))

    def digest(self) -> str:
        h = hashlib.sha256()
        for what, name, data in self.inputs:
            h.update(f"{what}:{name}:{len(data)}:".encode())
            h.update(data)
        return h.hexdigest()

    def as_dict(self, timing: bool = True) -> dict:
        d = {"command": " ".join(self.command), "inputs_digest": self.digest(), "results": self.results,
             "witnesses": self.witnesses, "annotations": self.annotations}
        if timing:
            d["timing"] = {"seconds": round(self.seconds, 3)}
        return d


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set)):
        items = sorted(x) if isinstance(x, set) else x
        return [_jsonable(v) for v in items]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def render_text(d, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(d, dict):
        for k, v in d.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(d, list):
        for v in d:
            if isinstance(v, (dict, list)) and not _flat_list(v):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(v)}")
    else:
        lines.append(pad + json.dumps(d))
    return "\n".join(lines)


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


# ---------------------------------------------------------------------------
# input files


def _read_json(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _element(G, v, where: str) -> int:
    if isinstance(v, int) and 0 <= v < G.order:
        return v
    if isinstance(v, str) and v in G.labels:
        return G.labels.index(v)
    raise ParseError(f"{where}: {v!r} is not an element of {G.name}")


def _value_table(dom, cod, values, where: str) -> np.ndarray:
    if isinstance(values, dict):
        out = np.arange(cod.order) if dom is cod else np.zeros(dom.order, dtype=np.int64)
        out = np.array(out, dtype=np.int64)
        for k, v in values.items():
            out[_element(dom, int(k) if k.isdigit() and k not in dom.labels else k, where)] = \
                _element(cod, v, f"{where}[{k}]")
        return out
    if not isinstance(values, list) or len(values) != dom.order:
        raise ParseError(f"{where}: expected {dom.order} values")
    return np.array([_element(cod, v, f"{where}[{i}]") for i, v in enumerate(values)], dtype=np.int64)


def _action_tables(path: str, K, H, key: str):
    """``{K-element: H value table}`` (identity where omitted) as a ``|K| x |H|`` array."""
    data, text = _read_json(path)
    if isinstance(data, dict) and key in data:
        data = data[key]
    tables = np.tile(np.arange(H.order), (K.order, 1))
    if isinstance(data, list):
        if len(data) != K.order:
            raise ParseError(f"{path}: expected {K.order} tables")
        items = enumerate(data)
    elif isinstance(data, dict):
        items = ((_element(K, int(k) if k.isdigit() and k not in K.labels else k, path), v)
                 for k, v in data.items())
    else:
        raise ParseError(f"{path}: expected a list or an object")
    for x, tab in items:
        tables[x] = _value_table(H, H, tab, f"{path}[{K.labels[x]}]")
    return tables, text


def load_extension(path: str):
    from .groups import ExtensionRecord, GroupMap
    data, text = _read_json(path)
    for f in ("H", "G", "K", "alpha", "beta"):
        if f not in data:
            raise ParseError(f"{path}: field {f!r} missing")
    H, G, K = (catalog.get_group(data[f]) for f in ("H", "G", "K"))
    alpha = GroupMap(H, G, _value_table(H, G, data["alpha"], f"{path}: alpha"))
    beta = GroupMap(G, K, _value_table(G, K, data["beta"], f"{path}: beta"))
    section = None
    if data.get("section") is not None:
        section = GroupMap(K, G, _value_table(K, G, data["section"], f"{path}: section"))
    E = ExtensionRecord(H, G, K, alpha, beta, section)
    try:
        E.validate()
    except InvalidParameter as exc:
        raise ParseError(f"{path}: {exc}") from None
    return E, text


def _kernel(args, rep):
    from .cohomology import AbstractKernel
    K, H = catalog.get_group(args.K), catalog.get_group(args.H)
    rep.add_input("K", K)
    rep.add_input("H", H)
    if getattr(args, "sigma", None):
        sigma, text = _action_tables(args.sigma, K, H, "sigma")
        rep.add_input("sigma", text)
        kern = AbstractKernel(K, H, sigma)
        kern.validate()
    else:
        kern = AbstractKernel.trivial(K, H)
    return kern


# ---------------------------------------------------------------------------
# subcommands


def cmd_check_gyrogroup(args, rep):
    from .loops import circ_n, is_right_gyrogroup
    S = catalog.get_loop(args.group)
    if S is not None:
        rep.inputs.append(("loop", S.name, np.asarray(S.op, dtype=np.int64).tobytes()))
        r = is_right_gyrogroup(S)
        rep.results = {"loop": S.name, "order": S.order, "verdict": r.verdict, "flags": r.flags}
        rep.annotations = [{"flag": "LOOP_TABLE", "note": "catalog entry is a right loop table; --n ignored"}]
    else:
        G = catalog.get_group(args.group)
        rep.add_input("group", G)
        r = is_right_gyrogroup(circ_n(G, args.n))
        rep.results = {"group": G.name, "order": G.order, "n": args.n, "verdict": r.verdict, "flags": r.flags}
    rep.witnesses = r.witnesses
    if not r.verdict:
        rep.exit_code = EXIT_VIOLATION


def cmd_gyro_iso(args, rep):
    from .morphisms import gyro_isomorphism_search
    G1, G2 = catalog.get_group(args.g1), catalog.get_group(args.g2)
    rep.add_input("g1", G1)
    rep.add_input("g2", G2)
    res = gyro_isomorphism_search(G1, G2)
    rep.results = {"g1": G1.name, "g2": G2.name, "gyro_isomorphic": res.found, "search_nodes": res.nodes,
                   "exhausted": res.exhausted}
    if G1.order != G2.order:
        rep.annotations = [{"flag": "ORDER_MISMATCH", "note": "orders differ, no search performed"}]
    if res.found:
        rep.witnesses = {"map": {G1.labels[i]: G2.labels[int(v)] for i, v in enumerate(res.witness)}}


def cmd_subloops(args, rep):
    from .loops import circ_n, group_loop, sub_right_loops
    G = catalog.get_group(args.group)
    rep.add_input("group", G)
    S = circ_n(G, args.n)
    subs = sub_right_loops(S, args.order)
    groups = sub_right_loops(group_loop(G), args.order)
    rep.results = {"group": G.name, "n": args.n, "order": args.order, "count": len(subs),
                   "subgroups_of_G_with_that_order": len(groups)}
    rep.witnesses = {"subloops": [[G.labels[i] for i in s] for s in subs]}


def _gh2_annotation(kern, S):
    from .groups import abelian_invariants
    K, H = kern.K, kern.H
    if (kern.is_trivial and K.is_abelian and abelian_invariants(K) == [3, 3] and abelian_invariants(H) == [3]):
        from .cohomology import gext_isotype_census
        census = gext_isotype_census(kern, S)
        return [{"flag": "GROUP_STRUCTURE_DISCREPANCY", "claim": "GH2(Z3xZ3, Z3) ~ Z2, H2(Z3xZ3, Z3) ~ V4",
                 "computed_GH2": list(S.GH2.factors), "computed_H2": list(S.H2.factors),
                 "isomorphism_type_reading": {"types": len(census.types),
                                              "gyro_split_types": census.gyro_split_types},
                 "note": "GH2 with Z3 coefficients is an elementary abelian 3-group; the count of "
                         "gyro-split-admitting isomorphism types is 2"}]
    return []


def cmd_gh2(args, rep):
    from .cohomology import cocycle_spaces
    kern = _kernel(args, rep)
    S = cocycle_spaces(kern)
    rep.results = {"K": kern.K.name, "H": kern.H.name, "sigma_trivial": kern.is_trivial, **S.report()}
    rep.annotations = [{"flag": "NORMALIZED_COCHAINS",
                        "note": "cochains vanish when either argument is the identity"}]
    rep.annotations += _gh2_annotation(kern, S)


def cmd_classify_gext(args, rep):
    from .cohomology import classify_gext, cocycle_spaces
    from .groups import abelian_invariants
    from .morphisms import find_gyro_splitting
    kern = _kernel(args, rep)
    S = cocycle_spaces(kern)
    classes = classify_gext(kern, S)
    rows = []
    for c in classes:
        G = c.extension.G
        row = {"class": list(c.coords), "order": G.order, "abelian": G.is_abelian,
               "invariants": abelian_invariants(G) if G.is_abelian else None}
        if args.verify:
            row["search_confirms_gyro_split"] = find_gyro_splitting(c.extension, method="search").found
        rows.append(row)
    rep.results = {"K": kern.K.name, "H": kern.H.name, "GH2": list(S.GH2.factors), "classes": len(classes),
                   "extensions": rows}
    rep.witnesses = {"cocycles": [c.cocycle.tolist() for c in classes]}
    rep.annotations = _gh2_annotation(kern, S)
    if args.verify and not all(r["search_confirms_gyro_split"] for r in rows):
        rep.exit_code = EXIT_VIOLATION


def cmd_gyro_split(args, rep):
    from .morphisms import find_gyro_splitting
    E, text = load_extension(args.ext)
    rep.add_input("extension", text)
    r = find_gyro_splitting(E, method=args.method)
    rep.results = {"H": E.H.name, "G": E.G.name, "K": E.K.name, "central": E.is_central(), **r.as_dict()}
    rep.results.pop("section", None)
    if r.found:
        rep.witnesses = {"section": {E.K.labels[x]: E.G.labels[int(v)] for x, v in enumerate(r.section.values)}}


def cmd_boxed_square(args, rep):
    from .boxed import boxed_square
    G = catalog.get_group(args.group)
    rep.add_input("group", G)
    BS = boxed_square(G)
    d = BS.report()
    rep.witnesses = {"canonical_form": d.pop("canonical_form")}
    rep.results = d


def cmd_schur(args, rep):
    from .boxed import gyro_schur_multiplier
    G = catalog.get_group(args.group)
    rep.add_input("group", G)
    r = gyro_schur_multiplier(G)
    rep.results = {"group": G.name, **r.as_dict()}
    if not r.agree:
        rep.exit_code = EXIT_VIOLATION


def cmd_crossed(args, rep):
    from .cohomology import gyro_crossed_homs
    kern = _kernel(args, rep)
    r = gyro_crossed_homs(kern, with_sequence=not args.no_sequence)
    rep.results = {"K": kern.K.name, "H": kern.H.name, **r.as_dict()}
    s = r.sequence
    if s is not None and not all(s[k] for k in ("dbar_lands_in_hom", "exact_at_GC", "exact_at_hom",
                                                "surjective_at_GEXT")):
        rep.exit_code = EXIT_VIOLATION


def _psi_lift(path, K, H, aut):
    """Aut indices from ``{K-element: table of H values or label of an Aut(H) element}``."""
    data, text = _read_json(path)
    if isinstance(data, dict) and "psi" in data:
        data = data["psi"]
    if isinstance(data, list):
        if len(data) != K.order:
            raise ParseError(f"{path}: expected {K.order} entries")
        items = list(enumerate(data))
    elif isinstance(data, dict):
        items = [(_element(K, int(k) if k.isdigit() and k not in K.labels else k, path), v)
                 for k, v in data.items()]
    else:
        raise ParseError(f"{path}: expected a list or an object")
    index = {row.tobytes(): a for a, row in enumerate(np.asarray(aut.action, dtype=np.int64))}
    lift = [int(aut.inner_of[H.id])] * K.order
    for x, v in items:
        if isinstance(v, str) and v in aut.aut.labels:
            lift[x] = aut.aut.labels.index(v)
            continue
        tab = _value_table(H, H, v, f"{path}[{K.labels[x]}]")
        a = index.get(tab.tobytes())
        if a is None:
            raise ParseError(f"{path}: psi({K.labels[x]}) is not an automorphism of {H.name}")
        lift[x] = a
    return lift, text


def cmd_obstruction(args, rep):
    from .cohomology import aut_data_by_enumeration, obstruction_realizable
    H, K = catalog.get_group(args.H), catalog.get_group(args.K)
    rep.add_input("H", H)
    rep.add_input("K", K)
    aut = catalog.aut_data_for(H) if H.order > 64 else aut_data_by_enumeration(H)
    lift, text = _psi_lift(args.psi, K, H, aut)
    rep.add_input("psi", text)
    r = obstruction_realizable(H, K, lift, gyro=args.gyro, aut=aut)
    rep.results = {"H": H.name, "K": K.name, "realizable": r.realizable, **r.as_dict()}
    gl = rep.results.pop("gyro_lifting", None)
    if gl is not None:
        rep.witnesses = {"gyro_lifting": {K.labels[x]: aut.aut.labels[int(a)] for x, a in enumerate(gl)}}
    rep.annotations = [{"flag": "OBSTRUCTION_FORMULA",
                        "note": "Eilenberg-MacLane 3-cocycle of a set lifting, tested for being a "
                                "coboundary with values in the centre"}]


def cmd_paper_regress(args, rep):
    from .regress import run_all
    only = set(args.only) if args.only else None

    def progress(r):
        if args.progress:
            print(r.line(), file=sys.stderr, flush=True)

    results = run_all(only, progress)
    rep.results = {"criteria": [r.as_dict(timing=not args.deterministic) for r in results],
                   "passed": [r.id for r in results if r.passed],
                   "failed": [r.id for r in results if not r.passed],
                   "gating_failed": [r.id for r in results if r.gating and not r.passed]}
    rep.add_input("corpus", ",".join(r.id for r in results))
    if rep.results["gating_failed"]:
        rep.exit_code = EXIT_VIOLATION


COMMANDS = {
    "check-gyrogroup": cmd_check_gyrogroup, "gyro-iso": cmd_gyro_iso, "subloops": cmd_subloops,
    "gh2": cmd_gh2, "classify-gext": cmd_classify_gext, "gyro-split": cmd_gyro_split,
    "boxed-square": cmd_boxed_square, "schur": cmd_schur, "crossed": cmd_crossed,
    "obstruction": cmd_obstruction, "paper-regress": cmd_paper_regress,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gyrogroups", description="Gyro-structures of finite groups.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--deterministic", action="store_true", help="omit timing so reports are byte-identical")
    p.add_argument("--catalog", help="extra catalog file; its names shadow the default catalog")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    s = sub.add_parser("check-gyrogroup")
    s.add_argument("--group", required=True)
    s.add_argument("--n", type=int, default=1)
    s = sub.add_parser("gyro-iso")
    s.add_argument("--g1", required=True)
    s.add_argument("--g2", required=True)
    s = sub.add_parser("subloops")
    s.add_argument("--group", required=True)
    s.add_argument("--order", type=int)
    s.add_argument("--n", type=int, default=1)
    for name in ("gh2", "classify-gext", "crossed"):
        s = sub.add_parser(name)
        s.add_argument("--K", required=True)
        s.add_argument("--H", required=True)
        s.add_argument("--sigma")
        if name == "classify-gext":
            s.add_argument("--verify", action="store_true", help="confirm each class by the splitting search")
        if name == "crossed":
            s.add_argument("--no-sequence", action="store_true")
    s = sub.add_parser("gyro-split")
    s.add_argument("--ext", required=True)
    s.add_argument("--method", choices=("auto", "linear", "search"), default="auto")
    for name in ("boxed-square", "schur"):
        s = sub.add_parser(name)
        s.add_argument("--group", required=True)
    s = sub.add_parser("obstruction")
    s.add_argument("--H", required=True)
    s.add_argument("--K", required=True)
    s.add_argument("--psi", required=True)
    s.add_argument("--gyro", action="store_true", help="also search for a gyro-homomorphic lifting")
    s = sub.add_parser("paper-regress")
    s.add_argument("--only", type=int, nargs="*")
    s.add_argument("--progress", action="store_true")
    return p


def cli_dispatch(argv) -> Report:
    """Parse ``argv`` and run the subcommand; errors propagate with their exit codes."""
    args = build_parser().parse_args(argv)
    if args.command is None:
        raise UsageError("a subcommand is required")
    if args.catalog:
        catalog.use_extra_catalog(args.catalog)
    rep = Report(argv)
    t = time.perf_counter()
    COMMANDS[args.command](args, rep)
    rep.seconds = time.perf_counter() - t
    return rep


def main(argv: Optional[list] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt = "json" if "--format" in argv and argv[argv.index("--format") + 1:argv.index("--format") + 2] == ["json"] \
        else "text"
    deterministic = "--deterministic" in argv
    try:
        rep = cli_dispatch(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except GyroError as exc:
        _emit_error(argv, exc, fmt)
        return exc.exit_code
    finally:
        catalog.use_extra_catalog(None)
    d = _jsonable(rep.as_dict(timing=not deterministic))
    if fmt == "json":
        print(json.dumps(d, indent=2))
    else:
        print(render_text(d))
    return rep.exit_code


def _emit_error(argv, exc, fmt):
    d = {"command": " ".join(argv), "error": type(exc).__name__, "message": str(exc),
         "exit_code": exc.exit_code}
    print(json.dumps(d, indent=2) if fmt == "json" else render_text(d), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
