import json

import numpy as np
import pytest

from gyrogroups import catalog
from gyrogroups.catalog import (dump_catalog, get_group, group_to_json, load_catalog, loop_to_json,
                                parse_entries)
from gyrogroups.errors import ParseError, UnknownGroup
from gyrogroups.loops import circ_n


def test_empty_catalog_is_empty_list():
    assert parse_entries("") == []
    assert parse_entries("   \n") == []


def test_bad_cell_is_named():
    text = json.dumps([{"name": "bad", "table": [[0, 1], [1, 1]]}])
    with pytest.raises(ParseError, match=r"cell \[1\]\[1\] repeats"):
        parse_entries(text, "mem")


def test_out_of_range_cell_is_named():
    text = json.dumps([{"name": "bad", "table": [[0, 1], [1, 5]]}])
    with pytest.raises(ParseError, match=r"cell \[1\]\[1\] = 5"):
        parse_entries(text)


def test_json_syntax_error_has_position():
    with pytest.raises(ParseError, match="line 2 column"):
        parse_entries('[\n{"name": }]')


def test_duplicate_and_unknown_kind():
    with pytest.raises(ParseError, match="duplicate"):
        parse_entries(json.dumps([{"name": "a", "table": [[0]]}, {"name": "a", "table": [[0]]}]))
    with pytest.raises(ParseError, match="kind"):
        parse_entries(json.dumps([{"name": "a", "kind": "ring"}]))


def test_perm_validation():
    with pytest.raises(ParseError, match="repeated"):
        parse_entries(json.dumps([{"name": "p", "kind": "perm", "degree": 3, "generators": [[[0, 1], [1, 2]]]}]))
    with pytest.raises(ParseError, match="out of range"):
        parse_entries(json.dumps([{"name": "p", "kind": "perm", "degree": 3, "generators": [[[0, 3]]]}]))


def test_labels_and_loop_entries():
    entries = parse_entries(json.dumps({"groups": [
        {"name": "C2", "labels": ["e", "a"], "table": [["e", "a"], ["a", "e"]]},
        {"name": "L", "kind": "loop", "table": circ_n(get_group("S3"), 1).op.tolist()}]}))
    assert entries[0].group.order == 2 and entries[0].group.labels == ("e", "a")
    assert entries[1].loop.order == 6


def test_roundtrip_preserves_tables(tmp_path):
    names = ["S3", "Q8", "E27", "A4", "Z2xZ2"]
    text = dump_catalog([group_to_json(get_group(n)) for n in names] +
                        [loop_to_json(circ_n(get_group("D4"), 1)) | {"name": "D4o1"}])
    p = tmp_path / "cat.json"
    p.write_text(text)
    back = {e.name: e for e in load_catalog(p)}
    for n in names:
        assert back[n].group.digest() == get_group(n).digest()
    assert np.array_equal(back["D4o1"].loop.op, circ_n(get_group("D4"), 1).op)


def test_perm_export_uses_generators():
    d = group_to_json(get_group("A5"), kind="perm")
    assert d["kind"] == "perm" and len(d["generators"]) <= 3
    assert parse_entries(json.dumps([d]))[0].group.order == 60


def test_shipped_files_are_reproducible(tmp_path):
    catalog.regenerate(tmp_path)
    assert (tmp_path / "default_catalog.json").read_text() == catalog.default_catalog_path().read_text()
    assert (tmp_path / "optional" / "a6.json").read_text() == catalog.optional_catalog_path().read_text()


def test_lookup_aliases_and_products():
    assert get_group("E27x") is get_group("E27")
    assert get_group("V4").order == 4
    G = get_group("Z2xZ3")
    assert G.order == 6 and G.is_abelian
    assert get_group("Z12").order == 12
    with pytest.raises(UnknownGroup):
        get_group("Foo")
    with pytest.raises(UnknownGroup):
        get_group("Z2xFoo")


def test_default_catalog_contents():
    orders = {G.name: G.order for G in catalog.catalog_groups()}
    assert orders["A5"] == 60 and orders["U3Z5"] == 125 and orders["M27"] == 27
    opt = catalog.optional_catalog()
    assert opt["A6"].group.order == 360 and opt["AutA6"].group.order == 1440


def test_extra_catalog_shadows(tmp_path):
    p = tmp_path / "x.json"
    p.write_text(json.dumps([{"name": "S3", "table": [[0, 1], [1, 0]]}]))
    try:
        catalog.use_extra_catalog(p)
        assert get_group("S3").order == 2
    finally:
        catalog.use_extra_catalog(None)
    assert get_group("S3").order == 6
