"""One test per acceptance criterion; each prints a PASS/FAIL line."""
import pytest

from gyrogroups import regress

from conftest import CRITERION_LINES


def check(i):
    r = regress.run_criterion(i)
    print(r.line())
    CRITERION_LINES.append(r.line())
    return r


def test_c01_circ_n_universality():
    assert check(1).passed


def test_c02_q8_law():
    assert check(2).passed


def test_c03_e27_suite():
    assert check(3).passed


def test_c04_gyro_split_examples():
    assert check(4).passed


def test_c05_u3_formula():
    assert check(5).passed


def test_c06_dual_path():
    assert check(6).passed


def test_c07_gh2_z3_squared():
    r = check(7)
    assert r.passed
    assert r.details.get("annotation", {}).get("flag") == "GROUP_STRUCTURE_DISCREPANCY"


def test_c08_fundamental_sequence():
    assert check(8).passed


def test_c09_gyro_square():
    assert check(9).passed


def test_c10_schur():
    assert check(10).passed


def test_c11_crossed_sequence():
    assert check(11).passed


def test_c12_relations_and_criteria():
    assert check(12).passed


def test_c13_foguel_ungar():
    assert check(13).passed


def test_c14_aut_a6_stretch():
    r = check(14)
    assert not r.gating
    if "skipped" in r.details:
        pytest.skip(r.details["skipped"])
    if not r.passed:
        pytest.xfail("non-gating stretch criterion")
