import json
import subprocess
import sys

from gyrogroups.cli import main


def run(capsys, *argv):
    code = main(["--format", "json", "--deterministic", *argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_subloops_e27(capsys):
    code, rep, _ = run(capsys, "subloops", "--group", "E27x", "--order", "9")
    assert code == 0
    assert rep["results"]["count"] == 13
    assert rep["results"]["subgroups_of_G_with_that_order"] == 4
    assert set(rep) == {"command", "inputs_digest", "results", "witnesses", "annotations"}


def test_check_gyrogroup(capsys):
    code, rep, _ = run(capsys, "check-gyrogroup", "--group", "S3", "--n", "1")
    assert code == 0 and rep["results"]["verdict"] is True


def test_check_gyrogroup_violation_exit_code(capsys, tmp_path):
    from gyrogroups.loops import iter_right_loops, is_right_gyrogroup, RightLoopTable
    op = next(o for o in iter_right_loops(4)
              if not is_right_gyrogroup(RightLoopTable(o, tuple("0123"))).verdict)
    p = tmp_path / "loops.json"
    p.write_text(json.dumps([{"name": "L4", "kind": "loop", "table": op.tolist()}]))
    code, rep, _ = run(capsys, "--catalog", str(p), "check-gyrogroup", "--group", "L4")
    assert code == 4 and rep["results"]["verdict"] is False and rep["witnesses"]


def test_gh2_annotation(capsys):
    code, rep, _ = run(capsys, "gh2", "--K", "Z3xZ3", "--H", "Z3")
    assert code == 0
    assert rep["results"]["GH2"] == [3] and rep["results"]["H2"] == [3, 3, 3]
    flags = {a["flag"] for a in rep["annotations"]}
    assert "GROUP_STRUCTURE_DISCREPANCY" in flags
    ann = next(a for a in rep["annotations"] if a["flag"] == "GROUP_STRUCTURE_DISCREPANCY")
    assert ann["isomorphism_type_reading"] == {"types": 4, "gyro_split_types": 2}


def test_gh2_with_sigma_file(capsys, tmp_path):
    p = tmp_path / "sigma.json"
    p.write_text(json.dumps({"1": [0, 3, 2, 1]}))
    code, rep, _ = run(capsys, "gh2", "--K", "Z2", "--H", "Z4", "--sigma", str(p))
    assert code == 0 and rep["results"]["H2"] == [2] and rep["results"]["sigma_trivial"] is False
    p.write_text(json.dumps({"1": [0, 2, 2, 1]}))
    code, _, err = run(capsys, "gh2", "--K", "Z2", "--H", "Z4", "--sigma", str(p))
    assert code == 2 and "automorphism" in err


def test_classify_gext_verify(capsys):
    code, rep, _ = run(capsys, "classify-gext", "--K", "Z3xZ3", "--H", "Z3", "--verify")
    assert code == 0 and rep["results"]["classes"] == 3
    assert all(e["search_confirms_gyro_split"] for e in rep["results"]["extensions"])


def test_gyro_split_file(capsys, tmp_path):
    p = tmp_path / "ext.json"
    p.write_text(json.dumps({"H": "Z2", "G": "Z4", "K": "Z2", "alpha": [0, 2], "beta": [0, 1, 0, 1]}))
    code, rep, _ = run(capsys, "gyro-split", "--ext", str(p), "--method", "search")
    assert code == 0 and rep["results"]["found"] is False
    p.write_text(json.dumps({"H": "Z2", "G": "Z4", "K": "Z2", "alpha": [0, 1], "beta": [0, 1, 0, 1]}))
    code, _, err = run(capsys, "gyro-split", "--ext", str(p))
    assert code == 2


def test_boxed_and_schur(capsys):
    code, rep, _ = run(capsys, "boxed-square", "--group", "Z3xZ3")
    assert code == 0 and rep["results"]["invariant_factors"] == [3]
    code, rep, _ = run(capsys, "schur", "--group", "S3")
    assert code == 0 and rep["results"]["agree"] is True


def test_crossed(capsys):
    code, rep, _ = run(capsys, "crossed", "--K", "Z3xZ3", "--H", "Z3")
    assert code == 0 and rep["results"]["sequence"]["exact_at_hom"]


def test_obstruction(capsys, tmp_path):
    p = tmp_path / "psi.json"
    p.write_text(json.dumps({"1": [0, 2, 1]}))
    code, rep, _ = run(capsys, "obstruction", "--H", "Z3", "--K", "Z2", "--psi", str(p), "--gyro")
    assert code == 0 and rep["results"]["realizable"] and rep["results"]["gyro_lifting_found"]


def test_gyro_iso(capsys):
    code, rep, _ = run(capsys, "gyro-iso", "--g1", "E27", "--g2", "Z3xZ3xZ3")
    assert code == 0 and rep["results"]["gyro_isomorphic"] is True
    code, rep, _ = run(capsys, "gyro-iso", "--g1", "Q8", "--g2", "D4")
    assert rep["results"]["gyro_isomorphic"] is False


def test_paper_regress_subset(capsys):
    code, rep, _ = run(capsys, "paper-regress", "--only", "2", "3")
    assert code == 0 and rep["results"]["passed"] == ["C02", "C03"]
    assert all("seconds" not in c for c in rep["results"]["criteria"])


def test_exit_codes(capsys, tmp_path):
    assert main(["gh2", "--K", "Z2"]) == 1
    assert main(["no-such-command"]) == 1
    assert main([]) == 1
    assert main(["gh2", "--K", "Nope", "--H", "Z2"]) == 2
    assert main(["boxed-square", "--group", "Z3xZ3xZ3xZ3"]) == 3
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["gyro-split", "--ext", str(bad)]) == 2
    capsys.readouterr()


def test_deterministic_output_is_stable(capsys):
    argv = ["--deterministic", "gh2", "--K", "S3", "--H", "Z2"]
    main(argv)
    a = capsys.readouterr().out
    main(argv)
    b = capsys.readouterr().out
    assert a == b and "timing" not in a


def test_text_format_and_timing(capsys):
    assert main(["boxed-square", "--group", "Z2"]) == 0
    out = capsys.readouterr().out
    assert "inputs_digest:" in out and "timing:" in out


def test_inputs_digest_depends_on_tables(capsys):
    _, a, _ = run(capsys, "check-gyrogroup", "--group", "Q8")
    _, b, _ = run(capsys, "check-gyrogroup", "--group", "D4")
    assert a["inputs_digest"] != b["inputs_digest"]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "gyrogroups", "--deterministic", "check-gyrogroup", "--group", "Z2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "verdict: true" in r.stdout
