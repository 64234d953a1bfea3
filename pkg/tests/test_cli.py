import json
import subprocess
import sys

import pytest

from bordered_ks.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ks_dimension(capsys):
    code, out, _ = run(capsys, "verify-algebra", "--name", "KS", "--m", "2", "--maxlen", "8")
    assert code == 0
    assert "dimension: 5" in out


def test_bad_m_is_usage_error(capsys):
    code, _, err = run(capsys, "verify-algebra", "--name", "KS", "--m", "1")
    assert code == 2 and "--m" in err


def test_unknown_algebra(capsys):
    assert run(capsys, "verify-algebra", "--name", "Q", "--m", "3")[0] == 2


def test_argparse_errors_are_usage(capsys):
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "verify-theorem2", "--m", "3")[0] == 2
    assert run(capsys, "verify-theorem2", "--m", "3", "--i", "3")[0] == 2


@pytest.mark.parametrize("name", ["KS", "B", "Cl"])
def test_verify_algebras(capsys, name):
    code, out, _ = run(capsys, "verify-algebra", "--name", name, "--m", "3", "--maxlen", "6")
    assert code == 0 and out.endswith("RESULT PASS\n")


def test_clbot_runs_theorem1(capsys):
    code, out, _ = run(capsys, "verify-algebra", "--name", "Clbot", "--m", "4", "--maxlen", "8")
    assert code == 0
    assert "PASS ker phi = <U_1+...+U_m>" in out
    assert "PASS U_i^2 in <U_1+...+U_m>" in out


def test_theorem2_boundary_case(capsys):
    code, out, _ = run(capsys, "verify-theorem2", "--m", "3", "--i", "2", "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["ok"] and rep["info"]["generic case"] is False
    names = [c["name"] for c in rep["checks"]]
    assert "h'.h = 0" in names and "lemma T^2 = 0" in names
    assert "seconds" not in rep


def test_reports_are_byte_identical(capsys):
    args = ("verify-theorem2", "--m", "3", "--i", "1", "--sign", "neg", "--max-inputs", "2")
    first = run(capsys, *args)
    second = run(capsys, *args)
    assert first == second and first[0] == 0


def test_timing_flag(capsys):
    code, out, _ = run(capsys, "verify-algebra", "--name", "KS", "--m", "2", "--timing")
    assert code == 0 and "seconds:" in out


def test_verify_bimodule(capsys):
    for obj in ("R", "Rest", "crossing", "Ind"):
        code, out, _ = run(capsys, "verify-bimodule", "--object", obj, "--m", "3", "--i", "1",
                           "--sign", "neg", "--max-inputs", "2")
        assert code == 0, out


def test_braid_inverse_pair(capsys):
    code, out, _ = run(capsys, "braid", "--word", "1 -1", "--m", "3", "--reduce", "--identity")
    assert code == 0
    assert "generators: 3" in out and 'isomorphism: "found"' in out
    assert "not a statement proved" in out


def test_braid_relation_osz(capsys):
    code, out, _ = run(capsys, "braid", "--word", "1 2 1", "--compare", "2 1 2", "--m", "3",
                       "--flavor", "OSz", "--reduce", "--max-inputs", "2")
    assert code == 0 and 'isomorphism: "found"' in out


def test_braid_single_letter(capsys, tmp_path):
    from bordered_ks.serialize import loads

    out_path = tmp_path / "r1.json"
    code, out, _ = run(capsys, "braid", "--word", "1", "--m", "3", "--out", str(out_path))
    assert code == 0 and "generators: 7" in out
    assert len(loads(out_path.read_text()).gens) == 7
    # the unit arrow <(1)> -> <(1)x(1)> cancels
    code, out, _ = run(capsys, "braid", "--word", "1", "--m", "3", "--reduce")
    assert code == 0 and "generators: 5" in out


def test_braid_no_relabeling_is_failure_not_verdict(capsys):
    code, out, _ = run(capsys, "braid", "--word", "1 2", "--compare", "2 1", "--m", "3", "--reduce")
    assert code == 1
    assert "not isomorphic" not in out


def test_braid_bad_words(capsys):
    assert run(capsys, "braid", "--word", "3", "--m", "3")[0] == 2
    assert run(capsys, "braid", "--word", "0", "--m", "3")[0] == 2
    assert run(capsys, "braid", "--word", "a b", "--m", "3")[0] == 2
    assert run(capsys, "braid", "--word", "1", "--m", "3", "--flavor", "X")[0] == 2


def test_dump_and_load(capsys, tmp_path):
    code, out, _ = run(capsys, "dump", "--object", "crossing", "--m", "3", "--i", "1")
    assert code == 0 and '"k_slot"' in out
    path = tmp_path / "p1.json"
    path.write_text(out)
    code, out, _ = run(capsys, "load", str(path))
    assert code == 0 and "round trip stable: true" in out


def test_load_schema_error_names_arrow(capsys, tmp_path):
    run(capsys, "dump", "--object", "R", "--m", "3", "--i", "1", "--out", str(tmp_path / "r.json"))
    doc = json.loads((tmp_path / "r.json").read_text())
    doc["arrows"][0]["target"] = "<(2)>"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, _, err = run(capsys, "load", str(bad))
    assert code == 2
    assert "arrows[0] (<(0)> -> <(2)>)" in err


def test_load_missing_file(capsys, tmp_path):
    assert run(capsys, "load", str(tmp_path / "missing.json"))[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bordered_ks", "verify-algebra", "--name", "KS", "--m", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
