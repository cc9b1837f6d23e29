import json
import subprocess
import sys

import pytest
from conftest import CORPUS

from fcat.cli import main
from fcat.fcatfile import dumps, load

BROKEN = """\
category broken
object x
arrow a : x -> x
arrow b : x -> x
compose a . a = b
compose a . b = a
compose b . a = b
compose b . b = b
"""


def run(capsys, *argv):
    code = main([str(a) for a in argv] + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_validate_ok(capsys):
    code, out = run(capsys, "validate", CORPUS / "two.fcat")
    assert code == 0 and out["verdict"] == "valid" and out["counterexample"] is None
    assert out["categories"] == [{"name": "two", "objects": 2, "morphisms": 3}]


def test_validate_broken(capsys, tmp_path):
    p = tmp_path / "broken.fcat"
    p.write_text(BROKEN)
    code, out = run(capsys, "validate", p)
    assert code == 2
    assert out["verdict"] == "invalid-input"
    assert any(v.startswith("AssocViolation") for v in out["counterexample"])


def test_parse_error_exit(capsys, tmp_path):
    p = tmp_path / "bad.fcat"
    p.write_text("category A\nobject a\ncompose f . f = f\n")
    assert main(["validate", str(p)]) == 2
    assert "3:9: unknown arrow 'f'" in capsys.readouterr().err


def test_missing_file(capsys):
    assert main(["validate", "/nonexistent.fcat"]) == 2


def test_check_model_invalid(capsys, tmp_path):
    p = tmp_path / "m.fcat"
    p.write_text((CORPUS / "two.fcat").read_text() + "\nmodel bad on two\nweq f\ncof\nfib\n")
    code, out = run(capsys, "check-model", p, "--model", "bad")
    assert code == 1 and out["verdict"] == "invalid"
    assert out["counterexample"]["check"] == "factorization:C/F∩W"
    assert out["counterexample"]["tuple"] == ["f"]


def test_enumerate(capsys, tmp_path):
    out_file = tmp_path / "e.fcat"
    code, out = run(capsys, "enumerate", CORPUS / "two.fcat", "--emit", out_file)
    assert code == 0 and out["count"] == 3
    assert [s["name"] for s in out["structures"]] == ["E1", "E2", "E3"]
    assert len(load(out_file).models) == 3


def test_enumerate_cap(capsys):
    assert main(["enumerate", str(CORPUS / "finset3.fcat"), "--cap", "5"]) == 2


def test_compare(capsys):
    code, out = run(capsys, "compare", CORPUS / "two.fcat", "--model", "M1", "--bound", "4")
    assert code == 0 and out["verdict"] == "Equivalent" and out["counterexample"] is None


def test_compare_inconclusive(capsys):
    code, out = run(capsys, "compare", CORPUS / "diamond.fcat", "--model", "collapse", "--bound", "1")
    assert code == 1 and out["verdict"] == "Inconclusive"
    assert out["counterexample"] == out["witness"]


def test_homotopy(capsys):
    args = ["homotopy", CORPUS / "finset3.fcat", "--model", "E5", "--pair", "m12_0", "m12_1"]
    code, out = run(capsys, *args, "--side", "left")
    assert code == 0 and out["verdict"] == "related"
    assert out["witness"]["left"]["kind"] == "cylinder"
    assert main([str(a) for a in args] + ["--side", "right"]) == 2  # 2 x 2 is missing
    capsys.readouterr()
    code, out = run(capsys, "homotopy", CORPUS / "finset3.fcat", "--model", "trivial",
                    "--pair", "m12_0", "m12_1", "--side", "left")
    assert code == 1 and out["counterexample"] == {"pair": ["m12_0", "m12_1"], "sides": ["left"]}


def test_homotopy_unknown_arrow(capsys):
    assert main(["homotopy", str(CORPUS / "two.fcat"), "--model", "M1", "--pair", "f", "g"]) == 2


def test_ho_writes_second_iteration(capsys, tmp_path):
    out_file = tmp_path / "ho.fcat"
    code, out = run(capsys, "ho", CORPUS / "two.fcat", "--model", "M3", "--out", out_file)
    assert code == 0 and out["objects"] == ["1"]
    assert out["classes"] == {"id(1)": ["id(1)"]}
    text = out_file.read_text()
    assert dumps(load(out_file)) == text
    code, out = run(capsys, "ho", out_file, "--model", "trivial")
    assert code == 0 and out["objects"] == ["1"]


def test_ho_refuses_invalid(capsys, tmp_path):
    p = tmp_path / "m.fcat"
    p.write_text((CORPUS / "two.fcat").read_text() + "\nmodel bad on two\nweq f\ncof\nfib\n")
    code, out = run(capsys, "ho", p, "--model", "bad")
    assert code == 1 and out["verdict"] == "invalid"


def test_localize(capsys, tmp_path):
    out_file = tmp_path / "loc.fcat"
    code, out = run(capsys, "localize", CORPUS / "two.fcat", "--model", "M2", "--bound", "2",
                    "--out", out_file)
    assert code == 0 and out["status"] == "exact"
    assert out["classes"]["1->0"] == ["f~"]
    assert dumps(load(out_file)) == out_file.read_text()
    code, out = run(capsys, "localize", CORPUS / "diamond.fcat", "--model", "collapse", "--bound", "1")
    assert code == 1 and out["status"] == "inconclusive"


def test_lemma_suite_and_classify(capsys):
    code, out = run(capsys, "lemma-suite", CORPUS / "finset3.fcat", "--model", "E5")
    assert code == 0 and out["verdict"] == "pass" and out["counterexample"] is None
    code, out = run(capsys, "classify", CORPUS / "two.fcat", "--model", "M2")
    assert code == 0 and out["Kcf"] == ["0"] and out["all_pairs_products"] is True


def test_fmt_is_identity_on_corpus(capsys):
    assert main(["fmt", str(CORPUS / "chain3.fcat")]) == 0
    assert capsys.readouterr().out == (CORPUS / "chain3.fcat").read_text()


@pytest.mark.parametrize("argv, code", [
    (["compare", "two.fcat", "--model", "M1", "--bound", "4"], 0),
    (["enumerate", "two.fcat"], 0),
])
def test_console_script(argv, code):
    argv = [str(CORPUS / a) if a.endswith(".fcat") else a for a in argv]
    proc = subprocess.run([sys.executable, "-m", "fcat.cli", *argv, "--json"],
                          capture_output=True, text=True)
    assert proc.returncode == code, proc.stderr
    assert "verdict" in json.loads(proc.stdout)
