import json
import shutil
import subprocess
import sys

import pytest

from irk import bounds, cli


def call(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr().out.strip()
    lines = out.splitlines()
    assert len(lines) == 1, out
    return code, json.loads(lines[0])


def write_set(tmp_path, name, n, elements):
    p = tmp_path / name
    p.write_text(json.dumps({"n": n, "elements": elements}))
    return str(p)


# ---------------------------------------------------------------------------
# examples

def test_irr_m_s4(capsys):
    code, out = call(capsys, "irr", "m", "builtin:S4")
    assert code == 0 and out["value"] == 3 and out["exact"] is True


def test_bounds_f(capsys):
    code, out = call(capsys, "bounds", "f", "2", "1")
    assert code == 0 and out["value"] == "4"
    code, out = call(capsys, "bounds", "f", "4", "1/2")
    assert code == 0 and out["value"] == "1630818"


def test_bounds_budget_exit(capsys):
    code, out = call(capsys, "bounds", "f", "7", "1")
    assert code == 3 and out["error"] == "budget_exhausted"
    code, out = call(capsys, "bounds", "Psi", "3")
    assert code == 3 and int(out["lower_bound"]) >= 25


def test_bounds_iota_and_constructor(capsys):
    code, out = call(capsys, "bounds", "iota", "--perm", "(1 2 3)", "--k", "1", "--n", "6")
    assert code == 0 and out["member"] is True
    code, out = call(capsys, "bounds", "lemma18", "--perm", "(1 2)", "--k", "1", "--n", "6")
    assert code == 0 and out["size"] == 5 and out["verified"] is True


def test_classify_an_bad_set(capsys, tmp_path):
    f = write_set(tmp_path, "bad.json", 7,
                  [[[1, 2, 3]], [[1, 4, 5]], [[1, 6, 7]], [[2, 4, 6]], [[3, 5, 7]]])
    code, out = call(capsys, "classify", "an", f)
    assert code == 1 and out["error"] == "unclassifiable"


def test_classify_an_good_set(capsys, tmp_path):
    f = write_set(tmp_path, "good.json", 4, [[[1, 3, 2]], [[1, 4, 2]]])
    code, out = call(capsys, "classify", "an", f, "--allow-small")
    assert code == 0 and out["verified"] is True
    assert sorted(map(tuple, out["tree_form"]["tree"])) == [(1, 2), (1, 3), (1, 4)]


def test_classify_make_roundtrip(capsys, tmp_path):
    code, out = call(capsys, "classify", "make", "--type", "4", "--n", "8", "--seed", "3")
    assert code == 0 and out["irredundant_generating"] is True
    f = write_set(tmp_path, "t4.json", 8, out["elements"])
    code, out = call(capsys, "classify", "sn", f)
    assert code == 0 and 4 in out["matching_types"]


def test_decomp_commands(capsys):
    code, out = call(capsys, "decomp", "m", "(1 3 2 4)", "--partition", "1:1,2|2:3,4")
    assert code == 0 and all(out["checks"].values())
    assert out["decomposition"]["Q"] == [[1, 2]]
    code, out = call(capsys, "decomp", "strong", "(1 2 3)", "--x", "1,2", "--y", "3,4")
    assert code == 0
    assert out["decomposition"] == {"alpha": [[1, 2]], "beta": [[2, 3]]}


def test_wreath_build(capsys, tmp_path):
    code, out = call(capsys, "wreath", "build", "--base", "A5", "--top", "S3")
    assert code == 0 and out["order"] == str(60 ** 3 * 6) and out["degree"] == 15


def test_wreath_hall(capsys, tmp_path):
    p = tmp_path / "vec.json"
    p.write_text(json.dumps([["(1 2 3 4 5)", "(1 2 3 4 5)"], ["(1 2 3)", "(1 3 2)"]]))
    code, out = call(capsys, "wreath", "hall", "--base", "A5", "--vectors", str(p))
    assert code == 0 and out["generates"] is True and out["agree"] is True


# ---------------------------------------------------------------------------
# errors and exit codes

def test_unknown_group_is_usage_error(capsys):
    code, out = call(capsys, "irr", "m", "builtin:Q8x")
    assert code == 2 and set(out) >= {"error", "detail"}


def test_missing_arguments(capsys):
    code, out = call(capsys, "bounds", "f", "2")
    assert code == 2 and out["error"] == "usage"
    code, out = call(capsys, "frobnicate")
    assert code == 2


def test_budget_exhaustion_exit(capsys):
    code, out = call(capsys, "irr", "m", "builtin:S5", "--budget-nodes", "3")
    assert code == 3


def test_global_flags_either_side(capsys):
    a = call(capsys, "--seed", "5", "classify", "make", "--type", "2", "--n", "8")
    b = call(capsys, "classify", "make", "--type", "2", "--n", "8", "--seed", "5")
    assert a == b


def test_determinism(capsys):
    a = call(capsys, "classify", "sample", "--group", "A5", "--count", "2", "--seed", "9")
    b = call(capsys, "classify", "sample", "--group", "A5", "--count", "2", "--seed", "9")
    assert a == b
    c = call(capsys, "classify", "make", "--type", "7", "--n", "9", "--seed", "1")
    d = call(capsys, "classify", "make", "--type", "7", "--n", "9", "--seed", "2")
    assert c != d


def test_output_file(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code = cli.run(["bounds", "f", "3", "1", "--output", str(out_path)])
    assert code == 0 and capsys.readouterr().out == ""
    assert json.loads(out_path.read_text()) == {"value": "36"}


# ---------------------------------------------------------------------------
# acceptance through the CLI

def test_acceptance_subset(capsys):
    code, out = call(capsys, "acceptance", "--only", "A1,A7")
    assert code == 0
    assert [c["id"] for c in out["criteria"]] == ["A1", "A7"]


def test_acceptance_mutation_fails_a7(capsys, monkeypatch):
    real = bounds.f

    def tampered(k, q):
        if k == 1:
            return real(k, q) + 1
        return real(k, q)

    monkeypatch.setattr(bounds, "f", tampered)
    code, out = call(capsys, "acceptance", "--only", "A7")
    assert code == 1
    assert out["criteria"][0]["status"] == "fail"


@pytest.mark.skipif(shutil.which("irk") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["irk", "bounds", "f", "2", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"value": "4"}


def test_module_entry():
    proc = subprocess.run([sys.executable, "-m", "irk.cli", "bounds", "f", "1", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout) == {"value": "1"}
