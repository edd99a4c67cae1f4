import json
import shutil

import pytest

from genlocoh.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, corpus_dir, exit_code, main


@pytest.fixture
def corpus():
    return corpus_dir()


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def records(out):
    return [json.loads(line) for line in out.splitlines() if line.startswith("{")]


def test_verify_example(capsys, corpus):
    code, out = run(capsys, ["verify", str(corpus / "xy_example_nonvanishing.inst"),
                             "--format", "json"])
    (r,) = records(out)
    assert code == EXIT_OK
    assert r["agreement"] == "agree" and r["predictor"] == "nonvanishes"
    assert r["oracle"]["verdict"] == "nonzero" and r["witnesses"] == ["(x)"]
    assert r["oracle"]["nmax"] == 6 and r["oracle"]["window"] == 2


def test_verify_principal_variant(capsys, corpus):
    code, out = run(capsys, ["verify", str(corpus / "xy_example_principal_a.inst"),
                             "--format", "json", "--nmax", "5", "--window", "1"])
    (r,) = records(out)
    assert code == EXIT_OK
    assert r["agreement"] == "agree" and r["predictor"] == "vanishes"
    assert r["oracle"]["nmax"] == 5


def test_report_with_a_malformed_file(capsys, corpus, tmp_path):
    for name in ("xy_example_nonvanishing", "xy_example_principal_a"):
        shutil.copy(corpus / f"{name}.inst", tmp_path)
    (tmp_path / "broken.inst").write_text("[ring]\nvars = x\nfield = F(6)\n")
    code, out = run(capsys, ["report", str(tmp_path), "--format", "both"])
    recs = records(out)
    assert code != EXIT_OK
    assert [r["status"] for r in recs] == ["error", "ok", "ok"]
    assert "broken" in out.splitlines()[1] and "ERROR" in out
    assert "2 evaluated, 1 failed" in out


def test_output_is_deterministic_and_ordered(capsys, corpus):
    files = [str(corpus / f) for f in ("xyz_free.inst", "xy_free.inst", "xy_zero_N.inst")]
    _, out1 = run(capsys, ["verify", *files, "--format", "json"])
    _, out2 = run(capsys, ["verify", *files, "--format", "json", "--jobs", "2"])
    strip = [[{k: v for k, v in r.items() if k != "timing"} for r in records(o)]
             for o in (out1, out2)]
    assert strip[0] == strip[1]
    assert [r["id"] for r in strip[0]] == ["xyz_free", "xy_free", "xy_zero_N"]


def test_predict_and_bounds(capsys, corpus):
    code, out = run(capsys, ["predict", str(corpus / "xy_not_cm_sum.inst"), "--format", "json"])
    (r,) = records(out)
    assert code == EXIT_OK and r["predictor"] == "nonvanishes"
    assert r["witnesses"] == ["(x)", "(x, y)"]
    code, out = run(capsys, ["bounds", str(corpus / "xy_not_cm_sum.inst"), "--format", "json"])
    (r,) = records(out)
    assert r["bounds"]["pdM"] + r["bounds"]["dimTensor"] == 3
    code, out = run(capsys, ["bounds", str(corpus / "xy_zero_N.inst"), "--format", "json"])
    assert code == EXIT_FAIL and records(out)[0]["status"] == "error"


def test_table_output(capsys, corpus):
    code, out = run(capsys, ["verify", str(corpus)])
    lines = out.splitlines()
    assert lines[0].split() == ["id", "predictor", "oracle", "agreement", "witnesses"]
    assert "disagree 0" in lines[-1]
    assert code == EXIT_OK


def test_usage_errors(capsys, tmp_path):
    assert main(["verify"]) == EXIT_USAGE
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main(["verify", str(tmp_path / "nope.inst")]) == EXIT_USAGE
    assert main(["verify", "x.inst", "--nmax", "2", "--window", "2"]) == EXIT_USAGE
    assert main(["report", str(tmp_path / "missing")]) == EXIT_USAGE
    capsys.readouterr()


def test_glc_errors_become_failure_records(capsys, tmp_path):
    (tmp_path / "infinite.inst").write_text(
        "[ring]\nvars = x, y, z\nfield = F(101)\nhypersurface = x*y\n"
        "[ideal]\ngenerators = x\n[M]\nquotient = x\n[N]\nquotient = 0\n")
    code, out = run(capsys, ["verify", str(tmp_path / "infinite.inst"), "--format", "json"])
    (r,) = records(out)
    assert code == EXIT_FAIL
    assert r["kind"] == "InfiniteProjectiveDimension"


def test_exit_code_rules():
    ok = {"status": "ok", "agreement": "agree"}
    assert exit_code([ok]) == EXIT_OK
    assert exit_code([ok, {"status": "ok", "agreement": "disagree"}]) == EXIT_FAIL
    assert exit_code([ok, {"status": "error", "kind": "parse"}]) == EXIT_USAGE
    assert exit_code([{"status": "error", "kind": "parse"},
                      {"status": "ok", "agreement": "disagree"}]) == EXIT_FAIL
