import dataclasses
import json
import subprocess
import sys

import pytest

from z4lee import cli, verify
from z4lee.gaussint import GaussInt


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_construct_table(capsys):
    code, out, _ = run(capsys, "construct", "--m", "5", "--set", "single:2")
    assert code == 0
    lines = out.splitlines()
    assert "n          10" in lines
    assert "codewords  512" in lines
    assert "d_lee      6" in lines
    assert "PASS  m=5  Theorem 1 single:2" in lines
    # right-aligned weights in ascending order
    assert lines[lines.index("lee_weight  frequency") + 1] == "         0          1"


def test_construct_json(capsys):
    code, out, _ = run(capsys, "construct", "--m", "3", "--set", "pair:0,2", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["distribution"] == [[0, 1], [2, 15], [4, 15], [6, 1]]
    assert (obj["n"], obj["codewords"], obj["k1"], obj["k2"], obj["d_lee"]) == (4, 32, 2, 1, 2)
    assert obj["poly"] == "0xb" and obj["spec"] == "pair:0,2"
    assert obj["verification"]["status"] == "PASS"


def test_construct_csv(capsys):
    code, out, _ = run(capsys, "construct", "--m", "3", "--set", "pair:0,2", "--format", "csv")
    assert code == 0
    assert out == "lee_weight,frequency\n0,1\n2,15\n4,15\n6,1\n"


def test_construct_even_m_is_exploratory(capsys):
    code, out, _ = run(capsys, "construct", "--m", "4", "--set", "single:0")
    assert code == 0
    assert "no oracle (even m)" in out
    obj = json.loads(run(capsys, "construct", "--m", "4", "--set", "single:0", "--format", "json")[1])
    assert obj["verification"] is None
    assert sum(f for _, f in obj["distribution"]) == obj["codewords"] == 4 ** obj["k1"] * 2 ** obj["k2"]


def test_construct_mixed_pair_is_exploratory(capsys):
    code, out, _ = run(capsys, "construct", "--m", "5", "--set", "pair:0,1")
    assert code == 0
    assert "no oracle" in out


@pytest.mark.parametrize("argv", [
    ["construct", "--m", "5", "--set", "bogus"],
    ["construct", "--m", "16", "--set", "single:0"],
    ["construct", "--m", "3", "--set", "single:0", "--poly", "0xf"],
    ["construct", "--m", "5", "--set", "single:0", "--workers", "0"],
    ["verify", "theorem1", "--m", "3"],
    ["verify", "lemma4", "--m", "4"],
    ["verify", "table2", "--m", "11"],
    ["batch", "--m", "5", "--subjects", ","],
    ["batch", "--m", "4,5", "--subjects", "lemma4"],
    ["batch", "--m", "5", "--subjects", "lemma99"],
    ["sums", "--m", "3", "--which", "joint", "--shifts", "x"],
])
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = cli.main(argv)
        raise SystemExit(code)
    assert exc.value.code == 2
    err = capsys.readouterr().err
    assert err.strip() and len(err.strip().splitlines()) <= 1 or "usage" in err


def test_verify_theorem_scope_message(capsys):
    code, _, err = run(capsys, "verify", "theorem1", "--m", "3")
    assert code == 2
    assert "requires m>3" in err


def test_verify_theorem1(capsys):
    code, out, _ = run(capsys, "verify", "theorem1", "--m", "5")
    assert code == 0
    assert out.splitlines() == [f"PASS  m=5  Theorem 1 single:{t}" for t in range(4)]


def test_verify_moments(capsys):
    code, out, _ = run(capsys, "verify", "moments", "--m", "7")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 9 and all(l.startswith("PASS") for l in lines)


def test_verify_json_and_csv(capsys):
    code, out, _ = run(capsys, "verify", "lemma4", "--m", "5", "--format", "json")
    reports = json.loads(out)
    assert [r["status"] for r in reports] == ["PASS", "PASS"]
    assert all(r["runtime_ms"] is None for r in reports)
    code, out, _ = run(capsys, "verify", "lemma4", "--m", "5", "--format", "csv", "--timings")
    assert out.splitlines()[0] == "m,subject,status,first_diff,runtime_ms"


def test_verify_failure_exit_3(capsys, monkeypatch):
    real = verify.predict_moment
    monkeypatch.setattr(verify, "predict_moment",
                        lambda m, name: real(m, name) + (1 if name == "L7.1" else 0))
    code, out, _ = run(capsys, "verify", "moments", "--m", "5")
    assert code == 3
    fail = [l for l in out.splitlines() if l.startswith("FAIL")]
    assert len(fail) == 1
    assert "Lemma 7(1)" in fail[0] and "first diff" in fail[0] and "-40959" in fail[0]


def test_construct_failure_exit_3(capsys, monkeypatch):
    real = cli.predict

    def wrong(m, spec):
        p = real(m, spec)
        return dataclasses.replace(p, d_lee=p.d_lee + 2)

    monkeypatch.setattr(cli, "predict", wrong)
    code, out, _ = run(capsys, "construct", "--m", "5", "--set", "single:2")
    assert code == 3
    assert "FAIL" in out and "d_lee: predicted 8, enumerated 6" in out


def test_internal_assertion_exit_4(capsys, monkeypatch):
    def boom(*a, **k):
        raise AssertionError("fingerprint collision")

    monkeypatch.setattr(cli, "construct", boom)
    code, _, err = run(capsys, "construct", "--m", "5", "--set", "single:2")
    assert code == 4
    assert "internal assertion" in err


def test_batch(capsys):
    code, out, _ = run(capsys, "batch", "--m", "3,5,7", "--subjects", "lemma4,theorem2", "--format", "json")
    assert code == 0
    cells = json.loads(out)["cells"]
    assert len(cells) == 6 and all(c["status"] == "PASS" for c in cells)
    assert all(c["runtime_ms"] >= 0 for c in cells)


def test_batch_skips_out_of_scope_cells(capsys):
    code, out, _ = run(capsys, "batch", "--m", "3,5", "--subjects", "theorem1", "--format", "json")
    assert code == 0
    assert [c["status"] for c in json.loads(out)["cells"]] == ["SKIP", "PASS"]


def test_batch_table(capsys):
    code, out, _ = run(capsys, "batch", "--m", "5,7,9", "--subjects", "theorem1,theorem3")
    assert code == 0
    assert out.splitlines()[1].split() == ["theorem1", "PASS", "PASS", "PASS"]


def test_sums(capsys):
    code, out, _ = run(capsys, "sums", "--m", "3", "--which", "minus", "--format", "csv")
    assert code == 0
    assert out == "value_re,value_im,frequency\n0,-4,28\n0,0,8\n0,4,28\n"
    code, out, _ = run(capsys, "sums", "--m", "3", "--which", "joint", "--shifts", "0,2", "--format", "json")
    rows = json.loads(out)
    assert sum(r["frequency"] for r in rows) == 8 * 6


@pytest.mark.parametrize("argv", [
    ["construct", "--m", "7", "--set", "complement:1", "--format", "json"],
    ["construct", "--m", "6", "--set", "pair:1,2"],
    ["verify", "lemma10", "--m", "7", "--format", "json"],
    ["sums", "--m", "7", "--which", "joint", "--shifts", "0,1,2,3", "--format", "csv"],
])
def test_output_is_byte_identical_across_runs_and_workers(capsys, argv):
    outs = {run(capsys, *argv, "--workers", str(w))[1] for w in (1, 2, 3, 1)}
    assert len(outs) == 1


def test_out_file_and_poly_file(tmp_path, capsys):
    polys = tmp_path / "polys.txt"
    polys.write_text("m=5 poly=0x3b\n", encoding="utf-8")
    dest = tmp_path / "report.json"
    code, out, _ = run(capsys, "construct", "--m", "5", "--set", "single:2", "--format", "json",
                       "--poly-file", str(polys), "--out", str(dest))
    assert code == 0 and out == ""
    obj = json.loads(dest.read_text(encoding="utf-8"))
    assert obj["poly"] == "0x3b"
    assert obj["d_lee"] == 6


def test_bad_poly_file(tmp_path, capsys):
    polys = tmp_path / "polys.txt"
    polys.write_text("m=5 poly=3b\n", encoding="utf-8")
    code, _, err = run(capsys, "construct", "--m", "5", "--set", "single:2", "--poly-file", str(polys))
    assert code == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "z4lee", "verify", "theorem2", "--m", "3"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.count("PASS") == 2


def test_report_diffs_are_json_safe():
    rep = verify.compare(GaussInt(1), GaussInt(2), 5, "x")
    assert json.dumps(cli._report_dict(rep, False))
