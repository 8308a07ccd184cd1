from __future__ import annotations

import json
import shutil
import subprocess
from pathlib import Path

import pytest

from homlie.cli import main
from homlie.fileformat import parse_file

DATA = Path(__file__).resolve().parent.parent / "data"

DUAL_NUMBERS = """format 1
field rational

begin associative A
dim 2
m 1 1 1 = 1
m 1 2 2 = 1
m 2 1 2 = 1
end
"""


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_quadratic4(capsys):
    code, out, _ = run(capsys, "check", DATA / "quadratic4.hl", "--what", "quadratic")
    assert code == 0
    cert = json.loads(out)
    assert cert["passed"] and cert["command"] == "check quadratic"
    assert run(capsys, "check", DATA / "quadratic4.hl", "--what", "homlie")[0] == 0
    assert run(capsys, "check", DATA / "quadratic4.hl", "--what", "manin")[0] == 0


def test_check_corrupted_constant_fails_with_witness(capsys, tmp_path):
    text = (DATA / "dim2.hl").read_text().replace("c 1 2 2 = 1", "c 1 2 2 = 1\nc 1 2 1 = 1", 1)
    path = tmp_path / "bad.hl"
    path.write_text(text)
    code, out, err = run(capsys, "check", path, "--what", "homlie")
    assert code == 1
    failing = [c for c in json.loads(out)["checks"] if not c["passed"]]
    assert failing and failing[0]["witness"].startswith("(e1,e2)")
    assert "FAIL" in err


def test_check_dangling_index_exits_two(capsys, tmp_path):
    path = tmp_path / "dangling.hl"
    path.write_text("format 1\nfield rational\nbegin homlie g\ndim 2\nc 1 3 2 = 1\nend\n")
    code, out, err = run(capsys, "check", path, "--what", "homlie")
    assert code == 2 and out == ""
    assert "line 5" in err


def test_missing_file_exits_two(capsys, tmp_path):
    assert run(capsys, "check", tmp_path / "nope.hl", "--what", "homlie")[0] == 2


def test_check_bialgebra_and_reference_o_operator(capsys):
    assert run(capsys, "check", DATA / "dim2.hl", "--what", "bialgebra")[0] == 0
    assert run(capsys, "check", DATA / "dim3a.hl", "--what", "bialgebra")[0] == 0
    code, out, _ = run(capsys, "check", DATA / "dim2.hl", "--what", "ooperator")
    assert code == 1
    names = {c["name"]: c["passed"] for c in json.loads(out)["checks"]}
    assert names["T:twist"] is False


def test_certificates_are_deterministic(capsys, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "check", DATA / "dim3a.hl", "--what", "bialgebra", "--out", first)
    run(capsys, "check", DATA / "dim3a.hl", "--what", "bialgebra", "--out", second)
    assert first.read_bytes() == second.read_bytes()
    one = run(capsys, "search", DATA / "dim2.hl")[1]
    two = run(capsys, "search", DATA / "dim2.hl")[1]
    assert one == two


def test_build_double_and_recheck(capsys, tmp_path):
    out = tmp_path / "double.hl"
    code, cert, _ = run(capsys, "build", DATA / "dim2.hl", "--what", "double", "--out", out)
    assert code == 0
    assert parse_file(out).first("homlie").value.dim == 4
    assert run(capsys, "check", out, "--what", "manin")[0] == 0
    back = tmp_path / "split.hl"
    assert run(capsys, "build", out, "--what", "split", "--out", back)[0] == 0
    assert parse_file(back).first("dual-algebra").value == parse_file(DATA / "dim2.hl").first("dual-algebra").value


def test_build_derivation_algebra(capsys, tmp_path):
    src = tmp_path / "eps.hl"
    src.write_text(DUAL_NUMBERS)
    out = tmp_path / "der.hl"
    code, cert, _ = run(capsys, "build", src, "--what", "derivation-algebra", "--out", out)
    assert code == 0
    assert parse_file(out).first("homlie").value.dim == 1
    assert "derivation space has dimension 1" in json.loads(cert)["notes"]


def test_build_delta_notes(capsys, tmp_path):
    code, cert, _ = run(capsys, "build", DATA / "dim3a.hl", "--what", "delta", "--out", tmp_path / "d.hl")
    assert code == 0
    notes = json.loads(cert)["notes"]
    assert notes[:3] == ["Delta(e1) = (1/a)*e1∧e2", "Delta(e2) = 0", "Delta(e3) = (-a)*e2∧e3"]


def test_build_dual_rep_and_semidirect(capsys, tmp_path):
    out = tmp_path / "dual.hl"
    assert run(capsys, "build", DATA / "dim2.hl", "--what", "dual-rep", "--out", out)[0] == 0
    assert run(capsys, "check", out, "--what", "rep")[0] == 0
    semi = tmp_path / "semi.hl"
    assert run(capsys, "build", DATA / "dim2.hl", "--what", "semidirect", "--out", semi)[0] == 0
    assert parse_file(semi).first("homlie").value.dim == 4


def test_search_counts(capsys, tmp_path):
    code, cert, _ = run(capsys, "search", DATA / "dim2.hl", "--grid=-1,0,1", "--support", "1,2", "--out", tmp_path)
    assert code == 0
    assert json.loads(cert)["outputs"] == [f"solution_{i:03d}.hl" for i in range(1, 4)]
    code, cert, _ = run(capsys, "search", DATA / "dim2.hl", "--grid=-1,0,1")
    assert len(json.loads(cert)["outputs"]) == 9
    code, cert, _ = run(capsys, "search", DATA / "dim3a.hl", "--support", "1,3", "--grid", "0,1")
    assert len(json.loads(cert)["outputs"]) == 1
    code, cert, _ = run(capsys, "search", DATA / "dim3a.hl", "--support", "1,3", "--grid", "")
    assert json.loads(cert)["outputs"] == []
    sol = parse_file(tmp_path / "solution_001.hl")
    assert {b.kind for b in sol.blocks.values()} == {"homlie", "rmatrix", "dual-algebra"}


def test_substitute(capsys, tmp_path):
    out = tmp_path / "a2.hl"
    code, _, _ = run(capsys, "substitute", DATA / "dim3a.hl", "--var", "a", "--value", "2", "--out", out)
    assert code == 0
    f = parse_file(out)
    assert f.var is None
    assert f.first("homlie").value.twist[2, 2] == 0.5
    assert run(capsys, "check", out, "--what", "bialgebra")[0] == 0
    code, _, err = run(capsys, "substitute", DATA / "dim3a.hl", "--var", "a", "--value", "0",
                       "--out", tmp_path / "a0.hl")
    assert code == 1
    assert "phi 3 3" in err
    assert run(capsys, "substitute", DATA / "dim3a.hl", "--var", "q", "--value", "1",
               "--out", tmp_path / "q.hl")[0] == 2


@pytest.mark.skipif(shutil.which("homlie") is None, reason="console script not installed")
def test_console_script(tmp_path):
    proc = subprocess.run(["homlie", "check", str(DATA / "quadratic4.hl"), "--what", "quadratic"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["passed"]
