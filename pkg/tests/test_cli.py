import json
import subprocess
import sys

import pytest

from qreflect import goldens
from qreflect.cli import main
from qreflect.matprod import QMatrix, build_k_boundary, build_k_trace, build_s_boundary
from qreflect.scalar import parse_scalar


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def matrix_json(capsys, *argv):
    code, out, _ = run(capsys, "matrix", "--format", "json", *argv)
    assert code == 0
    return QMatrix.from_json(json.loads(out))


# ---------------------------------------------------------------- matrix


def golden_columns(name):
    rec, = (r for r in goldens.load("2d")["matrices"] if r["name"] == name)
    return {(tuple(map(int, r.replace(",", ""))), tuple(map(int, c.replace(",", "")))): parse_scalar(v)
            for c, rows in rec["columns"].items() for r, v in rows.items()}


def test_matrix_s_boundary_n2(capsys):
    M = matrix_json(capsys, "--family", "s-boundary", "--s", "1", "--sp", "1", "--n", "2")
    assert M == build_s_boundary(2, 1, 1)
    gold = golden_columns("s-boundary-1,1-n2")
    assert gold and all(M[key] == v for key, v in gold.items())


def test_matrix_k_trace_n3(capsys):
    M = matrix_json(capsys, "--family", "k-trace", "--n", "3")
    assert M == build_k_trace(3)
    assert M.entries == golden_columns("k-trace-n3")


def test_matrix_k_boundary_rotation(capsys):
    M = matrix_json(capsys, "--family", "k-boundary", "--k", "2", "--kp", "2", "--n", "1")
    assert M.entries == {((1,), (0,)): parse_scalar("1"), ((0,), (1,)): parse_scalar("-1")}
    assert M == build_k_boundary(1, 2, 2)


def test_matrix_round_trip_bytes(capsys):
    _, out, _ = run(capsys, "matrix", "--format", "json", "--family", "s-trace", "--n", "2")
    assert QMatrix.from_json(json.loads(out)).dumps() + "\n" == out


def test_matrix_text(capsys):
    code, out, _ = run(capsys, "matrix", "--family", "k-boundary", "--k", "1", "--kp", "1", "--n", "1")
    assert code == 0 and out.strip()


def test_matrix_to_file(tmp_path, capsys):
    path = tmp_path / "m.json"
    code, out, _ = run(capsys, "matrix", "--format", "json", "--family", "k-trace", "--n", "2",
                       "--out", str(path))
    assert code == 0 and out == ""
    assert QMatrix.from_json(json.loads(path.read_text())) == build_k_trace(2)


# ---------------------------------------------------------------- verify, goldens, element


def test_verify_ybe_trace(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "ybe", "--family", "tr", "--n", "2",
                       "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["status"] == "pass" and d["identity"] == "ybe" and "seconds" not in d


def test_verify_timings_flag(capsys):
    _, out, _ = run(capsys, "verify", "--identity", "inversion", "--kind", "R", "--truncation", "2",
                    "--format", "json", "--timings")
    assert "seconds" in json.loads(out)


def test_verify_text_line(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "qre", "--components", "0000", "--truncation", "0")
    assert code == 0
    assert out.startswith("quantized-re ") and "PASS" in out


def test_verify_intertwiner_and_weyl(capsys):
    assert run(capsys, "verify", "--identity", "intertwiner", "--type", "D2", "--n", "1")[0] == 0
    assert run(capsys, "verify", "--identity", "intertwiner", "--type", "A", "--n", "2",
               "--sign", "-1")[0] == 0
    assert run(capsys, "verify", "--identity", "weyl", "--type", "B", "--n", "2")[0] == 0


def test_verify_tetra_spot(capsys):
    code, _, _ = run(capsys, "verify", "--identity", "tetra", "--in", "0,0,0,0,0,0",
                     "--out-index", "0,0,0,0,0,0")
    assert code == 0


def test_goldens(capsys):
    code, out, _ = run(capsys, "goldens")
    assert code == 0
    assert out.strip().endswith("match")
    assert "FAIL" not in out


def test_element_k3d(capsys):
    code, out, _ = run(capsys, "element", "--kind", "k3d", "--out", "1,1,1,1", "--in", "0,2,1,0")
    assert code == 0
    assert parse_scalar(out.strip()) == parse_scalar("q^5*(1+q^2)*(1-q^2-q^6)")


def test_element_json(capsys):
    _, out, _ = run(capsys, "element", "--kind", "r3d", "--out", "1,3,0", "--in", "3,1,2",
                    "--format", "json")
    d = json.loads(out)
    assert d["indices"] == {"out": [1, 3, 0], "in": [3, 1, 2]}


# ---------------------------------------------------------------- exit codes


@pytest.mark.parametrize("argv", [
    ["matrix", "--family", "s-boundary", "--n", "1"],
    ["matrix", "--family", "nope", "--n", "1"],
    ["verify", "--identity", "re", "--family", "boundary", "--n", "1", "--s", "2", "--sp", "2",
     "--k", "1", "--kp", "1"],
    ["verify", "--identity", "ybe"],
    ["verify", "--identity", "intertwiner", "--type", "A", "--n", "1"],
    ["element", "--kind", "r3d", "--out", "1,1", "--in", "1,1,1"],
    ["verify", "--identity", "qre", "--jobs", "0"],
    [],
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_failure_exit_1(capsys, monkeypatch):
    from qreflect import verify

    def broken(*a, **k):
        return verify.Certificate("ybe", {}, "fail", "component x")
    monkeypatch.setattr(verify, "check_ybe", broken)
    code, out, _ = run(capsys, "verify", "--identity", "ybe", "--n", "1")
    assert code == 1 and "FAIL" in out


# ---------------------------------------------------------------- determinism


def test_byte_identical_runs(capsys, monkeypatch):
    # --jobs writes QREFLECT_JOBS; let monkeypatch restore it afterwards
    monkeypatch.setenv("QREFLECT_JOBS", "1")
    argv = ["verify", "--identity", "eigen-k", "--s", "1", "--k", "1", "--truncation", "3", "--format", "json"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv, "--jobs", "2")[1]
    assert first == second
    argv = ["matrix", "--format", "json", "--family", "s-boundary", "--s", "2", "--sp", "1", "--n", "2"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qreflect", "element", "--kind", "r3d",
                           "--out", "0,0,0", "--in", "0,0,0"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "1"
