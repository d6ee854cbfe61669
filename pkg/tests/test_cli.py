import json
import subprocess
import sys

import pytest

from eqlines.cli import run

L13 = "[-1,-1/3]u{1/3}"


def invoke(capsys, argv):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def ls14(tmp_path, capsys):
    path = str(tmp_path / "c.json")
    code, out, _ = invoke(capsys, ["construct", "--family", "ls", "--r", "2", "--t", "14", "--tau", "1/2", "--out", path])
    assert code == 0 and "28 points" in out
    return path


def test_construct_then_verify(ls14, capsys):
    code, out, _ = invoke(capsys, ["verify", ls14, "--L", L13])
    assert code == 0 and "size 28, dimension 15" in out


def test_verify_wrong_lset_lists_pairs(ls14, capsys):
    code, out, _ = invoke(capsys, ["verify", ls14, "--L", "{1/3}"])
    assert code == 1 and "offending pairs" in out
    assert "-1/3" in out


def test_bound_bukh(capsys):
    code, out, _ = invoke(capsys, ["bound", "--bukh", "1"])
    assert code == 0 and out.endswith("c = 1572864\n")
    assert "R_bound = 190\n" in out and "M = 786432\n" in out


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["bound", "--gerzon", "7"], "28 (equality possible: yes)"),
        (["bound", "--relative", "5", "1/3"], ": 10\n"),
        (["bound", "--relative", "9", "1/3"], "not applicable"),
        (["bound", "--caps", "1/3", "15"], "known exact: 28"),
        (["bound", "--caps", "1/5", "200"], "(threshold assumed)"),
    ],
)
def test_bound_variants(capsys, argv, needle):
    code, out, _ = invoke(capsys, argv)
    assert code == 0 and needle in out


def test_structured_output_parses(ls14, capsys):
    code, out, _ = invoke(capsys, ["verify", ls14, "--L", L13, "--format", "structured"])
    data = json.loads(out)
    assert code == 0 and data["ok"] and data["size"] == 28 and data["dimension"] == 15
    code, out, _ = invoke(capsys, ["bound", "--bukh", "1", "--format", "structured"])
    assert json.loads(out)["c"] == "1572864"


def test_gallery_and_verify(tmp_path, capsys):
    path = str(tmp_path / "p.json")
    assert invoke(capsys, ["gallery", "--name", "petersen-10", "--out", path])[0] == 0
    code, out, _ = invoke(capsys, ["verify", path, "--L", "{-1/3}u{1/3}"])
    assert code == 0 and "size 10, dimension 5" in out
    ico = str(tmp_path / "i.json")
    assert invoke(capsys, ["gallery", "--name", "icosahedron-6", "--out", ico])[0] == 0
    code, out, _ = invoke(capsys, ["verify", ico, "--L", "[-0.4473,-0.4471]u[0.4471,0.4473]", "--tol", "1e-9"])
    assert code == 0 and "size 6, dimension 3" in out


def test_audit_with_overrides_and_peel(tmp_path, capsys):
    path = str(tmp_path / "c.json")
    run(["construct", "--family", "ls", "--r", "2", "--t", "20", "--out", path])
    capsys.readouterr()
    argv = ["audit", path, "--L", L13, "--override-n", "6", "--override-t", "4", "--override-delta", "1/2",
            "--indep", ",".join(str(i) for i in range(20))]
    code, out, _ = invoke(capsys, argv + ["--format", "structured"])
    data = json.loads(out)
    assert code == 0 and data["applicable"] and len(data["bad_vertices"]) == 20
    code, out, _ = invoke(capsys, argv + ["--peel"])
    assert code == 0 and "peeling" in out.lower()


def test_audit_default_constants_inapplicable(ls14, capsys):
    code, out, _ = invoke(capsys, ["audit", ls14, "--L", L13, "--format", "structured"])
    assert code == 0 and json.loads(out)["applicable"] is False


def test_search(tmp_path, capsys):
    path = str(tmp_path / "s.json")
    code, out, _ = invoke(capsys, ["search", "--dim", "4", "--max-order", "7", "--out", path])
    assert code == 0 and "maximum 6" in out
    with open(path) as fh:
        assert json.load(fh)["certificate"]["alpha"] == "1/3"


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["bound"],
        ["bound", "--gerzon", "3", "--bukh", "1"],
        ["bound", "--bukh", "0"],
        ["bound", "--bukh", "x"],
        ["verify", "/nonexistent/file.json", "--L", L13],
        ["construct", "--family", "ls", "--r", "2", "--out", "x.json"],
        ["construct", "--family", "ls", "--r", "2", "--t", "3", "--tau", "3/2", "--out", "x.json"],
        ["search", "--dim", "3", "--max-order", "9"],
        ["search", "--dim", "3", "--max-order", "7", "--bogus"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = invoke(capsys, argv)
    assert code == 2 and err


def test_bad_lset_is_usage_error(ls14, capsys):
    code, _, err = invoke(capsys, ["verify", ls14, "--L", "[-1,-1/3"])
    assert code == 2 and "L-set" in err


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "eqlines", "bound", "--gerzon", "3"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("gerzon bound d = 3: 6")
