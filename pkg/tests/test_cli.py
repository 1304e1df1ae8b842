import json
import subprocess
import sys

import numpy as np
import pytest

from weighted_hodge import __version__
from weighted_hodge.cli import ANCHORS, main
from weighted_hodge.helmholtz import Medium, ShellGrid, read_grid_field, write_grid_field
from weighted_hodge.helmholtz import manufactured as mf


def _run(tmp_path, *argv, name="out.json"):
    out = tmp_path / name
    code = main(list(argv) + ["--out", str(out)])
    return code, (out.read_text() if out.exists() else None)


def test_verify_towers_small(tmp_path):
    code, text = _run(tmp_path, "verify-towers", "--n-max", "2", "--k-max", "1", "--points", "4")
    assert code == 0
    rep = json.loads(text)
    assert rep["status"] == "pass" and rep["command"] == "verify-towers"
    assert rep["artifact_version"] == __version__
    assert set(rep) == {"artifact_version", "command", "config", "checks", "status"}
    for c in rep["checks"]:
        assert c["anchor"] and "tolerance" in c and "measured" in c


def test_verify_towers_order_zero(tmp_path):
    code, text = _run(tmp_path, "verify-towers", "--n-max", "0", "--points", "3")
    assert code == 0
    names = [c["name"] for c in json.loads(text)["checks"]]
    assert "ground_identity" not in names


def test_deterministic_reports(tmp_path):
    args = ("verify-towers", "--n-max", "1", "--points", "5", "--seed", "3")
    _, a = _run(tmp_path, *args, name="a.json")
    _, b = _run(tmp_path, *args, name="b.json")
    assert a == b
    _, c = _run(tmp_path, *args[:-1], "4", name="c.json")
    assert c != a


def test_dims_and_integrability(tmp_path):
    code, text = _run(tmp_path, "dims")
    assert code == 0
    rows = [c for c in json.loads(text)["checks"] if c["name"] == "dirichlet_dim_table"][0]
    dims = {(r["s"], r["q"]): r["dim"] for r in rows["detail"]["rows"]}
    assert dims[(-2.0, 1)] == 4 and dims[(-3.0, 1)] == 9 and dims[(-1.6, 2)] == 3
    code, _ = _run(tmp_path, "integrability", "--s-range=-1:1", "--R-list", "1e2,1e3,1e4")
    assert code == 0


def test_decompose_builtins(tmp_path):
    code, text = _run(tmp_path, "decompose", "--builtin", "dirichlet-ball", "--grid", "1,32,32,4")
    assert code == 0
    code, text = _run(tmp_path, "decompose", "--builtin", "manufactured-mix", "--s", "2",
                      "--correction", "on", "--grid", "1,32,64,8",
                      "--parts-out", str(tmp_path / "parts"))
    assert code == 0
    rep = json.loads(text)
    assert {c["name"] for c in rep["checks"]} >= {"coefficient_recovery", "correction_dimension"}
    grid, grad = read_grid_field(str(tmp_path / "parts_grad.csv"))
    assert grad.shape == (grid.size, 3)
    assert (tmp_path / "parts_correction.csv").exists()


def test_decompose_from_file(tmp_path):
    grid = ShellGrid(1.0, 32.0, 32, 4)
    F = mf.lemma_mix(grid, 0.0, Medium.identity()).F
    path = tmp_path / "field.csv"
    write_grid_field(str(path), grid, F)
    code, text = _run(tmp_path, "decompose", "--input", str(path))
    assert code == 0
    assert json.loads(text)["config"]["input"] == str(path)


def test_malformed_file_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("# r0=1,R=32,n_r=16,n_ang=1,version=1\n1,2\n")
    code, _ = _run(tmp_path, "decompose", "--input", str(path))
    assert code == 2
    assert "line 2:" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["verify-towers", "--n-max", "9"],
    ["decompose", "--builtin", "lemma-mix", "--s", "1.5"],
    ["decompose", "--builtin", "lemma-mix", "--grid", "1,4,32,4"],
    ["decompose", "--builtin", "lemma-mix", "--grid", "1,32"],
    ["decompose", "--builtin", "lemma-mix", "--medium", "foo"],
    ["decompose", "--builtin", "lemma-mix", "--s", "3", "--medium", "radial:0.5,1"],
    ["decompose", "--builtin", "lemma-mix", "--s", "1", "--correction", "on"],
    ["decompose", "--input", "/nonexistent/file.csv"],
    ["dims", "--s-list", "2"],
    ["integrability", "--families", "W"],
    ["nope"],
    [],
])
def test_usage_errors(tmp_path, argv):
    assert main(argv + ["--out", str(tmp_path / "x.json")] if argv and argv[0] != "nope" else argv) == 2


def test_failed_check_exit_code(tmp_path):
    # the radial medium breaks the coefficient recovery tolerance on this grid
    code, text = _run(tmp_path, "decompose", "--builtin", "manufactured-mix", "--s", "2",
                      "--correction", "on", "--medium", "radial:0.5,3")
    assert code == 1
    assert json.loads(text)["status"] == "fail"


def test_anchor_table_nonempty():
    assert all(isinstance(v, str) and v for v in ANCHORS.values())


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "weighted_hodge", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and __version__ in proc.stdout
