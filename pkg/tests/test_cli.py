import json
import subprocess
import sys
from pathlib import Path

import pytest

from latcurve.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_table_d5_matches_reference(capsys):
    code, out, _ = run_cli(["table", "--builtin", "D,5"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("l2=2:")
    # starred semigroup member at (2,1) and bracketed conductor at (4,2)
    assert "-1*" in lines[1]
    assert "[0]" in lines[0]
    assert lines[2].split()[1] == "0*"


def test_invariants_a0(capsys):
    code, out, _ = run_cli(
        ["invariants", "--builtin", "A,0", "--format", "json"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    inv = doc["invariants"]
    assert inv["multiplicity"] == [1]
    assert inv["conductor"] == [0]
    assert inv["delta"] == 0


def test_classify_t44(capsys):
    code, out, _ = run_cli(
        ["classify", "--builtin", "T,4,4", "--format", "json"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"]["cmtype"] == "tame"
    assert doc["verdict"]["growth"] == "finite"
    assert doc["verdict"]["agreement"] is True


def test_spectral_queries(capsys):
    code, out, _ = run_cli(
        [
            "spectral", "--builtin", "D,5", "--format", "json",
            "--e1", "2,1,1,0", "--mincycle", "1,0",
        ],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    kinds = {q["kind"]: q for q in doc["spectral"]}
    assert kinds["e1"]["rank"] == 1
    assert kinds["mincycle"]["rank"] == 1


def test_motivic_depth(capsys):
    code, out, _ = run_cli(
        ["motivic", "--builtin", "D,4", "--format", "json", "--depth", "3"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["motivic"]["omega_order"] == -1
    assert doc["motivic"]["omega_coeffs"] == [1, 5, 4, 4, 4]
    level3 = next(l for l in doc["motivic"]["levels"] if l["d"] == 3)
    assert level3["coeffs"] == {"1": 1, "2": -2}


def test_catalog_listing(capsys):
    code, out, _ = run_cli(["catalog"], capsys)
    assert code == 0
    assert "E12" in out and "T" in out


def test_descriptor_round_trip(tmp_path, capsys):
    code, out, _ = run_cli(["catalog", "--builtin", "D,5"], capsys)
    assert code == 0
    path = tmp_path / "d5.json"
    path.write_text(out, encoding="utf-8")
    code, out2, _ = run_cli(
        ["invariants", "--germ", str(path), "--format", "json"], capsys
    )
    assert code == 0
    doc = json.loads(out2)
    assert doc["invariants"]["conductor"] == [4, 2]
    assert doc["invariants"]["delta"] == 3


def test_exit_code_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    code, _, err = run_cli(["invariants", "--germ", str(bad)], capsys)
    assert code == 2
    assert "line" in err


def test_exit_code_missing_source(capsys):
    code, _, err = run_cli(["invariants"], capsys)
    assert code == 2


def test_exit_code_margin(tmp_path, capsys):
    # an explicit hilbert grid too small to stabilize its own conductor
    doc = {
        "version": 1,
        "germ": "tiny",
        "r": 1,
        "source": {"kind": "hilbert", "bound": [2], "values": [0, 1, 1]},
        "flags": {},
        "bound": None,
    }
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    code, _, err = run_cli(["invariants", "--germ", str(path)], capsys)
    assert code == 3
    assert "hint" in err


def test_exit_code_route_disagreement(monkeypatch, capsys):
    import importlib

    cli = importlib.import_module("latcurve.cli")
    cls = importlib.import_module("latcurve.classify")
    monkeypatch.setattr(
        cls, "classify_motivic", lambda model: {"verdict": "wild"}
    )
    code, _, err = run_cli(["classify", "--builtin", "D,5"], capsys)
    assert code == 4
    assert "disagree" in err


@pytest.mark.parametrize(
    "germ,command",
    [
        ("D_5", "invariants"),
        ("D_5", "classify"),
        ("D_5", "table"),
        ("A_2", "homology"),
        ("T_4_4", "classify"),
    ],
)
def test_golden_files_byte_stable(germ, command, capsys):
    builtin = {"D_5": "D,5", "A_2": "A,2", "T_4_4": "T,4,4"}[germ]
    code, out, _ = run_cli([command, "--builtin", builtin, "--format", "json"], capsys)
    assert code == 0
    expected = (FIXTURES / germ / f"{command}.json").read_text(encoding="utf-8")
    assert out == expected


def test_golden_descriptor(capsys):
    code, out, _ = run_cli(["catalog", "--builtin", "D,5"], capsys)
    assert code == 0
    expected = (FIXTURES / "D_5" / "descriptor.json").read_text(encoding="utf-8")
    assert out == expected


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "latcurve.cli", "invariants", "--builtin", "E,8",
         "--format", "json"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["invariants"]["delta"] == 4


def test_threads_env_matches_serial(monkeypatch, capsys):
    monkeypatch.setenv("LATCURVE_THREADS", "4")
    code, out_threaded, _ = run_cli(
        ["homology", "--builtin", "T,3,6", "--format", "json"], capsys
    )
    assert code == 0
    monkeypatch.setenv("LATCURVE_THREADS", "1")
    code, out_serial, _ = run_cli(
        ["homology", "--builtin", "T,3,6", "--format", "json"], capsys
    )
    assert out_threaded == out_serial


def test_bound_override(capsys):
    code, out, _ = run_cli(
        ["invariants", "--builtin", "A,2", "--bound", "9", "--format", "json"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["bound"] == [9]
    assert doc["invariants"]["delta"] == 1
