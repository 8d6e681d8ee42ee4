from __future__ import annotations

import json
import subprocess
import sys

import pytest

from fixture_data import FIXTURES, MODULES, MOVIES
from khovanov.cli import main, parse_window

TREFOIL = "PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_window():
    assert parse_window("-12:4") == (-12, 4)
    assert parse_window(None) is None


def test_homology_table(capsys):
    code, out, _ = run(capsys, "homology", "--pd", TREFOIL)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split()[:2] == ["j\\i", "-3"]
    assert any(line.split()[0] == "-7" and "Z/2" in line for line in lines)


def test_homology_json_and_modern(capsys):
    code, out, _ = run(capsys, "homology", "--braid", "1 1 1", "--strands", "2", "--format", "json", "--modern")
    data = json.loads(out)
    assert code == 0 and data["labels"] == "modern" and data["schema"] == 1
    assert {"i": 2, "j": 7, "rank": 0, "torsion": [2]} in data["groups"]


def test_homology_poincare_with_twist(capsys):
    _, plain, _ = run(capsys, "homology", "--braid", "1 1 1 1", "--strands", "2", "--format", "poincare")
    _, twisted, _ = run(
        capsys, "homology", "--braid", "1 1 1 1", "--strands", "2", "--format", "poincare", "--twist", "0,1,2,3"
    )
    assert plain == twisted


def test_zc_needs_a_window(capsys, monkeypatch):
    monkeypatch.delenv("KHOVANOV_WINDOW", raising=False)
    code, _, err = run(capsys, "homology", "--pd", TREFOIL, "--ring", "zc")
    assert code == 3 and "DegreeWindowTooSmall" in err
    monkeypatch.setenv("KHOVANOV_WINDOW", "-9:-3")
    code, out, _ = run(capsys, "homology", "--pd", TREFOIL, "--ring", "zc", "--format", "json")
    assert code == 0 and json.loads(out)["window"] == [-9, -3]


def test_zc_window_flag(capsys):
    code, out, _ = run(capsys, "homology", "--pd", TREFOIL, "--ring", "zc", "--window", "-12:-3", "--format", "poincare")
    assert code == 0 and "T[2] t^-2 q^-7" in out


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "homology", "--pd", "PD[X(1,2,3)]")
    assert code == 2 and "MalformedSyntax" in err
    code, _, _ = run(capsys, "jones", "--braid", "1 x", "--strands", "2")
    assert code == 2


def test_jones_and_bracket(capsys):
    assert run(capsys, "jones", "--pd", TREFOIL)[1].strip() == "t^-1 + t^-3 - t^-4"
    data = json.loads(run(capsys, "jones", "--pd", TREFOIL, "--format", "json")[1])
    assert data["jones"] == {"-2": 1, "-6": 1, "-8": -1}
    out = run(capsys, "bracket", "--braid", "1", "--strands", "2")[1]
    assert out.startswith("<D> = ") and "K(D) = " in out


def test_check_command(capsys):
    code, out, _ = run(capsys, "check", "--pd", TREFOIL, "--property", "d_squared", "--property", "parity")
    assert code == 0
    assert out.splitlines() == ["d_squared: pass", "parity: pass"]
    code, out, _ = run(capsys, "check", "--braid", "1 -2 1 -2", "--strands", "3", "--all", "--format", "json")
    assert code == 0 and all(r["status"] in ("pass", "observed") for r in json.loads(out)["reports"])
    code, _, _ = run(capsys, "check", "--pd", TREFOIL, "--property", "bogus")
    assert code == 2


def test_tangle_command(capsys):
    code, out, _ = run(capsys, "tangle", "--pd", TREFOIL, "--marked", "1", "--module", "A/2XA", "--window", "-12:4", "--format", "json")
    assert code == 0
    groups = {(g["i"], g["j"]): (g["rank"], g["torsion"]) for g in json.loads(out)["groups"]}
    assert groups[(0, -3)] == (0, [2])
    code, out, _ = run(capsys, "tangle", "--pd", TREFOIL, "--marked", "1", "--module", str(MODULES / "A_mod_c.json"), "--window", "-12:4", "--format", "poincare")
    assert code == 0 and "t^-3 q^-9" in out


def test_movie_command(capsys):
    assert run(capsys, "movie", str(MOVIES / "sphere.json"))[1].strip() == "-c"
    assert run(capsys, "movie", str(MOVIES / "sphere.json"), "--ring", "z")[1].strip() == "0"
    assert run(capsys, "movie", str(MOVIES / "torus.json"))[1].strip() == "2"
    assert run(capsys, "movie", str(MOVIES / "genus2.json"))[1].strip() == "0"
    code, out, _ = run(capsys, "movie", str(MOVIES / "trefoil_r1_r2.json"), "--ring", "z")
    assert code == 0 and out.strip() == "q-shift 0; chain map: yes"
    code, _, err = run(capsys, "movie", str(MOVIES / "r3.json"))
    assert code == 4 and "UnsupportedMove" in err


def test_table_command(capsys, tmp_path):
    code, out, _ = run(capsys, "table", str(FIXTURES / "knot_table.csv"), "--command", "jones")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0
    assert {r["name"]: r["jones"] for r in rows}["trefoil_left"] == "t^-1 + t^-3 - t^-4"
    bad = tmp_path / "bad.csv"
    bad.write_text('name,pd\nbroken,"PD[X(1,2)]"\nunknot_curl,"PD[X(1,2,2,1)]"\n')
    code, out, _ = run(capsys, "table", str(bad), "--jobs", "2")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 2 and rows[0]["error"]["type"] == "MalformedSyntax" and "homology" in rows[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "khovanov", "jones", "--braid", "1 1 1", "--strands", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "t^-1 + t^-3 - t^-4"


@pytest.mark.parametrize("argv", [[], ["homology"], ["homology", "--pd", TREFOIL, "--braid", "1"]])
def test_usage_errors(capsys, argv):
    if not argv:
        with pytest.raises(SystemExit):
            main(argv)
        return
    assert main(argv) == 2
