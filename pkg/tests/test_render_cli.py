import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from strataforge import render_cli as R
from strataforge.chevalley import InternalError
from strataforge.orbits import ConfigError

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(capsys, *argv):
    code = R.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def cfg(tmp_path, text, name="c.yaml"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def test_orbits_json(capsys):
    code, out, _ = run(capsys, "orbits", "--config", str(CONFIGS / "carayol.yaml"))
    assert code == 0
    data = json.loads(out)
    assert data["schema_version"] == R.SCHEMA_VERSION
    rows = data["orbits"]
    assert len(rows) == 6
    assert set(rows[0]) >= {"label", "frame", "coset_rep_word", "codim", "flags", "hpq"}
    assert sum(r["flags"]["open"] for r in rows) == 3


def test_pgl2_cartans(capsys):
    code, out, _ = run(capsys, "cartans", "--config", str(CONFIGS / "pgl2.yaml"))
    data = json.loads(out)
    assert code == 0 and len(data["cartans"]["frames"]) == 2


def test_classify_psp4_table(capsys):
    code, out, _ = run(capsys, "classify", "--config", str(CONFIGS / "psp4_complete.yaml"))
    rows = json.loads(out)["classify"]
    assert code == 0
    bad = [r for r in rows if r["polarizable"]["verdict"] == "not_polarizable"]
    assert bad and all(r["style"] == "crossed" for r in bad)
    for r in rows:
        if r["flags"]["base"] or (r["flags"]["boundary_stratum"] and r["polarizable"]["verdict"] == "polarizable"):
            assert r["style"] == "solid"
        elif not r["flags"]["boundary_stratum"]:
            assert r["style"] == "open"


def test_witness_coordinates_round_trip(capsys):
    from strataforge.cyclofield import from_text
    code, out, _ = run(capsys, "classify", "--config", str(CONFIGS / "carayol.yaml"))
    rows = {r["label"]: r for r in json.loads(out)["classify"]}
    w = rows["o1^2"]["polarizable"]["witness_frame_coords"]
    assert len(w) == 2
    vals = [from_text(v) for v in w.values()]
    assert vals[0] == vals[1].conj() or vals[0] == -vals[1].conj()


def _dot_counts(text):
    nodes = re.findall(r'^\s*"([^"]+)" \[', text, re.M)
    edges = re.findall(r'^\s*"([^"]+)" -> "([^"]+)"', text, re.M)
    return nodes, edges


@pytest.mark.parametrize("name", ["pgl2", "carayol", "psp4_complete", "g2_C", "siegel2"])
def test_dot_round_trip(capsys, name):
    code, out, _ = run(capsys, "hasse", "--config", str(CONFIGS / f"{name}.yaml"), "--format", "dot")
    assert code == 0
    assert out.startswith("digraph ") and out.rstrip().endswith("}")
    assert out.count("{") == out.count("}")
    nodes, edges = _dot_counts(out)
    rep = R.Report(R.load_config(str(CONFIGS / f"{name}.yaml")))
    assert sorted(nodes) == sorted(r.label for r in rep.records)
    assert len(edges) == len(rep.eng.edges)
    assert all(s in nodes and d in nodes for s, d in edges)


def test_determinism(capsys):
    outs = []
    for _ in range(2):
        outs.append(run(capsys, "classify", "--config", str(CONFIGS / "siegel2.yaml"))[1])
        outs.append(run(capsys, "hasse", "--config", str(CONFIGS / "siegel2.yaml"), "--format", "dot")[1])
    assert outs[0] == outs[2] and outs[1] == outs[3]


def _grid(text):
    lines = [l for l in text.splitlines() if l.strip()]
    head = lines[0].split()[1:]
    ps = [int(x) for x in head]
    rows = {}
    for l in lines[1:]:
        parts = l.split()
        rows[parts[0]] = parts[1:]
    return ps, rows


def test_mhd_pgl2(capsys):
    code, out, _ = run(capsys, "mhd", "--config", str(CONFIGS / "pgl2.yaml"), "--format", "ascii")
    assert code == 0
    ps, rows = _grid(out.split("\n", 1)[1])
    assert ps == [-1, 0, 1]
    assert rows["1"] == ["1", ".", "."]
    assert rows["0"] == [".", "(1)", "."]
    assert rows["-1"] == [".", ".", "1"]


def test_mhd_carayol_column_sums(capsys):
    code, out, _ = run(capsys, "mhd", "--config", str(CONFIGS / "carayol.yaml"), "--format", "ascii")
    ps, rows = _grid(out.split("\n", 1)[1])
    assert rows["sum"] == ["1", "2", "2", "2", "1"]


def test_mhd_label_and_unknown(capsys):
    code, out, _ = run(capsys, "mhd", "o1^2", "--config", str(CONFIGS / "carayol.yaml"), "--format", "json")
    assert code == 0 and json.loads(out)["mhd"]["label"] == "o1^2"
    code, _, err = run(capsys, "mhd", "o9^e", "--config", str(CONFIGS / "carayol.yaml"))
    assert code == 2 and "unknown orbit" in err


def test_limit_sp6(capsys):
    code, out, _ = run(capsys, "limit", "--config", str(CONFIGS / "siegel3.yaml"), "--j", "R3",
                       "--n", "(-1,-2,-1)+(-1,-1,-1)+(0,-1,-1)")
    assert code == 0
    data = json.loads(out)["limit"]
    assert data["is_split"] and data["levi_type"] == "A2"
    assert data["naive_limit_orbit"] == "o4^e"


@pytest.mark.parametrize("text,needle", [
    ("type: A2\ngrading: [1, 1, 1]\n", "does not match rank"),
    ("type: X5\ngrading: [1]\n", "type"),
    ("type: A2\ngrading: [0, 0]\n", "needs at least one 1"),
    ("type: A2\ngrading: [1, 2]\n", "2:"),
    ("type: A2\ngrading: [1, 1]\nbogus: 3\n", "3:1: bogus"),
    ("type: A2\ngrading: [1, 1\n", "not valid YAML"),
    ("- 1\n- 2\n", "mapping"),
    ("type: A2\ngrading: [1, 1]\nreal_weyl_fixtures:\n  R5: [real]\n", "unknown frame"),
    ("type: A2\ngrading: [1, 1]\ndotted_edges:\n  - [o0^e, o7^e]\n", "unknown orbit"),
    ("type: A2\ngrading: [1, 1]\nsearch_height: 0\n", "search_height"),
])
def test_config_errors_exit_2(tmp_path, capsys, text, needle):
    code, out, err = run(capsys, "orbits", "--config", cfg(tmp_path, text))
    assert code == 2 and out == ""
    assert needle in err


def test_missing_config_and_bad_limit(tmp_path, capsys):
    code, _, err = run(capsys, "orbits", "--config", str(tmp_path / "nope.yaml"))
    assert code == 2 and "cannot read" in err
    c = str(CONFIGS / "pgl2.yaml")
    assert run(capsys, "limit", "--config", c)[0] == 2
    assert run(capsys, "limit", "--config", c, "--j", "R7", "--n", "(-1)")[0] == 2
    assert run(capsys, "limit", "--config", c, "--j", "R1", "--n", "(-1,0)")[0] == 2
    assert run(capsys, "limit", "--config", c, "--j", "R1", "--n", "(-2)")[0] == 2


def test_internal_error_exit_3(capsys, monkeypatch):
    def boom(*a, **k):
        raise InternalError("spectral assumption violated")
    monkeypatch.setattr(R, "build_engine", boom)
    code, _, err = run(capsys, "orbits", "--config", str(CONFIGS / "pgl2.yaml"))
    assert code == 3 and "internal consistency" in err


def test_dotted_edges_are_rendered(tmp_path, capsys):
    p = cfg(tmp_path, "type: A1\ngrading: [1]\ndotted_edges:\n  - [o0^e, o0^1, mirror]\n")
    code, out, _ = run(capsys, "hasse", "--config", p, "--format", "dot")
    assert code == 0 and 'style=dotted' in out and 'label="mirror"' in out


def test_parse_config_defaults():
    c = R.parse_config("type: g2\ngrading: [1, 1]\n")
    assert c.type == "G2" and c.search_height == 3 and c.search_depth == 2
    with pytest.raises(ConfigError):
        R.parse_config("grading: [1]\n")


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "strataforge", "orbits", "--config",
                          str(CONFIGS / "pgl2.yaml"), "--format", "ascii"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "o1^e" in res.stdout
