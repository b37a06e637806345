from __future__ import annotations

import json
import subprocess
import sys

import pytest

from flipdist.cli import run


def cli(*argv: str) -> tuple[int, str, str]:
    return run(list(argv))


def ok(*argv: str) -> dict:
    code, body, err = cli(*argv)
    assert code == 0, err
    return json.loads(body)


def test_distance_vertex_fig7():
    out = ok("distance", "--fixture", "fig7", "--x", "bottom", "--y", "top", "--mode", "vertex")
    assert out == {"distance": 4, "method": "monotone", "mode": "vertex"}


def test_distance_cycle_modes_fig3():
    args = ("distance", "--fixture", "fig3", "--x", "x", "--y", "y")
    assert ok(*args, "--mode", "cycle")["distance"] == 2
    assert ok(*args, "--mode", "cycle-restricted")["distance"] == 4


def test_sequence_then_check(tmp_path):
    seq = tmp_path / "seq.json"
    code, _, err = cli("sequence", "--fixture", "fig7", "--x", "bottom", "--y", "top", "--out", str(seq))
    assert code == 0, err
    assert len(json.loads(seq.read_text())["steps"]) == 4
    out = ok("sequence", "--fixture", "fig7", "--x", "bottom", "--y", "top", "--check", str(seq))
    assert out == {"length": 4, "monotone": True, "valid": True}


def test_sequence_check_rejects_wrong_sequence(tmp_path):
    seq = tmp_path / "seq.json"
    cli("sequence", "--fixture", "fig7", "--x", "bottom", "--y", "z0110", "--out", str(seq))
    out = ok("sequence", "--fixture", "fig7", "--x", "bottom", "--y", "top", "--check", str(seq))
    assert out["valid"] is False


def test_sequence_text_format():
    code, body, _ = cli("sequence", "--fixture", "fig7", "--x", "bottom", "--y", "top", "--format", "text")
    assert code == 0
    assert [line.split()[0] for line in body.splitlines()] == ["e", "d", "f", "b"]


def test_flipgraph_fig2_dot():
    code, body, _ = cli("flipgraph", "--fixture", "fig2", "--x", "left", "--mode", "cycle", "--format", "dot")
    assert code == 0
    assert body.startswith("graph ")
    assert body.count("[label=") == 6
    assert body.count(" -- ") == 13


def test_lattice_fig7():
    out = ok("lattice", "--fixture", "fig7", "--x", "bottom")
    assert len(out["elements"]) == 6
    assert sorted(tuple(e["z"]) for e in out["elements"])[0] == (0, 0, 0, 0)


def test_lattice_cap_exit_code():
    code, body, err = cli("lattice", "--fixture", "fig7", "--x", "bottom", "--cap", "3")
    assert code == 3 and body == "" and "cap" in err


def test_adjacent_fig6():
    assert ok("adjacent", "--fixture", "fig6", "--a", "a", "--b", "b") == {"adjacent": True}
    out = ok("adjacent", "--fixture", "fig6", "--a", "a", "--b", "b", "--details")
    assert out["single_cycle"] is True and out["plus"]["status"] == "unique"


def test_validate_fig3():
    for name in ("x", "y"):
        assert ok("validate", "--fixture", "fig3", "--x", name)["alpha_orientation"] is True
    assert ok("validate", "--fixture", "fig7", "--x", "bottom", "--y", "top")["same_c"] is True


def test_reduce_hamiltonicity_k4():
    out = ok("reduce", "--from", "hamiltonicity", "--fixture", "k4ham")
    assert len(out["graph"]["vertices"]) == 16


def test_reduce_jump_number_from_file(tmp_path):
    poset = ok("gen", "--random-poset", "5", "0.4", "3", "--height", "2")["poset"]
    path = tmp_path / "p.json"
    path.write_text(json.dumps(poset))
    out = ok("reduce", "--from", "jump-number", "--input", str(path))
    assert "top" in out["graph"]["vertices"]


def test_oracle_witness():
    out = ok("oracle", "--fixture", "fig3", "--x", "x", "--y", "y", "--mode", "cycle")
    assert out["distance"] == len(out["witness"]["steps"]) == 2


def test_oracle_depth_limit():
    out = ok("oracle", "--fixture", "fig3", "--x", "x", "--y", "y", "--mode", "cycle-restricted", "--max-depth", "2")
    assert out["distance"] is None and out["depth_limited"] is True


def test_oracle_state_cap(monkeypatch):
    monkeypatch.setenv("FLIPDIST_CAPS", "states=2")
    code, _, err = cli("oracle", "--fixture", "fig3", "--x", "x", "--y", "y", "--mode", "cycle-restricted")
    assert code == 3, err


@pytest.mark.parametrize(
    "argv",
    [
        ("distance", "--fixture", "fig7", "--x", "bottom", "--y", "nope", "--mode", "vertex"),
        ("distance", "--fixture", "fig7", "--x", "bottom", "--y", "top", "--mode", "sideways"),
        ("distance", "--fixture", "fig7", "--x", "bottom", "--y", "top", "--mode", "cut-k"),
        ("gen", "--grid", "3by3"),
        ("adjacent", "--a", "a", "--b", "b"),
    ],
)
def test_bad_input_exit_code(argv):
    code, body, err = cli(*argv)
    assert code == 2 and body == "" and err.startswith("flipdist:")


def test_malformed_json(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = cli("validate", "--fixture", "fig7", "--x", str(bad))
    assert code == 2 and "malformed" in err


def test_gen_fixture_byte_stable():
    first = cli("gen", "--fixture", "fig7")[1]
    assert first == cli("gen", "--fixture", "fig7")[1]
    assert json.loads(first)["fixture"] == "fig7"


def test_gen_grid_roundtrip(tmp_path):
    path = tmp_path / "grid.json"
    code, _, _ = cli("gen", "--grid", "3x4", "--out", str(path))
    assert code == 0
    d = json.loads(path.read_text())
    orient = tmp_path / "o.json"
    orient.write_text(json.dumps({"graph": d["graph"], "tails": d["orientations"]["min"]}))
    out = ok("validate", "--x", str(orient))
    assert out["acyclic"] is True and out["vertices"] == 12


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "flipdist.cli", "distance", "--fixture", "fig7", "--x", "bottom", "--y", "top", "--mode", "vertex"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["distance"] == 4
