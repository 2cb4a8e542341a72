import json

import pytest

from ktcube.cli import main


def run(tmp_path, name, *argv):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    rows = (out / "report.tsv").read_text().splitlines()[1:]
    return code, out, [r.split("\t") for r in rows]


def test_snf(tmp_path, capsys):
    m = tmp_path / "m.txt"
    m.write_text("2 4 4\n-6 6 12\n10 -4 -16\n")
    code, out, rows = run(tmp_path, "snf", "snf", str(m))
    assert code == 0
    assert "2 6 12" in capsys.readouterr().out
    assert ["snf", "U A V = D certificate", "PASS", ""] in rows


def test_homology_of_scx(tmp_path, corpus):
    code, out, rows = run(tmp_path, "h", "homology", f"{corpus}/rp2.scx")
    assert code == 0
    assert any("Z/2" in r[3] for r in rows)


def test_missing_input_fails(tmp_path):
    code, out, rows = run(tmp_path, "x", "homology", str(tmp_path / "nope.scx"))
    assert code == 1
    assert rows[0][2] == "FAIL"


def test_wrong_json_is_reported(tmp_path):
    p = tmp_path / "x.ccx"
    p.write_text('{"format": "something else"}')
    code, out, rows = run(tmp_path, "w", "check", str(p))
    assert code == 1 and "not a .ccx" in rows[0][3]


def test_bad_flags(tmp_path):
    assert main(["tower", "1", "--out", str(tmp_path / "t")]) == 2
    assert main(["snf", "x", "--cell-budget", "0", "--out", str(tmp_path / "t")]) == 2


def test_check_on_a_ccx(tmp_path):
    from ktcube.complex import product, make_circle
    from ktcube.io import write_ccx
    p = tmp_path / "torus.ccx"
    write_ccx(product(make_circle(4), make_circle(4)), p)
    code, out, rows = run(tmp_path, "c", "check", str(p))
    assert code == 0
    assert any(r[2] == "PASS" for r in rows)
    assert (out / "links.png").exists()


def test_tower_toy_and_cross_validate(tmp_path):
    code, out, rows = run(tmp_path, "t", "tower", "4", "--kit", "toy", "--mode", "both")
    assert code == 0
    assert (out / "tower.png").exists() and (out / "manifest.json").exists()
    names = {r[1] for r in rows}
    assert {"X4 acyclic (chain)", "X4 acyclic (explicit)", "X4 cell count formula", "X4 chain = explicit"} <= names
    code, _, rows = run(tmp_path, "cv", "cross-validate", str(out / "manifest.json"))
    assert code == 0 and all(r[2] == "PASS" for r in rows)


def test_kt_toy_chain_is_deterministic(tmp_path, corpus):
    args = ["kt", f"{corpus}/edge.scx", f"{corpus}/triangle.scx", "--kit", "toy", "--trim-last"]
    code1, out1, rows = run(tmp_path, "a", *args)
    code2, out2, _ = run(tmp_path, "b", *args, "--parallelism", "2")
    assert code1 == code2 == 0
    for f in sorted(p.name for p in out1.iterdir() if p.name != "timings.json"):
        assert (out1 / f).read_bytes() == (out2 / f).read_bytes(), f
    data = json.loads((out1 / "report.json").read_text())
    assert data["ok"] and data["config"]["inputs"] == ["edge.scx", "triangle.scx"]
    assert (out1 / "edge-chain-ledger.png").exists() and (out1 / "homology.png").exists()


@pytest.mark.slow
def test_atoms_writes_certified_artifacts(tmp_path):
    code, out, rows = run(tmp_path, "at", "atoms")
    assert code == 0, [r for r in rows if r[2] == "FAIL"]
    for f in ("X2.ccx", "W.ccx", "x2.disk", "manifest.json", "disks.png", "pieces.png"):
        assert (out / f).exists(), f
    code, _, rows = run(tmp_path, "chk", "check", str(out / "X2.ccx"))
    assert code == 0
