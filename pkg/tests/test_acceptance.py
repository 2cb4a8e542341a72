"""Acceptance criteria 1-10, one test each.  Every test records a single
pass/fail line, printed together at the end of the session."""
import glob
import json
import random
import subprocess
import sys
import time

import pytest

from ktcube import atoms
from ktcube import chains as ch
from ktcube import complex as cx
from ktcube import links as lk
from ktcube.expr import ChainEval, ExplicitEval, cross_validate, random_expression
from ktcube.homology import homology, kunneth
from strategies import algebraic_complex, random_complex

RESULTS = {}


def record(n, ok, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    return ok


def cli(out, *args, timeout=1800):
    cmd = [sys.executable, "-m", "ktcube.cli", *args, "--out", str(out)]
    t = time.perf_counter()
    proc = subprocess.run(cmd, capture_output=True, text=True, timeout=timeout)
    report = json.loads((out / "report.json").read_text())
    return proc.returncode, report, time.perf_counter() - t


def corpus_files(corpus):
    files = sorted(glob.glob(f"{corpus}/*.scx"))
    assert len(files) == 8
    return files


@pytest.fixture(scope="module")
def real_chain_run(tmp_path_factory, corpus):
    out = tmp_path_factory.mktemp("kt-real-chain")
    return out, cli(out, "kt", *corpus_files(corpus), "--kit", "real", "--mode", "chain", "--trim-last")


# ---------------------------------------------------------------------------

def test_criterion_01_x2_certification():
    atoms._x2_from_search.cache_clear()
    t = time.perf_counter()
    x2 = atoms.build_X2()
    checks = atoms.certify_X2(x2)
    dt = time.perf_counter() - t
    names = {c.name for c in checks}
    wanted = {"X2 gromov", "X2 brady-meier", "X2 acyclic"} | {f"X2 geodesic {g}" for g in "abcdef"}
    bad = [c.name for c in checks if not c.ok]
    ok = wanted <= names and not bad and dt < 10
    assert record(1, ok, f"X2 {x2.counts()} gromov, brady-meier, 6 geodesics, acyclic; "
                         f"failed {bad}; {dt:.1f}s (limit 10s)")


def test_criterion_02_w_certification():
    atoms.build_W.cache_clear()
    t = time.perf_counter()
    w = atoms.build_W()
    checks = atoms.certify_W(w)
    h = homology(w)
    dt = time.perf_counter() - t
    bad = [c.name for c in checks if not c.ok]
    ok = not bad and h[1].betti == 3 and not h[1].torsion and h[2].trivial and dt < 5
    assert record(2, ok, f"W gromov + 4 geodesics; H = {h}; failed {bad}; {dt:.1f}s (limit 5s)")


def test_criterion_03_piece_homology_table(real):
    t = time.perf_counter()
    checks, ev = atoms.certify_pieces(real, convexity=True)
    dt = time.perf_counter() - t
    table = {nm: str(homology(ev(real.nodes[nm]))) for nm in atoms.EXPECTED_PIECES}
    exact = all(homology(ev(real.nodes[nm])) == h for nm, h in atoms.EXPECTED_PIECES.items())
    bad = [c.name for c in checks if not c.ok]
    x3 = ev(real.X3).size()
    ok = exact and not bad and dt < 300
    assert record(3, ok, f"{table}; X3 {x3} cells; other failed checks {bad}; {dt:.1f}s (limit 300s)")


def test_criterion_04_tower(real):
    t = time.perf_counter()
    xs, _ = atoms.tower_nodes(real, 5)
    cev = ChainEval()
    h4, h5 = cev(xs[4]).homology(), cev(xs[5]).homology()
    h3c = cev(xs[3]).homology()
    h3e = homology(ExplicitEval()(xs[3]))
    dt = time.perf_counter() - t
    ok = h4.is_acyclic() and h5.is_acyclic() and h3c == h3e and h3e.is_acyclic() and dt < 120
    assert record(4, ok, f"H(X4) = {h4}, H(X5) = {h5} (chain); X3 chain {h3c} = explicit {h3e}; "
                         f"{dt:.1f}s (limit 120s)")


def _kt_summary(report):
    per, bad = {}, []
    for name, runs in report["data"].items():
        for mode, run in runs.items():
            per[f"{name}:{mode}"] = (run["complete"], run["H(X)"], run["H(L(X))"])
    bad = [f"{r['section']} {r['item']}" for r in report["rows"] if r["verdict"] == "FAIL"]
    return per, bad


def test_criterion_05_homology_of_LX(tmp_path, corpus, real_chain_run):
    out_c, (code_c, rep_c, dt_c) = real_chain_run
    code_e, rep_e, dt_e = cli(tmp_path, "kt", *corpus_files(corpus), "--kit", "toy", "--mode", "explicit",
                              "--trim-last", "--cell-budget", str(10 ** 6))
    per_c, bad_c = _kt_summary(rep_c)
    per_e, bad_e = _kt_summary(rep_e)
    chain_ok = code_c == 0 and not bad_c and all(c and hx == hl for c, hx, hl in per_c.values())
    explicit_ok = code_e == 0 and not bad_e and all(c and hx == hl for c, hx, hl in per_e.values())
    rp2 = per_c.get("rp2.scx:chain")
    acyclic = sum(1 for r in rep_c["rows"] if r["item"].endswith("M acyclic") and r["verdict"] == "PASS")
    incomplete = sorted(k.split(".")[0] for k, (c, _, _) in per_e.items() if not c)
    edge = rep_e["data"].get("edge.scx", {}).get("explicit", {}).get("failure", "")
    dt = dt_c + dt_e
    ok = chain_ok and explicit_ok and dt < 1800
    assert record(5, ok, f"real kit chain: {'all H(L(X)) = H(X)' if chain_ok else bad_c[:3]}, "
                         f"RP2 -> {rp2[2] if rp2 else None}, {acyclic} M(Y) acyclic; "
                         f"toy kit explicit (budget 1e6): incomplete {incomplete}, "
                         f"edge: {edge or 'complete'}; {dt:.0f}s (limit 1800s)")


def test_criterion_06_oracle_equivalence():
    rng = random.Random(20260601)
    t = time.perf_counter()
    bad, skipped, biggest, rejected, done = [], 0, 0, 0, 0
    while done < 200:
        e = random_expression(rng, max_cells=500)
        if ExplicitEval().size_estimate(e) > 500 and ExplicitEval()(e).size() > 500:
            rejected += 1
            continue
        r = cross_validate(e, budget=10 ** 5)
        done += 1
        if r.explicit is None:
            skipped += 1
            continue
        biggest = max(biggest, r.cells)
        if not r.ok:
            bad.append(done)
    ok = not bad and not skipped
    assert record(6, ok, f"200 random expressions of at most 500 cells ({rejected} larger draws discarded): "
                         f"{len(bad)} mismatches, {skipped} skipped, largest {biggest} cells; "
                         f"{time.perf_counter() - t:.1f}s")


def test_criterion_07_reduction_axioms():
    rng = random.Random(7)
    failures, sizes = [], 0
    for k in range(500):
        if k % 2:
            c, _ = algebraic_complex(rng, top=rng.randint(1, 4), max_pieces=8)
        else:
            c = ch.chains_of(cx.product(random_complex(rng), random_complex(rng)) if k % 4 == 0
                             else random_complex(rng))
        r = ch.reduce(c)
        sizes += c.size()
        res = r.check()
        if len(res) != 5 or not all(res.values()):
            failures.append((k, res))
    assert record(7, not failures, f"500 reductions ({sizes} generators in total): "
                                   f"fg = id, id - gf = dh + hd, fh = 0, hg = 0, hh = 0; "
                                   f"{len(failures)} failures")


def test_criterion_08_kunneth():
    rng = random.Random(8)
    bad, torsion_pairs = [], 0
    for k in range(100):
        a, b = random_complex(rng), random_complex(rng)
        ha, hb = homology(a), homology(b)
        if any(g.torsion for g in ha.groups) and any(g.torsion for g in hb.groups):
            torsion_pairs += 1
        if homology(cx.product(a, b)) != kunneth(ha, hb):
            bad.append(k)
    assert record(8, not bad, f"100 random pairs ({torsion_pairs} with torsion in both factors): "
                              f"{len(bad)} mismatches")


def test_criterion_09_curvature_fixtures():
    three = cx.from_squares([("c", "p", "q", "pq"), ("c", "q", "r", "qr"), ("c", "r", "p", "rp")])
    g3 = lk.check_gromov(three)
    w = g3.witnesses[0] if g3.witnesses else {}
    three_ok = not g3.ok and w.get("kind") == "short-cycle" and len(w.get("clique", [])) == 3 \
        and lk.witness_holds(three, w)
    torus = cx.product(cx.make_circle(4), cx.make_circle(4))
    grid = cx.grid_complex([(0, 0), (1, 0), (0, 1), (1, 1)])
    sq = cx.make_square()
    results = {
        "3 squares FAIL with 3-cycle": three_ok,
        "flat torus PASS": lk.check_gromov(torus).ok,
        "2x2 grid PASS": lk.check_gromov(grid).ok,
        "square boundary not geodesic": not lk.check_closed_geodesic(sq, sq.loops["boundary"]).ok,
        "torus equator geodesic": lk.check_closed_geodesic(torus, torus.loops["left.loop"]).ok,
    }
    bad = [k for k, v in results.items() if not v]
    assert record(9, not bad, f"{len(results) - len(bad)}/{len(results)} fixtures behave; wrong: {bad}")


def test_criterion_10_ledger_and_determinism(tmp_path, corpus, real_chain_run):
    out1, (code1, rep1, _) = real_chain_run
    out2 = tmp_path / "second"
    code2, rep2, _ = cli(out2, "kt", *corpus_files(corpus), "--kit", "real", "--mode", "chain", "--trim-last")
    ledgers, bad = {}, []
    for name, runs in rep1["data"].items():
        led = runs["chain"]["ledger"]
        m = led["m"]
        want = 10 * m - 3 if m else 0
        ledgers[name] = f"{led['tracked']}/{led['stated_bound']}"
        if led["tracked"] != want or (m and led["flag"] != f"tracked {want} > stated bound {10 * m - 7}"):
            bad.append(name)
    files = sorted(p.name for p in out1.iterdir() if p.name != "timings.json")
    differ = [f for f in files if (out1 / f).read_bytes() != (out2 / f).read_bytes()]
    ok = not bad and not differ and code1 == code2 == 0
    assert record(10, ok, f"tracked/stated per input {ledgers}; wrong {bad}; "
                          f"{len(files)} report files compared, differing {differ}")
