import pytest

from ktcube import atoms
from ktcube.expr import ExplicitEval
from ktcube.homology import euler_characteristic, homology
from oracle import oracle_homology


def test_W_counts_and_homology():
    w = atoms.build_W()
    # one vertex wedge of four 4-edge loops, nonagon of 16 squares subdivided
    assert w.counts() == [60, 126, 64]
    assert homology(w) == atoms.cx_hom([1, 3]) == oracle_homology(w)


def test_W_certificates():
    assert all(c.ok for c in atoms.certify_W(atoms.build_W()))


def test_X2_counts_and_certificates():
    x2 = atoms.build_X2()
    assert x2.counts() == [191, 450, 260]
    assert x2.euler() == 1
    assert oracle_homology(x2).is_acyclic()
    checks = atoms.certify_X2(x2)
    assert [c.name for c in checks if not c.ok] == []
    assert {"X2 gromov", "X2 brady-meier", "X2 acyclic"} <= {c.name for c in checks}


def test_X2_from_disk_file(tmp_path):
    from ktcube.disks import H_PRESENTATION, find_x2_disks, save_disks
    p = tmp_path / "x2.disk"
    save_disks(p, find_x2_disks(), H_PRESENTATION)
    assert atoms.build_X2(str(p)).cells == atoms.build_X2().cells


def test_loop_generates():
    w = atoms.build_W()
    from ktcube import complex as cx
    s = cx.make_circle(4)
    assert atoms.loop_generates(s, s.loops["loop"])
    assert not atoms.loop_generates(w, w.loops["v"])


def test_toy_kit_verifies(toy):
    checks = atoms.verify_kit(toy)
    assert all(c.ok for c in checks), [c for c in checks if not c.ok]


def test_micro_kit_is_rejected(micro):
    assert not all(c.ok for c in atoms.verify_kit(micro))


def test_tower_count_formula_on_toy(toy):
    ev = ExplicitEval()
    xs, inc = atoms.tower_nodes(toy, 4)
    x2, x3, x4 = ev(xs[2]), ev(xs[3]), ev(xs[4])
    assert x4.size() == atoms.tower_count_formula(x2.size(), x3.size())
    assert ev(inc[4]).check() == []
    assert homology(x4).is_acyclic()


def test_tower_chain_matches_explicit_on_toy(toy):
    for n in (3, 4, 5):
        chain = atoms.build_tower(n, toy, "chain")
        assert chain.homology().is_acyclic()
    assert homology(atoms.build_tower(4, toy, "explicit")).is_acyclic()


def test_tower_needs_n_at_least_2(toy):
    with pytest.raises(ValueError):
        atoms.tower_nodes(toy, 1)


def test_real_kit_verifies(real):
    checks = atoms.verify_kit(real)
    assert all(c.ok for c in checks), [c for c in checks if not c.ok]


def test_expected_table_is_consistent():
    for name, h in atoms.EXPECTED_PIECES.items():
        assert euler_characteristic(h) == 1 - h[1].betti
