import pytest

from ktcube import functors as F
from ktcube.homology import homology
from ktcube.io import parse_scx


def load(corpus, name):
    return parse_scx(f"{corpus}/{name}")[0]


def triangle_request(X):
    return [X.full(), X.subcomplex([(0, 1)]), X.subcomplex([(1, 2), (0, 2)])]


def test_plan_of_a_path(corpus):
    X = load(corpus, "path2.scx")
    p = F.make_plan(X)
    assert p.order == [(0, 1), (1, 2)]
    assert p.skeleta[-1] == X.full()
    assert p.families[-1] == {X.full()}
    # every pair is a strict inclusion inside the current skeleton
    for k, pairs in enumerate(p.pairs):
        for a, b in pairs:
            assert a < b <= p.skeleta[k]


def test_boundary_and_connectivity():
    assert F.boundary_of((0, 1)) == frozenset({(0,), (1,)})
    assert F.is_connected(frozenset({(0,), (1,), (0, 1)}))
    assert not F.is_connected(frozenset({(0,), (1,)}))
    assert F.label(frozenset({(0,), (1,), (0, 1)})) == "{01}"


def test_micro_kit_explicit_edge(corpus, micro):
    X = load(corpus, "edge.scx")
    a = F.build_functors(X, micro, "explicit", budget=200_000, requested=[X.full(), X.subcomplex([(0,)])])
    assert a.complete
    assert all(c.ok for c in F.check_naturality(a))
    assert all(c.ok for c in F.check_homology(a, "all"))
    st = a.final
    for Y, L in st.L.items():
        assert L.dim == st.dimL[Y]
    chain = F.build_functors(X, micro, "chain")
    assert chain.backend.homology(chain.final.L[X.full()]) == homology(a.final.L[X.full()])


def test_micro_kit_explicit_runs_out_of_budget(corpus, micro):
    a = F.build_functors(load(corpus, "path2.scx"), micro, "explicit", budget=20_000)
    assert not a.complete and "budget" in a.failure
    checks = F.check_homology(a)
    assert checks[0].name == "construction complete" and not checks[0].ok


def test_naturality_catches_a_mutated_port(corpus, micro):
    X = load(corpus, "triangle.scx")
    a = F.build_functors(X, micro, "chain", requested=triangle_request(X))
    assert all(c.ok for c in F.check_naturality(a))
    st = a.stages[1]
    key = sorted(st.Mp, key=lambda k: (F._key(k[0]), F._key(k[1])))[0]
    st.Mp[key] = -st.Mp[key]
    bad = [c for c in F.check_naturality(a) if not c.ok]
    assert bad and F.label(key[0]) in bad[0].detail


@pytest.mark.parametrize("name, m", [("edge.scx", 1), ("path2.scx", 2), ("triangle.scx", 3)])
def test_dimension_ledger(corpus, micro, name, m):
    X = load(corpus, name)
    full = F.dimension_report(F.build_functors(X, micro, "chain"))
    trim = F.dimension_report(F.build_functors(X, micro, "chain", trim_last=True))
    assert full["m"] == trim["m"] == m
    assert full["tracked"] == 10 * m
    assert trim["tracked"] == 10 * m - 3
    assert trim["matches_increments"] and full["matches_increments"]
    assert trim["stated_bound"] == 10 * m - 7
    assert trim["flag"] == f"tracked {10 * m - 3} > stated bound {10 * m - 7}"


def test_ledger_examples(corpus, micro):
    # one edge: 3 + 2 + 2 = 7; two edges: 10 + 7 = 17
    edge = F.dimension_report(F.build_functors(load(corpus, "edge.scx"), micro, "chain", trim_last=True))
    path = F.dimension_report(F.build_functors(load(corpus, "path2.scx"), micro, "chain", trim_last=True))
    assert (edge["tracked"], path["tracked"]) == (7, 17)
    assert [r["duality"] for r in path["rows"]] == [0, 10, 17]


def test_points_have_no_stages(corpus, toy):
    X = load(corpus, "two_points.scx")
    a = F.build_functors(X, toy, "chain")
    assert a.m == 0 and a.complete
    rep = F.dimension_report(a)
    assert rep["tracked"] == 0 and rep["stated_bound"] == -7


def test_toy_chain_triangle(corpus, toy):
    X = load(corpus, "triangle.scx")
    a = F.build_functors(X, toy, "chain", trim_last=True, requested=triangle_request(X))
    assert all(c.ok for c in F.check_homology(a))
    assert all(c.ok for c in F.check_naturality(a))


def test_unknown_mode(corpus, toy):
    with pytest.raises(ValueError):
        F.build_functors(load(corpus, "edge.scx"), toy, "symbolic")
