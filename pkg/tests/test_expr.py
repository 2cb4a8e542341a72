import json
import random

from hypothesis import given, settings

from ktcube import complex as cx
from ktcube import expr as ex
from ktcube.homology import homology
from ktcube.manifest import from_manifest, to_manifest
from strategies import seeds


@settings(max_examples=25)
@given(seeds)
def test_chain_engine_matches_explicit(seed):
    e = ex.random_expression(random.Random(seed))
    rep = ex.cross_validate(e)
    assert rep.explicit is not None, rep.skipped
    assert rep.ok, (rep.chain, rep.explicit)


@settings(max_examples=25)
@given(seeds)
def test_size_estimate_bounds_explicit_size(seed):
    e = ex.random_expression(random.Random(seed))
    ev = ex.ExplicitEval()
    assert ev(e).size() <= ev.size_estimate(e)


@settings(max_examples=20)
@given(seeds)
def test_manifest_round_trip(seed):
    e = ex.random_expression(random.Random(seed))
    d = json.loads(json.dumps(to_manifest({"root": e}, {"seed": seed})))
    back = from_manifest(d)["root"]
    a, b = ex.ExplicitEval()(e), ex.ExplicitEval()(back)
    assert a.counts() == b.counts()
    assert homology(a) == homology(b)
    assert to_manifest({"root": back}, {"seed": seed}) == d


def test_wedge_and_product():
    s = ex.Atom(cx.make_circle(4), "S")
    pt = ex.Atom(cx.make_point())
    wedge = ex.Glue(pt, s, s, ex.BaseMap(pt, s), ex.BaseMap(pt, s), "wedge")
    assert ex.evaluate(wedge).homology().betti() == [1, 2]
    torus = ex.Product(s, s)
    assert ex.evaluate(torus).homology() == homology(ex.ExplicitEval()(torus))


def test_cylinder_on_a_loop():
    sq = ex.Atom(cx.make_square(), "sq")
    s = ex.Atom(cx.make_circle(4), "S")
    cyl = ex.Cylinder(ex.LoopMap(s, sq, "boundary"), "cyl")
    assert ex.evaluate(cyl).homology().is_acyclic()
    assert ex.cross_validate(cyl).ok


def test_cross_validate_skips_over_budget():
    s = ex.Atom(cx.make_circle(6), "S")
    big = ex.Product(ex.Product(s, s), ex.Product(s, s))
    rep = ex.cross_validate(big, budget=100)
    assert rep.explicit is None and rep.skipped and rep.ok
    assert rep.chain.betti() == [1, 4, 6, 4, 1]
