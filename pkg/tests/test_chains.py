import random

import pytest
from hypothesis import given

from ktcube import chains as ch
from ktcube import complex as cx
from ktcube.homology import homology, kunneth
from strategies import algebraic_complex, random_complex, seeds


@given(seeds)
def test_reduction_axioms(seed):
    c, want = algebraic_complex(random.Random(seed))
    r = ch.reduce(c)
    assert all(r.check().values()), r.check()
    assert r.small.homology() == want
    assert r.f.is_chain_map() and r.g.is_chain_map()


@given(seeds)
def test_reduction_of_cellular_chains(seed):
    c = random_complex(random.Random(seed))
    r = ch.reduce(ch.chains_of(c))
    assert r.ok()
    assert r.small.homology() == homology(c)
    assert r.small.size() <= r.big.size()


@given(seeds)
def test_protected_cells_survive(seed):
    c = ch.chains_of(random_complex(random.Random(seed)))
    r = ch.reduce(c, protect={(0, 0)})
    assert r.ok()
    assert r.f.image(0, 0)


@given(seeds)
def test_composed_reductions(seed):
    rng = random.Random(seed)
    c, _ = algebraic_complex(rng)
    r1 = ch.reduce(c, protect={(n, 0) for n in range(len(c.ranks)) if c.rank(n)})
    r2 = ch.reduce(r1.small)
    assert ch.compose_reductions(r1, r2).ok()


@given(seeds)
def test_tensor_maps_are_chain_maps(seed):
    rng = random.Random(seed)
    (a, _), (b, _) = algebraic_complex(rng, top=2), algebraic_complex(rng, top=2)
    ra, rb = ch.reduce(a), ch.reduce(b)
    big, bi = ch.tensor_complex(a, b)
    small, si = ch.tensor_complex(ra.small, rb.small)
    f = ch.tensor_maps(ra.f, rb.f, bi, si, big, small)
    assert f.is_chain_map()
    assert small.homology() == big.homology() == kunneth(a.homology(), b.homology())


def test_tensor_model_ports():
    s = cx.make_circle(4)
    m = ch.model_from(s, {"loop": ch.map_from_cubical(cx.identity_map(s), ch.chains_of(s), ch.chains_of(s))})
    t = ch.tensor(m, m)
    assert t.homology().betti() == [1, 2, 1]
    assert all(t.check_ports().values())
    assert set(t.ports) == {"left.loop", "right.loop"}


def test_mapping_cone_of_identity_is_acyclic_and_reduced_homology():
    c = ch.chains_of(cx.make_circle(5))
    cone, inc = ch.mapping_cone(ch.identity(c))
    assert cone.check_d2() and inc.is_chain_map()
    assert all(g.trivial for g in cone.homology().groups)


def test_cone_of_gluing_two_disks_is_a_sphere():
    sq = cx.make_square()
    s = cx.make_circle(4)
    f = ch.map_from_cubical(cx.loop_map(sq, sq.loops["boundary"], s), ch.chains_of(s), ch.chains_of(sq))
    disk = ch.model_from(sq, reduce_it=False)
    circle = ch.model_from(s, reduce_it=False)
    m = ch.cone_of_gluing(circle, disk, disk, f, f)
    assert m.homology().betti() == [1, 0, 1]


def test_cylinder_model():
    sq = cx.make_square()
    s = cx.make_circle(4)
    f = ch.map_from_cubical(cx.loop_map(sq, sq.loops["boundary"], s), ch.chains_of(s), ch.chains_of(sq))
    m = ch.cylinder_model(f)
    assert m.homology().is_acyclic()
    assert all(m.check_ports().values())
    with pytest.raises(ValueError):
        ch.cylinder_model(ch.ChainMap(f.src, f.dst, [[{0: 1}] * 4, [{0: 1}] * 4]))


def test_strict_pushout_matches_cubical_pushout():
    a, b = cx.make_square(), cx.make_square()
    s = cx.make_circle(4)
    fa, fb = cx.loop_map(a, a.loops["boundary"], s), cx.loop_map(b, b.loops["boundary"], s)
    cs, ca, cb = ch.chains_of(s), ch.chains_of(a), ch.chains_of(b)
    out, il, ir = ch.pushout_chains(cs, ca, cb, ch.map_from_cubical(fa, cs, ca), ch.map_from_cubical(fb, cs, cb))
    assert out.check_d2() and il.is_chain_map() and ir.is_chain_map()
    res = cx.pushout(a, b, s, fa, fb)
    assert out.ranks == res.complex.counts()
    assert out.homology() == homology(res.complex)
    g = ch.induced_from_pushout(out, il, ir, ch.zero_map(ca, ch.point_complex()),
                                ch.zero_map(cb, ch.point_complex()), ch.point_complex())
    assert g.is_zero()


def test_strict_pushout_rejects_non_monomial():
    c = ch.chains_of(cx.make_point())
    two = ch.chains_of(cx.make_points(2))
    bad = ch.ChainMap(c, two, [[{0: 1, 1: 1}]])
    with pytest.raises(ValueError):
        ch.pushout_chains(c, two, two, bad, bad)
