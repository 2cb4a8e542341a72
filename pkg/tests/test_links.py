import pytest

from ktcube import complex as cx
from ktcube import links as lk


def three_squares():
    """Three squares meeting around one vertex: the link there is a 3-cycle."""
    return cx.from_squares([("c", "p", "q", "pq"), ("c", "q", "r", "qr"), ("c", "r", "p", "rp")])


def test_three_squares_fails_with_a_three_cycle():
    c = three_squares()
    rep = lk.check_gromov(c)
    assert not rep.ok
    w = rep.witnesses[0]
    assert w["kind"] == "short-cycle" and len(w["clique"]) == 3
    assert lk.witness_holds(c, w)


@pytest.mark.parametrize("make", [
    lambda: cx.product(cx.make_circle(4), cx.make_circle(4)),
    lambda: cx.grid_complex([(0, 0), (1, 0), (0, 1), (1, 1)]),
    cx.make_square,
])
def test_flag_links_pass(make):
    assert lk.check_gromov(make()).ok


def test_two_squares_on_one_edge_have_a_double_edge_free_link():
    c = cx.from_squares([(0, 1, 2, 3), (0, 1, 4, 5)])
    assert lk.check_gromov(c).ok
    lk0 = lk.vertex_link(c, 0)
    assert lk0.graph().number_of_edges() == 2


def test_square_boundary_is_not_a_geodesic():
    sq = cx.make_square()
    rep = lk.check_closed_geodesic(sq, sq.loops["boundary"])
    assert not rep.ok
    assert all(w["distance"] == 1 for w in rep.witnesses)
    assert len(rep.witnesses) == 4


def test_torus_equator_is_a_geodesic():
    t = cx.product(cx.make_circle(4), cx.make_circle(4))
    assert lk.check_closed_geodesic(t, t.loops["left.loop"]).ok
    assert lk.check_closed_geodesic(t, t.loops["right.loop"]).ok


def test_circle_loop_is_a_geodesic():
    s = cx.make_circle(5)
    assert lk.check_closed_geodesic(s, s.loops["loop"]).ok


def test_open_path_is_rejected_as_loop():
    s = cx.make_circle(4)
    with pytest.raises(ValueError):
        lk.check_closed_geodesic(s, cx.LoopMarking(((0, 0), (1, 0)), 0))


def test_local_convexity():
    t = cx.product(cx.make_circle(4), cx.make_circle(4))
    s = cx.make_circle(4)
    equator = cx.loop_map(t, t.loops["left.loop"], s)
    assert lk.check_locally_convex(equator).ok
    sq = cx.make_square()
    corner = cx.loop_map(sq, sq.loops["boundary"], s)
    rep = lk.check_locally_convex(corner)
    assert not rep.ok and rep.witnesses[0]["kind"] == "not-full"


def test_brady_meier():
    # a one-vertex torus has a 4-cycle link: connected, no cut vertex
    s = cx.make_circle(3)
    from ktcube.disks import PresentationData, TesselatedDisk, parse_word, presentation_complex
    pres = PresentationData.parse("ab", ["abAB"])
    disk = TesselatedDisk(frozenset({(0, 0), (1, 0), (0, 1), (1, 1)}), parse_word("abAB"))
    torus = presentation_complex(pres, [disk])
    assert lk.check_gromov(torus).ok
    assert lk.check_brady_meier(torus).ok
    rep = lk.check_brady_meier(s)
    assert not rep.ok


def test_report_json():
    rep = lk.check_gromov(three_squares())
    d = rep.to_json()
    assert d["verdict"] == "FAIL" and d["witnesses"]
