import pytest

from ktcube import disks as D
from ktcube.homology import homology
from ktcube.snf import det


def test_parse_word():
    assert D.parse_word("ab^-1c^2") == (("a", 1), ("b", -1), ("c", 1), ("c", 1))
    assert D.word_str(D.parse_word("aB")) == "aB"
    with pytest.raises(ValueError):
        D.PresentationData.parse("ab", ["abB"])


def test_polygon_counts():
    # self-avoiding lattice polygons up to translation: 1, 2, 7, 28, 124, 588
    assert [len(D.polygons(p)) for p in (4, 6, 8, 10, 12, 14)] == [1, 2, 7, 28, 124, 588]


def test_exponent_matrix_is_unimodular():
    assert abs(det(D.H_PRESENTATION.exponent_matrix())) == 1


def test_presentations_as_stated():
    words = [D.word_str(r) for r in D.H_PRESENTATION.relators]
    assert words == ["abcdef", "aBccFeeD", "aafccbed", "aDDcBBeF", "addcffebb", "aFFcDeBB"]
    # [v,w][x,y]y^-1 with [g,h] = g h g^-1 h^-1, up to rotation
    assert D._cyclic_equal(list(D.K_PRESENTATION.relators[0]), list(D.parse_word("vwVWxyXYY")))


def test_nonagon_disk():
    d = D.NONAGON
    assert d.problems() == []
    assert len(d.word) == 9 and d.perimeter == 18
    assert len(d.squares) == 16


def test_x2_family():
    fam = D.find_x2_disks()
    assert len(fam) == 6
    for disk, rel in zip(fam, D.H_PRESENTATION.relators):
        assert disk.problems() == []
        assert D._cyclic_equal(list(disk.word), list(rel))
        assert disk.perimeter == 2 * len(rel)


def test_disk_json_round_trip(tmp_path):
    fam = D.find_x2_disks()
    p = tmp_path / "x2.disk"
    D.save_disks(p, fam, D.H_PRESENTATION)
    assert D.load_disks(p) == list(fam)


def test_wedge_of_loops():
    w = D.wedge_of_loops("abc")
    assert homology(w).betti() == [1, 3]
    assert sorted(w.loops) == ["a", "b", "c"]


def test_presentation_complex_of_a_torus():
    pres = D.PresentationData.parse("ab", ["abAB"])
    disk = D.TesselatedDisk(frozenset({(0, 0), (1, 0), (0, 1), (1, 1)}), D.parse_word("abAB"))
    t = D.presentation_complex(pres, [disk])
    assert homology(t).betti() == [1, 2, 1]
    rep = D.certify_presentation_complex(t, pres)
    assert rep["gromov"].ok and rep["geodesic a"].ok
