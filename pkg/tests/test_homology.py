import random

import pytest
from hypothesis import given, strategies as st

from ktcube import complex as cx
from ktcube.chains import tensor_complex
from ktcube.expr import klein_bottle, projective_plane
from ktcube.homology import (Group, HomologyResult, check_d2, boundary_matrices, homology,
                             kunneth, euler_characteristic)
from ktcube.io import parse_scx
from oracle import oracle_homology
from strategies import algebraic_complex, random_complex, seeds

H = HomologyResult.from_list


@pytest.mark.parametrize("name, expected", [
    ("point.scx", H([1])),
    ("two_points.scx", H([2])),
    ("edge.scx", H([1])),
    ("triangle.scx", H([1, 1])),
    ("disk.scx", H([1])),
    ("sphere.scx", H([1, 0, 1])),
    ("rp2.scx", H([1, (0, [2])])),
])
def test_corpus_homology(corpus, name, expected):
    X, _ = parse_scx(f"{corpus}/{name}")
    assert homology(X) == expected
    assert oracle_homology(X) == expected


def test_surfaces_against_oracle():
    for c, want in ((projective_plane(), H([1, (0, [2])])), (klein_bottle(), H([1, (1, [2])]))):
        assert homology(c) == want == oracle_homology(c)


def test_group_printing():
    assert str(H([1, (1, [2]), 0])) == "(Z, Z + Z/2)"
    assert str(Group()) == "0"
    assert H([1, 0, 0]) == H([1])
    assert H([1]).is_acyclic() and not H([2]).is_acyclic()


@given(seeds)
def test_d_squared_zero(seed):
    rng = random.Random(seed)
    c = cx.product(random_complex(rng), random_complex(rng))
    assert check_d2(boundary_matrices(c))


@given(seeds)
def test_cubical_against_oracle(seed):
    c = random_complex(random.Random(seed))
    assert homology(c) == oracle_homology(c)


@given(seeds)
def test_algebraic_complexes(seed):
    c, want = algebraic_complex(random.Random(seed))
    assert c.check_d2()
    assert c.homology() == want


@given(seeds)
def test_kunneth_on_tensor_products(seed):
    rng = random.Random(seed)
    (a, _), (b, _) = algebraic_complex(rng, top=2), algebraic_complex(rng, top=2)
    t, _ = tensor_complex(a, b)
    assert t.check_d2()
    assert t.homology() == kunneth(a.homology(), b.homology())


def test_kunneth_tor_term():
    # RP2 x RP2 has H_3 = Tor(Z/2, Z/2) = Z/2
    rp = projective_plane()
    h = homology(cx.product(rp, rp))
    assert h == kunneth(homology(rp), homology(rp))
    assert h[3] == Group(0, (2,))


@given(st.lists(st.integers(0, 3), min_size=1, max_size=4))
def test_euler_from_betti(bettis):
    assert euler_characteristic(H(bettis)) == sum((-1) ** n * b for n, b in enumerate(bettis))
