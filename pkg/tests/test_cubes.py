from hypothesis import given, strategies as st

from ktcube import cubes


@st.composite
def isos(draw, n=None):
    n = draw(st.integers(0, 4)) if n is None else n
    perm = draw(st.permutations(range(n)))
    flips = draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    return tuple(2 * p + f for p, f in zip(perm, flips))


def test_identity_codes():
    assert cubes.identity(0) == ()
    assert cubes.identity(1) == (0,)
    assert cubes.is_identity(cubes.identity(3))


def test_all_isos_count():
    # signed permutations: 2^n n!
    assert [len(list(cubes.all_isos(n))) for n in range(4)] == [1, 2, 8, 48]


@given(st.data())
def test_group_laws(data):
    n = data.draw(st.integers(0, 4))
    a, b, c = (data.draw(isos(n)) for _ in range(3))
    assert cubes.compose(a, cubes.compose(b, c)) == cubes.compose(cubes.compose(a, b), c)
    assert cubes.compose(a, cubes.invert(a)) == cubes.identity(n)
    assert cubes.compose(cubes.identity(n), a) == a


@given(st.data())
def test_sign_is_a_homomorphism(data):
    n = data.draw(st.integers(0, 4))
    a, b = data.draw(isos(n)), data.draw(isos(n))
    assert cubes.sign(cubes.compose(a, b)) == cubes.sign(a) * cubes.sign(b)


@given(isos(), isos())
def test_direct_sum_blocks(a, b):
    s = cubes.direct_sum(a, b)
    assert len(s) == len(a) + len(b)
    assert cubes.sign(s) == cubes.sign(a) * cubes.sign(b)
