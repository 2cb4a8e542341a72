"""Random inputs for the property tests, with homology known by construction."""
import random

from hypothesis import strategies as st

from ktcube import complex as cx
from ktcube.chains import ChainComplex
from ktcube.homology import Group, HomologyResult
from ktcube.snf import normalize_divisors

TORSION = (1, 1, 2, 3, 4, 6)


def _unimodular(n, rng, steps):
    """A random unimodular matrix and its inverse, built from elementary moves."""
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [row[:] for row in U]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        k = rng.choice((-2, -1, 1, 2))
        # U <- E U with E = I + k e_ij ; V <- V E^-1
        for c in range(n):
            U[i][c] += k * U[j][c]
        for r in range(n):
            V[r][j] -= k * V[r][i]
    return U, V


def _mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def algebraic_complex(rng: random.Random, top=3, max_pieces=6):
    """A free chain complex that is a random change of basis of a sum of
    elementary pieces Z (free class) and Z -k-> Z (torsion Z/k).

    Returns (complex, expected homology)."""
    ranks = [0] * (top + 1)
    bettis, tors = [0] * (top + 1), [[] for _ in range(top + 1)]
    entries = []          # (n, row, col, k): d_n(col) = k * row
    for _ in range(rng.randint(1, max_pieces)):
        n = rng.randint(0, top)
        if n < top and rng.random() < 0.6:
            k = rng.choice(TORSION)
            entries.append((n + 1, ranks[n], ranks[n + 1], k))
            ranks[n] += 1
            ranks[n + 1] += 1
            if k > 1:
                tors[n].append(k)
        else:
            ranks[n] += 1
            bettis[n] += 1
    dense = [None] + [[[0] * ranks[n] for _ in range(ranks[n - 1])] for n in range(1, top + 1)]
    for n, r, c, k in entries:
        dense[n][r][c] = k
    base = [_unimodular(r, rng, 3 * r) if r else ([], []) for r in ranks]
    d = [[{} for _ in range(ranks[0])]]
    for n in range(1, top + 1):
        if not ranks[n]:
            d.append([])
            continue
        m = dense[n]
        if ranks[n - 1]:
            m = _mul(_mul(base[n - 1][0], m), base[n][1])
        d.append([{i: m[i][j] for i in range(ranks[n - 1]) if m[i][j]} for j in range(ranks[n])])
    expected = HomologyResult(tuple(Group(bettis[n], tuple(normalize_divisors(tors[n]))) for n in range(top + 1)))
    return ChainComplex(ranks, d, name="alg"), expected


def random_complex(rng: random.Random):
    """A small cubical complex from a fixed pool."""
    from ktcube.expr import klein_bottle, projective_plane
    pool = [lambda: cx.make_point(), lambda: cx.make_points(rng.randint(2, 3)),
            lambda: cx.make_path(rng.randint(1, 3)), lambda: cx.make_circle(rng.randint(3, 5)),
            cx.make_square, projective_plane, klein_bottle,
            lambda: cx.grid_complex([(0, 0), (1, 0), (2, 0), (0, 1), (2, 1), (0, 2), (1, 2), (2, 2)])]
    return rng.choice(pool)()


seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
