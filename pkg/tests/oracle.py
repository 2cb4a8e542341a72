"""Independent reference computations for the tests: dense integer matrices
handed to sympy's Smith normal form.  Slow, so only for small inputs."""
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from ktcube.homology import Group, HomologyResult, boundary_matrices


def dense(cols, nrows):
    return [[col.get(i, 0) for col in cols] for i in range(nrows)]


def sympy_divisors(rows):
    """Nonzero invariant factors of a dense integer matrix."""
    if not rows or not rows[0]:
        return []
    return [abs(int(d)) for d in invariant_factors(Matrix(rows), domain=ZZ) if d != 0]


def oracle_homology(c) -> HomologyResult:
    mats = boundary_matrices(c)
    sizes = [len(m) for m in mats]
    rank, tors = [0] * (len(sizes) + 1), [[] for _ in range(len(sizes) + 1)]
    for n in range(1, len(sizes)):
        ds = sympy_divisors(dense(mats[n], sizes[n - 1]))
        rank[n] = len(ds)
        tors[n] = sorted(d for d in ds if d > 1)
    return HomologyResult(tuple(Group(sizes[n] - rank[n] - rank[n + 1], tuple(tors[n + 1]))
                                for n in range(len(sizes))))
