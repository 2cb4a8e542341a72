"""Integral cellular homology from boundary matrices and Smith normal form."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from . import cubes
from .complex import CubicalComplex, SimplicialComplex
from .snf import normalize_divisors, sparse_rank_divisors


@dataclass(frozen=True)
class Group:
    """Finitely generated abelian group Z^betti + sum Z/d_i."""
    betti: int = 0
    torsion: tuple = ()

    def __str__(self):
        parts = []
        if self.betti:
            parts.append("Z" if self.betti == 1 else f"Z^{self.betti}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    @property
    def trivial(self):
        return not self.betti and not self.torsion

    def to_json(self):
        return {"betti": self.betti, "torsion": list(self.torsion)}


@dataclass(frozen=True)
class HomologyResult:
    groups: tuple

    def __getitem__(self, n) -> Group:
        return self.groups[n] if 0 <= n < len(self.groups) else Group()

    def __len__(self):
        return len(self.groups)

    def trimmed(self) -> "HomologyResult":
        g = list(self.groups)
        while g and g[-1].trivial:
            g.pop()
        return HomologyResult(tuple(g))

    def __eq__(self, other):
        return isinstance(other, HomologyResult) and self.trimmed().groups == other.trimmed().groups

    def __hash__(self):
        return hash(self.trimmed().groups)

    def betti(self):
        return [g.betti for g in self.groups]

    def is_acyclic(self) -> bool:
        t = self.trimmed()
        return len(t) == 1 and t[0] == Group(1)

    def __str__(self):
        t = self.trimmed()
        return "(" + ", ".join(str(g) for g in t.groups) + ")"

    def to_json(self):
        return [dict(degree=n, **g.to_json()) for n, g in enumerate(self.trimmed().groups)]

    @classmethod
    def from_list(cls, items):
        """``[(betti, [torsion...]), ...]`` or ``[betti, ...]``."""
        out = []
        for it in items:
            if isinstance(it, int):
                out.append(Group(it))
            else:
                b, t = it
                out.append(Group(b, tuple(normalize_divisors(t))))
        return cls(tuple(out))


# ---------------------------------------------------------------------------
# boundary matrices

def cubical_boundary(c: CubicalComplex):
    """``mats[n]`` is the boundary C_n -> C_{n-1} as a list of sparse columns.

    Sign convention: d(c) = sum_i (-1)^i (d_i^1 c - d_i^0 c), axes counted from 1.
    """
    mats = [[{} for _ in range(c.count(0))]]
    for n in range(1, c.dim + 1):
        cols = []
        for facets in c.cells[n]:
            col = {}
            for k, (d, iso) in enumerate(facets):
                axis, side = divmod(k, 2)
                s = (1 if axis % 2 else -1) * (1 if side else -1) * cubes.sign(iso)
                v = col.get(d, 0) + s
                if v:
                    col[d] = v
                else:
                    col.pop(d, None)
            cols.append(col)
        mats.append(cols)
    return mats


def simplicial_boundary(x: SimplicialComplex):
    index = [{s: i for i, s in enumerate(level)} for level in x.simplices]
    mats = [[{} for _ in x.simplices[0]]] if x.simplices else [[]]
    for n in range(1, x.dim + 1):
        cols = []
        for s in x.simplices[n]:
            col = {}
            for k in range(len(s)):
                face = s[:k] + s[k + 1:]
                col[index[n - 1][face]] = (-1) ** k
            cols.append(col)
        mats.append(cols)
    return mats


def boundary_matrices(c):
    if isinstance(c, CubicalComplex):
        return cubical_boundary(c)
    if isinstance(c, SimplicialComplex):
        return simplicial_boundary(c)
    return c.boundary_matrices()


def check_d2(mats) -> bool:
    for n in range(2, len(mats)):
        lower = mats[n - 1]
        for col in mats[n]:
            acc = {}
            for i, v in col.items():
                for r, w in lower[i].items():
                    acc[r] = acc.get(r, 0) + v * w
            if any(acc.values()):
                return False
    return True


def homology_from_boundaries(mats, sizes=None) -> HomologyResult:
    """Homology of a chain complex given ``mats[n]`` (columns of d_n)."""
    sizes = sizes or [len(m) for m in mats]
    top = len(sizes)
    ranks, tors = [0] * (top + 1), [[] for _ in range(top + 1)]
    for n in range(1, top):
        ranks[n], tors[n] = sparse_rank_divisors(mats[n], sizes[n - 1])
    groups = []
    for n in range(top):
        b = sizes[n] - ranks[n] - ranks[n + 1]
        groups.append(Group(b, tuple(normalize_divisors(tors[n + 1]))))
    return HomologyResult(tuple(groups))


def homology(c) -> HomologyResult:
    if isinstance(c, (CubicalComplex, SimplicialComplex)):
        mats = boundary_matrices(c)
        return homology_from_boundaries(mats)
    return c.homology()


def is_acyclic(c) -> bool:
    return homology(c).is_acyclic()


# ---------------------------------------------------------------------------
# Kunneth

def tensor_groups(a: Group, b: Group) -> Group:
    tors = list(a.torsion) * b.betti + list(b.torsion) * a.betti
    tors += [gcd(x, y) for x in a.torsion for y in b.torsion]
    return Group(a.betti * b.betti, tuple(normalize_divisors(tors)))


def tor_groups(a: Group, b: Group) -> Group:
    return Group(0, tuple(normalize_divisors([gcd(x, y) for x in a.torsion for y in b.torsion])))


def direct_sum(*gs) -> Group:
    return Group(sum(g.betti for g in gs), tuple(normalize_divisors([t for g in gs for t in g.torsion])))


def kunneth(ha: HomologyResult, hb: HomologyResult) -> HomologyResult:
    """Homology of a product from the homology of its factors."""
    na, nb = len(ha), len(hb)
    out = []
    for n in range(max(na + nb - 1, 1)):
        parts = [tensor_groups(ha[p], hb[n - p]) for p in range(n + 1)]
        parts += [tor_groups(ha[p], hb[n - 1 - p]) for p in range(n)]
        out.append(direct_sum(*parts))
    return HomologyResult(tuple(out))


def euler_characteristic(h: HomologyResult) -> int:
    return sum((-1) ** n * g.betti for n, g in enumerate(h.groups))
