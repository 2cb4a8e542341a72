"""Signed permutations and face maps of standard cubes.

An *iso* between two standard n-cubes is a tuple of codes, one per source
axis: ``code = 2 * target_axis + flip``.  A *face map* from a standard k-cube
into a standard n-cube is a tuple of length n whose entries are either a
variable code ``2 * source_axis + flip`` (>= 0) or a constant ``ZERO``/``ONE``.

Axes are 0-indexed throughout.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product as iproduct

ZERO = -1
ONE = -2

Iso = tuple
FaceMap = tuple


def const(eps: int) -> int:
    return ONE if eps else ZERO


def const_value(code: int) -> int:
    return 1 if code == ONE else 0


@lru_cache(maxsize=None)
def identity(n: int) -> Iso:
    return tuple(2 * k for k in range(n))


def is_identity(iso: Iso) -> bool:
    return all(c == 2 * k for k, c in enumerate(iso))


def compose(psi: Iso, phi: Iso) -> Iso:
    """psi after phi."""
    out = []
    for c in phi:
        a, f = c >> 1, c & 1
        d = psi[a]
        out.append((d & ~1) | ((d & 1) ^ f))
    return tuple(out)


def invert(iso: Iso) -> Iso:
    out = [0] * len(iso)
    for k, c in enumerate(iso):
        out[c >> 1] = 2 * k + (c & 1)
    return tuple(out)


def sign(iso: Iso) -> int:
    """Orientation sign: permutation parity times (-1)^flips."""
    perm = [c >> 1 for c in iso]
    s = -1 if sum(c & 1 for c in iso) % 2 else 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def direct_sum(a: Iso, b: Iso) -> Iso:
    """Block iso acting as ``a`` on the first axes and ``b`` on the rest."""
    off = 2 * len(a)
    return tuple(a) + tuple(c + off for c in b)


def facet_map(n: int, axis: int, side: int) -> FaceMap:
    out = []
    for j in range(n):
        if j < axis:
            out.append(2 * j)
        elif j == axis:
            out.append(const(side))
        else:
            out.append(2 * (j - 1))
    return tuple(out)


def apply_to_face(iso: Iso, fmap: FaceMap) -> FaceMap:
    """Push a face map through an iso of the ambient cube."""
    out = [0] * len(fmap)
    for m, c in enumerate(fmap):
        a, f = iso[m] >> 1, iso[m] & 1
        if c < 0:
            out[a] = const(const_value(c) ^ f)
        else:
            out[a] = c ^ f
    return tuple(out)


def face_dim(fmap: FaceMap) -> int:
    return sum(1 for c in fmap if c >= 0)


def drop_axis(fmap: FaceMap, axis: int) -> FaceMap:
    return fmap[:axis] + fmap[axis + 1:]


def is_iso(fmap: FaceMap) -> bool:
    return all(c >= 0 for c in fmap)


def all_isos(n: int):
    """Every signed permutation of the n-cube (for tests)."""
    from itertools import permutations
    for perm in permutations(range(n)):
        for flips in iproduct((0, 1), repeat=n):
            yield tuple(2 * p + f for p, f in zip(perm, flips))


def corner_map(corner: tuple) -> FaceMap:
    return tuple(const(e) for e in corner)


def edge_map(corner: tuple, axis: int) -> FaceMap:
    """The edge leaving ``corner`` along ``axis`` (parametrized from the corner side 0)."""
    return tuple(0 if j == axis else const(e) for j, e in enumerate(corner))
