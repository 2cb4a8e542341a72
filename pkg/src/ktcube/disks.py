"""Tesselated disks and the square presentation complexes built from them.

A disk is a hole-free polyomino whose counterclockwise boundary is cut into
sides of equal length, each labelled by a generator and an exponent sign.
After one cubical subdivision each side has length ``2 * side_length`` and is
glued onto the loop of its generator in a one-vertex wedge.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from . import cubes
from .complex import (ComplexError, CubicalComplex, CubicalMap, LoopMarking, cubical_subdivide,
                      grid_complex, loop_map, make_circle, pushout)

_STEP = {(1, 0): "E", (0, 1): "N", (-1, 0): "W", (0, -1): "S"}


# ---------------------------------------------------------------------------
# presentations

def parse_word(text: str) -> tuple:
    """``"ab^-1c^2"`` -> ((a,1),(b,-1),(c,1),(c,1)). Upper case means inverse."""
    out = []
    for g, _, e in re.findall(r"([A-Za-z])(\^(-?\d+))?", text.replace(" ", "")):
        k = int(e) if e else 1
        s = -1 if g.isupper() else 1
        g = g.lower()
        out += [(g, s if k > 0 else -s)] * abs(k)
    return tuple(out)


def word_str(word) -> str:
    return "".join(g if s > 0 else g.upper() for g, s in word)


@dataclass(frozen=True)
class PresentationData:
    generators: tuple
    relators: tuple     # tuples of (generator, +-1)

    def __post_init__(self):
        for r in self.relators:
            if not r:
                raise ValueError("empty relator")
            for i in range(len(r)):
                (g1, s1), (g2, s2) = r[i], r[(i + 1) % len(r)]
                if g1 == g2 and s1 == -s2:
                    raise ValueError(f"relator {word_str(r)} is not cyclically reduced")

    @classmethod
    def parse(cls, generators, relators):
        return cls(tuple(generators), tuple(parse_word(r) for r in relators))

    def exponent_matrix(self):
        """Rows: relators, columns: generators (exponent sums)."""
        return [[sum(s for h, s in r if h == g) for g in self.generators] for r in self.relators]


H_PRESENTATION = PresentationData.parse(
    "abcdef", ["abcdef", "ab^-1c^2f^-1e^2d^-1", "a^2fc^2bed",
               "ad^-2cb^-2ef^-1", "ad^2cf^2eb^2", "af^-2cd^-1eb^-2"])
K_PRESENTATION = PresentationData.parse("vwxy", ["VWxyXYYvw"])


# ---------------------------------------------------------------------------
# disks

def boundary_cycle(squares):
    """Counterclockwise boundary vertices of a polyomino starting at its least
    vertex, or None if the boundary is not one simple closed curve."""
    sq = set(squares)
    nxt = {}
    for x, y in sq:
        for cond, a, b in (((x, y - 1) not in sq, (x, y), (x + 1, y)),
                           ((x + 1, y) not in sq, (x + 1, y), (x + 1, y + 1)),
                           ((x, y + 1) not in sq, (x + 1, y + 1), (x, y + 1)),
                           ((x - 1, y) not in sq, (x, y + 1), (x, y))):
            if cond:
                if a in nxt:
                    return None     # pinch vertex
                nxt[a] = b
    if not nxt:
        return None
    start = min(nxt)
    out, p = [start], nxt[start]
    while p != start:
        out.append(p)
        p = nxt[p]
    return out if len(out) == len(nxt) else None


def turn_weights(cycle):
    """Squares of the polyomino at each boundary vertex: 1 convex, 2 flat, 3 reflex."""
    n = len(cycle)
    out = []
    for i in range(n):
        p, q, r = cycle[i - 1], cycle[i], cycle[(i + 1) % n]
        d1 = (q[0] - p[0], q[1] - p[1])
        d2 = (r[0] - q[0], r[1] - q[1])
        cross = d1[0] * d2[1] - d1[1] * d2[0]
        out.append(1 if cross > 0 else 3 if cross < 0 else 2)
    return out


@dataclass(frozen=True)
class TesselatedDisk:
    squares: frozenset
    word: tuple           # one (generator, sign) per side, counterclockwise
    offset: int = 0       # boundary position of the first side's start
    side_length: int = 2

    @property
    def perimeter(self):
        return 4 * len(self.squares) - 2 * sum(
            ((x + 1, y) in self.squares) + ((x, y + 1) in self.squares) for x, y in self.squares)

    def cycle(self):
        return boundary_cycle(self.squares)

    def problems(self) -> list:
        out = []
        if self.perimeter != self.side_length * len(self.word):
            out.append(f"perimeter mismatch: {self.perimeter} != "
                       f"{self.side_length} x {len(self.word)} sides")
            return out
        if self.cycle() is None:
            out.append("not a disk (hole or pinch)")
        return out

    def side_vertices(self):
        """(corner weights at side starts, weights at interior side points)."""
        cyc = self.cycle()
        w = turn_weights(cyc)
        n, L = len(cyc), self.side_length
        corners = [w[(self.offset + k * L) % n] for k in range(len(self.word))]
        inner = [[w[(self.offset + k * L + j) % n] for j in range(1, L)] for k in range(len(self.word))]
        return corners, inner

    def to_json(self):
        xs = [x for x, _ in self.squares]
        ys = [y for _, y in self.squares]
        return {"extent": [max(xs) + 1 - min(xs), max(ys) + 1 - min(ys)],
                "squares": sorted([list(s) for s in self.squares]),
                "word": [[g, s] for g, s in self.word],
                "offset": self.offset, "side_length": self.side_length}

    @classmethod
    def from_json(cls, d):
        return cls(frozenset(tuple(s) for s in d["squares"]), tuple((g, int(s)) for g, s in d["word"]),
                   int(d.get("offset", 0)), int(d.get("side_length", 2)))


def save_disks(path, disks, presentation=None):
    data = {"disks": [d.to_json() for d in disks]}
    if presentation is not None:
        data["generators"] = list(presentation.generators)
    Path(path).write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")


def load_disks(path) -> list:
    data = json.loads(Path(path).read_text())
    return [TesselatedDisk.from_json(d) for d in data["disks"]]


NONAGON = TesselatedDisk(
    frozenset((x, y) for x in range(6) for y in range(3)) - {(0, 2), (5, 2)},
    parse_word("VWxyXYYvw"), 0, 2)


# ---------------------------------------------------------------------------
# assembly

def wedge_of_loops(generators, loop_len=4) -> CubicalComplex:
    """One vertex with a loop of ``loop_len`` edges per generator."""
    verts = 1 + len(generators) * (loop_len - 1)
    edges, loops = [], {}
    for k, g in enumerate(generators):
        vs = [0] + [1 + k * (loop_len - 1) + i for i in range(loop_len - 1)] + [0]
        ids = []
        for i in range(loop_len):
            ids.append(len(edges))
            edges.append(((vs[i], ()), (vs[i + 1], ())))
        loops[g] = LoopMarking(tuple((e, 0) for e in ids), 0)
    return CubicalComplex([[()] * verts, edges], loops=loops, name="wedge")


def _word_map(circle, target, word, loops):
    """Circle -> target reading ``word`` with each letter along its marked loop."""
    verts, edges = [], []
    for g, s in word:
        lp = loops[g].edges
        L = len(lp)
        for m in range(L):
            e, o = lp[m] if s > 0 else lp[L - 1 - m]
            o = o if s > 0 else 1 - o
            a, b = target.edge_ends(e)
            verts.append((a if o == 0 else b, ()))
            edges.append((e, (o,)))
    return CubicalMap(circle, target, [verts, edges])


def disk_complex(disk: TesselatedDisk):
    """Subdivided disk and its boundary loop starting at the first side."""
    d = cubical_subdivide(grid_complex(disk.squares))
    bd = d.loops["boundary"].edges
    k = 2 * disk.offset
    edges = bd[k:] + bd[:k]
    e, o = edges[0]
    a, b = d.edge_ends(e)
    return d.with_loops({}), LoopMarking(edges, a if o == 0 else b)


def presentation_complex(pres: PresentationData, disks, name="") -> CubicalComplex:
    """Wedge of loops with one subdivided disk attached per relator."""
    if len(disks) != len(pres.relators):
        raise ValueError("need one disk per relator")
    L = 2 * disks[0].side_length
    cur = wedge_of_loops(pres.generators, L)
    for k, (disk, rel) in enumerate(zip(disks, pres.relators)):
        bad = disk.problems()
        if bad:
            raise ComplexError(f"disk {k}: {bad[0]}")
        if not _cyclic_equal(disk.word, rel):
            raise ComplexError(f"disk {k} reads {word_str(disk.word)}, not {word_str(rel)}")
        dc, bd = disk_complex(disk)
        circle = make_circle(len(bd))
        into_disk = loop_map(dc, bd, circle)
        into_cur = _word_map(circle, cur, disk.word, cur.loops)
        cur = pushout(cur, dc, circle, into_cur, into_disk, name=name).complex
    cur.name = name
    return cur


def _cyclic_equal(u, v):
    if len(u) != len(v):
        return False
    return any(tuple(u[i:] + u[:i]) == tuple(v) for i in range(len(u)))


# ---------------------------------------------------------------------------
# search

@lru_cache(maxsize=None)
def polygons(perimeter: int) -> tuple:
    """All self-avoiding lattice polygons of the given length, each as the
    counterclockwise vertex cycle starting at its least vertex (0, 0)."""
    out = []
    path = [(0, 0), (1, 0)]
    seen = {(0, 0), (1, 0)}

    def ok(p):
        return p[0] > 0 or (p[0] == 0 and p[1] >= 0)

    def dfs():
        x, y = path[-1]
        left = perimeter - len(path) + 1
        for dx, dy in ((1, 0), (0, 1), (-1, 0), (0, -1)):
            q = (x + dx, y + dy)
            if q == (0, 0):
                if left == 1 and (x, y) == (0, 1):
                    out.append(tuple(path))
                continue
            if q in seen or not ok(q) or abs(q[0]) + abs(q[1]) > left - 1:
                continue
            path.append(q)
            seen.add(q)
            dfs()
            path.pop()
            seen.discard(q)

    dfs()
    return tuple(out)


def polygon_squares(cycle) -> frozenset:
    """Squares enclosed by a lattice polygon (parity of horizontal edges above)."""
    above = {}
    n = len(cycle)
    for i in range(n):
        (x1, y1), (x2, y2) = cycle[i], cycle[(i + 1) % n]
        if y1 == y2:
            above.setdefault(min(x1, x2), []).append(y1)
    out = set()
    for x, ys in above.items():
        ys.sort()
        for a, b in zip(ys[::2], ys[1::2]):
            out.update((x, y) for y in range(a, b))
    return frozenset(out)


def _link_nodes(letter, depart):
    g, s = letter
    # departing along g leaves through its start half-edge (g+), arriving through g-
    return (g, "+") if (s > 0) == depart else (g, "-")


@dataclass
class _Edges:
    w: dict = field(default_factory=dict)         # frozenset pair -> list of weights
    ones: dict = field(default_factory=dict)      # node -> set of weight-1 neighbours

    def can_add(self, a, b, wt):
        if a == b:
            return False
        key = frozenset((a, b))
        have = self.w.get(key, ())
        if wt == 1:
            if a[0] == b[0]:
                return False                       # loop would not be geodesic at the base
            if any(h <= 2 for h in have):
                return False
            if self.ones.get(a, set()) & self.ones.get(b, set()):
                return False
        elif wt == 2 and 1 in have:
            return False
        return True

    def add(self, a, b, wt):
        self.w.setdefault(frozenset((a, b)), []).append(wt)
        if wt == 1:
            self.ones.setdefault(a, set()).add(b)
            self.ones.setdefault(b, set()).add(a)

    def remove(self, a, b, wt):
        self.w[frozenset((a, b))].remove(wt)
        if wt == 1:
            self.ones[a].discard(b)
            self.ones[b].discard(a)


def disk_candidates(word, side_length=2):
    """Disk choices for one relator, each with its corner edges in the base link."""
    n = len(word)
    out = []
    for cyc in polygons(side_length * n):
        w = turn_weights(cyc)
        sq = None
        for off in range(side_length):
            if any(w[(off + k * side_length + j) % len(cyc)] == 1
                   for k in range(n) for j in range(1, side_length)):
                continue
            for rot in range(n):
                wd = word[rot:] + word[:rot]
                edges = []
                for k in range(n):
                    a = _link_nodes(wd[k - 1], depart=False)
                    b = _link_nodes(wd[k], depart=True)
                    edges.append((a, b, w[(off + k * side_length) % len(cyc)]))
                probe = _Edges()
                if all(probe.can_add(*e) and probe.add(*e) is None for e in edges):
                    if sq is None:
                        sq = polygon_squares(cyc)
                    out.append((TesselatedDisk(sq, tuple(wd), off, side_length), tuple(edges)))
    out.sort(key=lambda t: (len(t[0].squares), sum(e[2] == 1 for e in t[1])))
    return out


def search_disks(pres: PresentationData, accept=None, max_families=None, side_length=2):
    """Yield disk families whose corner data satisfy the base-vertex link
    conditions; ``accept(disks)`` gives the final say (e.g. full certificates)."""
    cands = [disk_candidates(r, side_length) for r in pres.relators]
    order = sorted(range(len(cands)), key=lambda i: len(cands[i]))
    state = _Edges()
    chosen = [None] * len(cands)
    found = 0

    def rec(d):
        nonlocal found
        if d == len(order):
            disks = list(chosen)
            if accept is None or accept(disks):
                found += 1
                yield disks
            return
        i = order[d]
        for disk, edges in cands[i]:
            added = []
            for e in edges:
                if not state.can_add(*e):
                    break
                state.add(*e)
                added.append(e)
            else:
                chosen[i] = disk
                yield from rec(d + 1)
                if max_families is not None and found >= max_families:
                    for e in added:
                        state.remove(*e)
                    return
            for e in added:
                state.remove(*e)

    yield from rec(0)


def certify_presentation_complex(c: CubicalComplex, pres: PresentationData, brady_meier=True) -> dict:
    from .homology import homology
    from .links import all_links, check_brady_meier, check_closed_geodesic, check_gromov
    out = {"gromov": check_gromov(c)}
    links = all_links(c)
    for g in pres.generators:
        out[f"geodesic {g}"] = check_closed_geodesic(c, c.loops[g], links)
    if brady_meier:
        out["brady-meier"] = check_brady_meier(c)
    out["homology"] = homology(c)
    return out


def find_x2_disks(pres: PresentationData = H_PRESENTATION, skip=0):
    """First disk family (after ``skip`` accepted ones) whose complex passes
    every certificate."""
    def accept(disks):
        c = presentation_complex(pres, disks)
        rep = certify_presentation_complex(c, pres)
        return all(v.ok for k, v in rep.items() if k != "homology") and rep["homology"].is_acyclic()

    for k, fam in enumerate(search_disks(pres, accept)):
        if k == skip:
            return fam
    raise RuntimeError("disk search exhausted")
