"""Vertex links and the curvature certificates built on them.

A link vertex is a half-edge ``(edge_id, end)``; a link simplex is the corner
of an incident cube, recorded by the half-edges leaving that corner.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product as iproduct

import networkx as nx

from . import cubes
from .complex import CubicalComplex, CubicalMap, LoopMarking, check_loop


@dataclass
class LinkComplex:
    vertex: int
    vertices: set = field(default_factory=set)
    simplices: list = field(default_factory=list)   # tuples of half-edges
    corners: list = field(default_factory=list)     # (dim, cell, corner) per simplex

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        for s in self.simplices:
            for i in range(len(s)):
                for j in range(i + 1, len(s)):
                    if s[i] != s[j]:
                        g.add_edge(s[i], s[j])
        return g

    @property
    def dim(self):
        return max((len(s) for s in self.simplices), default=0) - 1

    def simplex_sets(self):
        return {frozenset(s) for s in self.simplices}


@dataclass
class CurvatureReport:
    check: str
    ok: bool
    witnesses: list = field(default_factory=list)
    checked: int = 0

    @property
    def verdict(self):
        return "PASS" if self.ok else "FAIL"

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"check": self.check, "verdict": self.verdict, "checked": self.checked,
                "witnesses": [_jsonable(w) for w in self.witnesses[:20]]}


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in (sorted(x) if isinstance(x, (set, frozenset)) else x)]
    return x


def _corner_simplex(c, n, cell, corner):
    out = []
    for k in range(n):
        _, e, iso = c.resolve(n, cell, cubes.edge_map(corner, k))
        out.append((e, corner[k] ^ (iso[0] & 1)))
    return tuple(out)


def all_links(c: CubicalComplex, vertices=None) -> dict:
    """Links of every vertex (or only those in ``vertices``)."""
    want = None if vertices is None else set(vertices)
    links = {v: LinkComplex(v) for v in (range(c.count(0)) if want is None else want)}
    for n in range(1, c.dim + 1):
        for cell in range(c.count(n)):
            for corner in iproduct((0, 1), repeat=n):
                _, v, _ = c.resolve(n, cell, cubes.corner_map(corner))
                if want is not None and v not in want:
                    continue
                s = _corner_simplex(c, n, cell, corner)
                lk = links[v]
                lk.simplices.append(s)
                lk.corners.append((n, cell, corner))
                lk.vertices.update(s)
    return links


def vertex_link(c: CubicalComplex, v: int) -> LinkComplex:
    return all_links(c, [v])[v]


# ---------------------------------------------------------------------------
# Gromov

def link_violations(lk: LinkComplex, first_only=False) -> list:
    out = []
    seen = {}
    for s, src in zip(lk.simplices, lk.corners):
        if len(set(s)) != len(s):
            out.append({"kind": "not-simple", "vertex": lk.vertex, "simplex": list(s), "corner": src})
            if first_only:
                return out
            continue
        key = frozenset(s)
        if key in seen and seen[key] != src:
            out.append({"kind": "not-simple", "vertex": lk.vertex, "simplex": sorted(s),
                        "duplicate": [seen[key], src]})
            if first_only:
                return out
        seen.setdefault(key, src)
    if out:
        return out
    g = lk.graph()
    for clique in nx.find_cliques(g):
        if len(clique) >= 3 and frozenset(clique) not in seen:
            # shrink to a minimal non-simplex for a short witness
            w = _minimal_nonsimplex(sorted(clique), seen)
            kind = "short-cycle" if len(w) == 3 and lk.dim <= 1 else "non-flag"
            out.append({"kind": kind, "vertex": lk.vertex, "clique": w})
            if first_only:
                return out
    return out


def _minimal_nonsimplex(clique, simplices):
    from itertools import combinations
    for k in range(3, len(clique) + 1):
        for sub in combinations(clique, k):
            if frozenset(sub) not in simplices:
                return list(sub)
    return clique


def check_gromov(c: CubicalComplex, first_only=False) -> CurvatureReport:
    links = all_links(c)
    wit = []
    for v in sorted(links):
        wit += link_violations(links[v], first_only)
        if wit and first_only:
            break
    return CurvatureReport("gromov", not wit, wit, len(links))


def witness_holds(c: CubicalComplex, w: dict, emb: CubicalMap = None) -> bool:
    """Re-check a failure witness from any report in this module."""
    kind = w["kind"]
    if kind in ("short-cycle", "non-flag"):
        lk = vertex_link(c, w["vertex"])
        g = lk.graph()
        cl = [tuple(x) for x in w["clique"]]
        pairwise = all(g.has_edge(a, b) for i, a in enumerate(cl) for b in cl[i + 1:])
        return pairwise and frozenset(cl) not in lk.simplex_sets()
    if kind == "not-simple":
        lk = vertex_link(c, w["vertex"])
        return bool(link_violations(lk))
    if kind == "not-geodesic":
        lk = vertex_link(c, w["vertex"])
        d = _distance(lk.graph(), tuple(w["arrive"]), tuple(w["depart"]))
        return d < 2
    if kind in ("disconnected", "punctured-disconnected"):
        lk = vertex_link(c, w["vertex"])
        g = lk.graph()
        if kind == "punctured-disconnected":
            g.remove_node(tuple(w["puncture"]))
        return g.number_of_nodes() == 0 or not nx.is_connected(g)
    if kind == "not-full":
        lk = vertex_link(emb.dst if emb is not None else c, w["vertex"])
        return frozenset(tuple(x) for x in w["simplex"]) in lk.simplex_sets() and (
            emb is None or not check_locally_convex(emb).ok)
    raise ValueError(kind)


# ---------------------------------------------------------------------------
# geodesics

def _distance(g, a, b):
    if a == b:
        return 0
    if a not in g or b not in g:
        return float("inf")
    seen = {a: 0}
    q = deque([a])
    while q:
        x = q.popleft()
        for y in g[x]:
            if y not in seen:
                seen[y] = seen[x] + 1
                if y == b:
                    return seen[y]
                q.append(y)
    return float("inf")


def check_closed_geodesic(c: CubicalComplex, loop: LoopMarking, links=None) -> CurvatureReport:
    if check_loop(c, loop):
        raise ValueError("loop is not closed")
    k = len(loop.edges)
    steps = []
    for i in range(k):
        e, o = loop.edges[i]
        e2, o2 = loop.edges[(i + 1) % k]
        arrive = (e, 1 if o == 0 else 0)
        depart = (e2, 0 if o2 == 0 else 1)
        a, b = c.edge_ends(e)
        steps.append((b if o == 0 else a, arrive, depart))
    if links is None:
        links = all_links(c, {s[0] for s in steps})
    graphs = {}
    wit = []
    for v, arrive, depart in steps:
        if v not in graphs:
            graphs[v] = links[v].graph()
        d = _distance(graphs[v], arrive, depart)
        if d < 2:
            wit.append({"kind": "not-geodesic", "vertex": v, "arrive": arrive, "depart": depart,
                        "distance": d})
    return CurvatureReport("closed-geodesic", not wit, wit, len(steps))


# ---------------------------------------------------------------------------
# convexity

def check_locally_convex(emb: CubicalMap, target_links=None) -> CurvatureReport:
    """Every image vertex link must be a full subcomplex of the ambient link."""
    a, b = emb.src, emb.dst
    vmap = [img for img, _ in emb.images[0]]
    if len(set(vmap)) != len(vmap):
        return CurvatureReport("locally-convex", False, [{"kind": "not-injective"}])
    src_links = all_links(a)
    if target_links is None:
        target_links = all_links(b, set(vmap))
    wit = []
    for u, lk in src_links.items():
        w = vmap[u]
        sub = set()
        verts = set()
        for s in lk.simplices:
            img = tuple(_push_half(emb, h) for h in s)
            sub.add(frozenset(img))
            verts.update(img)
        for s in lk.vertices:
            verts.add(_push_half(emb, s))
        for s in target_links[w].simplices:
            fs = frozenset(s)
            if fs <= verts and fs not in sub:
                wit.append({"kind": "not-full", "vertex": w, "simplex": sorted(s)})
                break
    return CurvatureReport("locally-convex", not wit, wit, len(src_links))


def _push_half(emb, h):
    e, end = h
    t, iso = emb.images[1][e]
    return (t, end ^ (iso[0] & 1))


# ---------------------------------------------------------------------------
# link connectivity

def check_brady_meier(c: CubicalComplex) -> CurvatureReport:
    links = all_links(c)
    wit = []
    for v in sorted(links):
        g = links[v].graph()
        if g.number_of_nodes() == 0 or not nx.is_connected(g):
            wit.append({"kind": "disconnected", "vertex": v})
            continue
        if g.number_of_nodes() == 1:
            wit.append({"kind": "punctured-disconnected", "vertex": v,
                        "puncture": next(iter(g.nodes))})
            continue
        cut = sorted(nx.articulation_points(g))
        if cut:
            wit.append({"kind": "punctured-disconnected", "vertex": v, "puncture": cut[0]})
    return CurvatureReport("brady-meier", not wit, wit, len(links))
