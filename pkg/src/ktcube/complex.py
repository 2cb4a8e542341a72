"""Explicit cubical complexes with ordered facet maps, and the constructions
performed on them (products, pushouts, tubes, cylinders, subdivision, cones).

A cell of dimension n is stored as a tuple of 2n facets ordered
``(axis0 side0, axis0 side1, axis1 side0, ...)``; each facet is a pair
``(cell_id, iso)`` where ``iso`` sends the standard (n-1)-cube parametrizing
that facet onto the standard cube of the facet cell.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product as iproduct

from . import cubes


class ComplexError(ValueError):
    """Malformed complex or an impossible identification."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class LoopMarking:
    """A closed edge path. ``edges`` holds ``(edge_id, orientation)``; orientation
    0 runs the edge from its side-0 vertex to its side-1 vertex."""
    edges: tuple
    basepoint: int

    def __len__(self):
        return len(self.edges)

    def reversed(self) -> "LoopMarking":
        return LoopMarking(tuple((e, 1 - o) for e, o in reversed(self.edges)), self.basepoint)


class CubicalComplex:
    __slots__ = ("cells", "loops", "basepoint", "name")

    def __init__(self, cells, loops=None, basepoint=0, name=""):
        cells = [list(c) for c in cells]
        while len(cells) > 1 and not cells[-1]:
            cells.pop()
        self.cells = cells
        self.loops = dict(loops or {})
        self.basepoint = basepoint
        self.name = name

    @property
    def dim(self) -> int:
        return len(self.cells) - 1 if self.cells and self.cells[0] else -1

    def count(self, n: int) -> int:
        return len(self.cells[n]) if 0 <= n < len(self.cells) else 0

    def counts(self) -> list:
        return [len(c) for c in self.cells]

    def size(self) -> int:
        return sum(len(c) for c in self.cells)

    def euler(self) -> int:
        return sum((-1) ** n * len(c) for n, c in enumerate(self.cells))

    def facet(self, n, c, axis, side):
        return self.cells[n][c][2 * axis + side]

    def resolve(self, n, c, fmap, order=None):
        """Resolve a face of cell (n, c) given by a face map.

        Returns ``(k, cell, iso)``.  Constant coordinates are peeled in
        increasing order unless ``order`` (a list of ambient axes) is given.
        """
        while not cubes.is_iso(fmap):
            if order:
                axis = order[0]
                order = [a if a < axis else a - 1 for a in order[1:]]
            else:
                axis = next(i for i, v in enumerate(fmap) if v < 0)
            side = cubes.const_value(fmap[axis])
            d, iso = self.cells[n][c][2 * axis + side]
            fmap = cubes.apply_to_face(iso, cubes.drop_axis(fmap, axis))
            n, c = n - 1, d
        return n, c, fmap

    def corners(self, n, c):
        """Vertex id of every corner of cell (n, c), keyed by corner tuple."""
        return {eps: self.resolve(n, c, cubes.corner_map(eps))[1]
                for eps in iproduct((0, 1), repeat=n)}

    def edge_ends(self, e):
        return self.cells[1][e][0][0], self.cells[1][e][1][0]

    def loop(self, name) -> LoopMarking:
        return self.loops[name]

    def with_loops(self, loops, basepoint=None, name=None) -> "CubicalComplex":
        out = CubicalComplex.__new__(CubicalComplex)
        out.cells = self.cells
        out.loops = dict(loops)
        out.basepoint = self.basepoint if basepoint is None else basepoint
        out.name = self.name if name is None else name
        return out

    def __repr__(self):
        return f"CubicalComplex({self.name or '?'}, counts={self.counts()})"


# ---------------------------------------------------------------------------
# cellular maps

class CubicalMap:
    """Dimension-preserving cellular map sending each n-cube isomorphically
    onto an n-cube: ``images[n][c] = (target_cell, iso)``."""

    __slots__ = ("src", "dst", "images")

    def __init__(self, src, dst, images):
        self.src = src
        self.dst = dst
        self.images = [list(x) for x in images]

    def __call__(self, n, c):
        return self.images[n][c]

    def compose(self, first: "CubicalMap") -> "CubicalMap":
        """self after first."""
        out = []
        for n, imgs in enumerate(first.images):
            row = []
            for d, iso in imgs:
                e, iso2 = self.images[n][d]
                row.append((e, cubes.compose(iso2, iso)))
            out.append(row)
        return CubicalMap(first.src, self.dst, out)

    def is_injective(self) -> bool:
        return all(len({d for d, _ in imgs}) == len(imgs) for imgs in self.images)

    def check(self, limit=10):
        """Facet commutation, cell by cell. Returns a list of violations."""
        bad = []
        src, dst = self.src, self.dst
        for n in range(1, len(src.cells)):
            for c, facets in enumerate(src.cells[n]):
                t, iota = self.images[n][c]
                for k, (d, phi) in enumerate(facets):
                    axis, side = divmod(k, 2)
                    fm = cubes.apply_to_face(iota, cubes.facet_map(n, axis, side))
                    _, g, gamma = dst.resolve(n, t, fm)
                    d2, iota_d = self.images[n - 1][d]
                    if g != d2 or gamma != cubes.compose(iota_d, phi):
                        bad.append((n, c, axis, side))
                        if len(bad) >= limit:
                            return bad
        return bad

    def image_cells(self):
        return [sorted({d for d, _ in imgs}) for imgs in self.images]

    def __eq__(self, other):
        return (isinstance(other, CubicalMap) and self.src is other.src
                and self.dst is other.dst and self.images == other.images)

    __hash__ = None


SubcomplexEmbedding = CubicalMap


def identity_map(c: CubicalComplex) -> CubicalMap:
    return CubicalMap(c, c, [[(i, cubes.identity(n)) for i in range(len(cs))]
                             for n, cs in enumerate(c.cells)])


def loop_map(target: CubicalComplex, loop: LoopMarking, circle: CubicalComplex = None) -> CubicalMap:
    """The map from a standard circle onto a marked loop (unit speed)."""
    k = len(loop)
    circle = circle or make_circle(k)
    verts, edges = [], []
    for e, o in loop.edges:
        a, b = target.edge_ends(e)
        verts.append(a if o == 0 else b)
        edges.append((e, (o,)))
    return CubicalMap(circle, target, [[(v, ()) for v in verts], edges])


def loop_from_map(f: CubicalMap) -> LoopMarking:
    return LoopMarking(tuple((e, iso[0] & 1) for e, iso in f.images[1]), f.images[0][0][0])


@dataclass
class GluingSpec:
    left: CubicalComplex
    right: CubicalComplex
    locus: CubicalComplex
    embed_left: CubicalMap
    embed_right: CubicalMap


@dataclass
class GlueResult:
    complex: CubicalComplex
    left: CubicalMap
    right: CubicalMap


# ---------------------------------------------------------------------------
# elementary complexes

def make_point(name="pt") -> CubicalComplex:
    return CubicalComplex([[()]], name=name)


def make_points(k: int, name="") -> CubicalComplex:
    return CubicalComplex([[()] * k], name=name)


def make_path(k: int) -> CubicalComplex:
    if k < 1:
        raise ValueError("path length must be >= 1")
    edges = [((i, ()), (i + 1, ())) for i in range(k)]
    return CubicalComplex([[()] * (k + 1), edges], name=f"P{k}")


def make_circle(k: int, name=None) -> CubicalComplex:
    if k < 3:
        raise ValueError("circle needs at least 3 edges")
    edges = [((i, ()), ((i + 1) % k, ())) for i in range(k)]
    loop = LoopMarking(tuple((i, 0) for i in range(k)), 0)
    return CubicalComplex([[()] * k, edges], loops={"loop": loop}, name=name or f"S1_{k}")


def make_square() -> CubicalComplex:
    """One square with its boundary loop marked (counterclockwise from (0,0))."""
    return grid_complex([(0, 0)])


def from_squares(squares, vertices=None, name="") -> CubicalComplex:
    """Embedded square complex from squares given by corner labels
    ``(v00, v10, v01, v11)``; edges are shared by endpoint pair."""
    verts = sorted(set(vertices or ()) | {v for sq in squares for v in sq})
    vid = {v: i for i, v in enumerate(verts)}
    eid, edges = {}, []

    def edge(a, b):
        key = (min(a, b), max(a, b))
        if key not in eid:
            eid[key] = len(edges)
            edges.append(((vid[key[0]], ()), (vid[key[1]], ())))
        return eid[key], (0 if a <= b else 1,)

    cells = []
    for v00, v10, v01, v11 in squares:
        cells.append((edge(v00, v01), edge(v10, v11), edge(v00, v10), edge(v01, v11)))
    return CubicalComplex([[()] * len(verts), edges, cells], name=name)


def grid_complex(squares) -> CubicalComplex:
    """Square complex of a set of unit grid squares (lower-left corners).

    Vertex and edge ids follow sorted lattice order. Axis 0 is x, axis 1 is y.
    """
    squares = sorted(set(squares))
    verts, hedges, vedges = set(), set(), set()
    for x, y in squares:
        verts.update([(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)])
        hedges.update([(x, y), (x, y + 1)])
        vedges.update([(x, y), (x + 1, y)])
    vid = {v: i for i, v in enumerate(sorted(verts))}
    elist = [("h", p) for p in sorted(hedges)] + [("v", p) for p in sorted(vedges)]
    eid = {e: i for i, e in enumerate(elist)}
    edges = []
    for kind, (x, y) in elist:
        end = (x + 1, y) if kind == "h" else (x, y + 1)
        edges.append(((vid[(x, y)], ()), (vid[end], ())))
    sq = []
    for x, y in squares:
        # axis 0 facets are the vertical sides x=x0, x0+1 (param by y)
        sq.append(((eid[("v", (x, y))], (0,)), (eid[("v", (x + 1, y))], (0,)),
                   (eid[("h", (x, y))], (0,)), (eid[("h", (x, y + 1))], (0,))))
    c = CubicalComplex([[()] * len(vid), edges, sq], name="grid")
    c.basepoint = vid[min(verts)]
    bd = _grid_boundary(squares, vid, eid)
    if bd is not None:
        c.loops["boundary"] = bd
    return c


def _grid_boundary(squares, vid, eid):
    sqs = set(squares)
    # boundary unit edges, oriented counterclockwise around the region
    steps = {}
    for x, y in squares:
        if (x, y - 1) not in sqs:
            steps[(x, y)] = ((x + 1, y), ("h", (x, y)), 0)
        if (x + 1, y) not in sqs:
            steps[(x + 1, y)] = ((x + 1, y + 1), ("v", (x + 1, y)), 0)
        if (x, y + 1) not in sqs:
            steps[(x + 1, y + 1)] = ((x, y + 1), ("h", (x, y + 1)), 1)
        if (x - 1, y) not in sqs:
            steps[(x, y + 1)] = ((x, y), ("v", (x, y)), 1)
    start = min(steps)
    out, p = [], start
    while True:
        q, e, o = steps[p]
        out.append((eid[e], o))
        p = q
        if p == start:
            break
    if len(out) != len(steps):
        return None
    return LoopMarking(tuple(out), vid[start])


# ---------------------------------------------------------------------------
# products

class ProductInfo:
    """Cell indexing of a product: cells of dimension n are ordered by
    (p, i, j) with p the dimension of the left factor's cell."""

    __slots__ = ("a", "b", "offsets")

    def __init__(self, a, b):
        self.a, self.b = a, b
        self.offsets = {}
        for n in range(a.dim + b.dim + 1):
            off = 0
            for p in range(n + 1):
                q = n - p
                self.offsets[(p, q)] = off
                off += a.count(p) * b.count(q)

    def id(self, p, i, q, j) -> int:
        return self.offsets[(p, q)] + i * self.b.count(q) + j


def product(a: CubicalComplex, b: CubicalComplex, name=None) -> CubicalComplex:
    info = ProductInfo(a, b)
    bc = [b.count(q) for q in range(b.dim + 1)]
    cells = []
    for n in range(a.dim + b.dim + 1):
        row = []
        for p in range(max(0, n - b.dim), min(n, a.dim) + 1):
            q = n - p
            idq = cubes.identity(q)
            idp = cubes.identity(p)
            for i, fa in enumerate(a.cells[p]):
                left = [None] * (2 * p)
                for k, (d, iso) in enumerate(fa):
                    left[k] = (d, cubes.direct_sum(iso, idq))
                for j, fb in enumerate(b.cells[q]):
                    facets = []
                    for k, (d, iso) in enumerate(left):
                        facets.append((info.offsets[(p - 1, q)] + d * bc[q] + j, iso))
                    for d, iso in fb:
                        facets.append((info.offsets[(p, q - 1)] + i * bc[q - 1] + d,
                                       cubes.direct_sum(idp, iso)))
                    row.append(tuple(facets))
        cells.append(row)
    loops = {}
    for nm, lp in a.loops.items():
        key = nm if nm not in b.loops else f"left.{nm}"
        edges = tuple((info.id(1, e, 0, b.basepoint), o) for e, o in lp.edges)
        loops[key] = LoopMarking(edges, info.id(0, lp.basepoint, 0, b.basepoint))
    for nm, lp in b.loops.items():
        key = nm if nm not in a.loops else f"right.{nm}"
        edges = tuple((info.id(0, a.basepoint, 1, e), o) for e, o in lp.edges)
        loops[key] = LoopMarking(edges, info.id(0, a.basepoint, 0, lp.basepoint))
    out = CubicalComplex(cells, loops=loops, basepoint=info.id(0, a.basepoint, 0, b.basepoint),
                         name=name or f"({a.name}x{b.name})")
    return out


def product_info(a, b) -> ProductInfo:
    return ProductInfo(a, b)


def product_map(f: CubicalMap, g: CubicalMap, src=None, dst=None) -> CubicalMap:
    """f x g between products (built with :func:`product`)."""
    src = src or product(f.src, g.src)
    dst = dst or product(f.dst, g.dst)
    si, di = ProductInfo(f.src, g.src), ProductInfo(f.dst, g.dst)
    images = []
    for n in range(len(src.cells)):
        row = []
        for p in range(max(0, n - g.src.dim), min(n, f.src.dim) + 1):
            q = n - p
            for i in range(f.src.count(p)):
                fi, fiso = f.images[p][i]
                for j in range(g.src.count(q)):
                    gj, giso = g.images[q][j]
                    row.append((di.id(p, fi, q, gj), cubes.direct_sum(fiso, giso)))
        images.append(row)
    return CubicalMap(src, dst, images)


def slice_map(a: CubicalComplex, t: CubicalComplex, vertex: int, prod=None, side="right") -> CubicalMap:
    """a -> a x t at ``vertex`` of t (or t x a when side == 'left')."""
    if side == "right":
        prod = prod or product(a, t)
        info = ProductInfo(a, t)
        images = [[(info.id(n, i, 0, vertex), cubes.identity(n)) for i in range(a.count(n))]
                  for n in range(a.dim + 1)]
    else:
        prod = prod or product(t, a)
        info = ProductInfo(t, a)
        images = [[(info.id(0, vertex, n, i), cubes.identity(n)) for i in range(a.count(n))]
                  for n in range(a.dim + 1)]
    return CubicalMap(a, prod, images)


def assoc_map(a, b, c, src=None, dst=None) -> CubicalMap:
    """(a x b) x c -> a x (b x c)."""
    ab = ProductInfo(a, b)
    src = src or product(product(a, b), c)
    ab_c = ProductInfo(_Counts(ab, a, b), c)
    bc = ProductInfo(b, c)
    bc_c = _Counts(bc, b, c)
    dst = dst or product(a, product(b, c))
    a_bc = ProductInfo(a, bc_c)
    images = [[None] * src.count(n) for n in range(len(src.cells))]
    for p in range(a.dim + 1):
        for q in range(b.dim + 1):
            for r in range(c.dim + 1):
                n = p + q + r
                idn = cubes.identity(n)
                for i in range(a.count(p)):
                    for j in range(b.count(q)):
                        s = ab.id(p, i, q, j)
                        for k in range(c.count(r)):
                            images[n][ab_c.id(p + q, s, r, k)] = (
                                a_bc.id(p, i, q + r, bc.id(q, j, r, k)), idn)
    return CubicalMap(src, dst, images)


class _Counts:
    """Stand-in exposing the cell counts of a product without building it."""

    def __init__(self, info, a, b):
        self.dim = a.dim + b.dim
        self._counts = [sum(a.count(p) * b.count(n - p) for p in range(n + 1)) for n in range(self.dim + 1)]

    def count(self, n):
        return self._counts[n] if 0 <= n <= self.dim else 0


# ---------------------------------------------------------------------------
# pushouts

class _IsoUnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.rel = [None] * n  # iso from cell cube to parent cube; None = identity

    def find(self, x):
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        # compress, accumulating iso to root
        acc = None
        for y in reversed(path):
            r = self.rel[y]
            acc = r if acc is None else (cubes.compose(acc, r) if r is not None else acc)
            self.parent[y] = root
            self.rel[y] = acc
        return root

    def iso_to_root(self, x, n):
        self.find(x)
        r = self.rel[x] if self.parent[x] != x else None
        return cubes.identity(n) if r is None else r

    def union(self, x, y, phi, n):
        """Identify x with y via phi: cube(x) -> cube(y)."""
        rx, ry = self.find(x), self.find(y)
        ax, ay = self.iso_to_root(x, n), self.iso_to_root(y, n)
        psi = cubes.compose(ay, cubes.compose(phi, cubes.invert(ax)))  # rx -> ry
        if rx == ry:
            return cubes.is_identity(psi)
        if rx < ry:
            self.parent[ry] = rx
            self.rel[ry] = cubes.invert(psi)
        else:
            self.parent[rx] = ry
            self.rel[rx] = psi
        return True


def pushout(left, right, locus, map_left, map_right, require_injective=False, name=""):
    """Pushout of ``left <- locus -> right`` along cubical maps.

    Returns ``GlueResult(complex, left_map, right_map)``.  Cell order of the
    result: surviving cells of ``left`` first, then of ``right``.
    """
    if require_injective and not (map_left.is_injective() and map_right.is_injective()):
        raise ComplexError("gluing locus maps are not injective")
    dims = max(left.dim, right.dim) + 1
    ufs, nl = [], []
    for n in range(dims):
        nl.append(left.count(n))
        ufs.append(_IsoUnionFind(left.count(n) + right.count(n)))
    for n in range(locus.dim + 1):
        uf = ufs[n]
        for a in range(locus.count(n)):
            l, alpha = map_left.images[n][a]
            r, beta = map_right.images[n][a]
            if not uf.union(l, nl[n] + r, cubes.compose(beta, cubes.invert(alpha)), n):
                raise ComplexError("locus identification is not isomorphic on the nose",
                                   witness=(n, a))
    newid, cells = [], []
    for n in range(dims):
        uf = ufs[n]
        ids = {}
        for x in range(len(uf.parent)):
            if uf.find(x) == x:
                ids[x] = len(ids)
        newid.append(ids)

    def src_cell(n, x):
        return left.cells[n][x] if x < nl[n] else right.cells[n][x - nl[n]]

    def cls(n, x, off):
        uf = ufs[n]
        g = x + off
        r = uf.find(g)
        return newid[n][r], uf.iso_to_root(g, n)

    for n in range(dims):
        row = []
        for x in newid[n]:
            off = 0 if x < nl[n] else nl[n - 1] if n > 0 else 0
            facets = []
            for d, phi in src_cell(n, x):
                cid, a = cls(n - 1, d, off)
                facets.append((cid, cubes.compose(a, phi)))
            row.append(tuple(facets))
        cells.append(row)
    # consistency of members against their class representative
    for n in range(1, dims):
        uf = ufs[n]
        for x in range(len(uf.parent)):
            r = uf.find(x)
            if r == x:
                continue
            ax = uf.iso_to_root(x, n)
            off = 0 if x < nl[n] else nl[n - 1]
            rep = cells[n][newid[n][r]]
            for k, (d, phi) in enumerate(src_cell(n, x)):
                axis, side = divmod(k, 2)
                fm = cubes.apply_to_face(ax, cubes.facet_map(n, axis, side))
                ra = next(i for i, v in enumerate(fm) if v < 0)
                rs = cubes.const_value(fm[ra])
                chi = cubes.drop_axis(fm, ra)
                cid, a = cls(n - 1, d, off)
                d2, phi2 = rep[2 * ra + rs]
                if cid != d2 or cubes.compose(a, phi) != cubes.compose(phi2, chi):
                    raise ComplexError("facet inconsistency after identification",
                                       witness=(n, x, axis, side))
    out = CubicalComplex(cells, name=name)
    lm = CubicalMap(left, out, [[cls(n, i, 0) for i in range(left.count(n))] for n in range(left.dim + 1)])
    rm = CubicalMap(right, out, [[cls(n, i, nl[n]) for i in range(right.count(n))] for n in range(right.dim + 1)])
    out.basepoint = lm.images[0][left.basepoint][0] if left.count(0) else 0
    for nm, lp in left.loops.items():
        out.loops[nm] = transport_loop(lp, lm)
    for nm, lp in right.loops.items():
        if nm not in out.loops:
            out.loops[nm] = transport_loop(lp, rm)
    return GlueResult(out, lm, rm)


def transport_loop(lp: LoopMarking, f: CubicalMap) -> LoopMarking:
    edges = []
    for e, o in lp.edges:
        t, iso = f.images[1][e]
        edges.append((t, o ^ (iso[0] & 1)))
    return LoopMarking(tuple(edges), f.images[0][lp.basepoint][0])


def glue(spec: GluingSpec, name="") -> GlueResult:
    if spec.locus.count(0) == 0:
        raise ComplexError("empty gluing locus")
    for m in (spec.embed_left, spec.embed_right):
        bad = m.check()
        if bad:
            raise ComplexError("gluing map does not commute with facets", witness=bad[0])
    return pushout(spec.left, spec.right, spec.locus, spec.embed_left, spec.embed_right,
                   require_injective=True, name=name)


@dataclass
class TubeResult:
    complex: CubicalComplex
    left: CubicalMap
    right: CubicalMap
    tube: CubicalMap          # locus x path -> result
    tube_complex: CubicalComplex


def glue_with_tube(a, b, locus, phi1, phi2, tube_len=4, name="") -> TubeResult:
    """a and b joined by locus x [0, tube_len] along phi1 (end 0) and phi2 (end tube_len)."""
    path = make_path(tube_len)
    tube = product(locus, path)
    first = pushout(a, tube, locus, phi1, slice_map(locus, path, 0, tube))
    end = first.right.compose(slice_map(locus, path, tube_len, tube))
    second = pushout(first.complex, b, locus, end, phi2, name=name)
    return TubeResult(second.complex, second.left.compose(first.left), second.right,
                      second.left.compose(first.right), tube)


@dataclass
class CylinderResult:
    complex: CubicalComplex
    source: CubicalMap   # K at level 0
    target: CubicalMap   # T


def mapping_cylinder(f: CubicalMap, name="") -> CylinderResult:
    bad = f.check()
    if bad:
        raise ComplexError("map is not cellular / does not commute with facets", witness=bad[0])
    interval = make_path(1)
    cyl = product(f.src, interval)
    res = pushout(f.dst, cyl, f.src, f, slice_map(f.src, interval, 1, cyl), name=name)
    res.complex.loops = {nm: transport_loop(lp, res.left) for nm, lp in f.dst.loops.items()}
    return CylinderResult(res.complex, res.right.compose(slice_map(f.src, interval, 0, cyl)), res.left)


def cone_over_points(y: CubicalComplex) -> CubicalComplex:
    """Star graph: apex is vertex 0, the points are 1..k."""
    if y.dim > 0:
        raise ComplexError("cone is only defined over a discrete complex")
    k = y.count(0)
    if k == 0:
        return make_point("C()")
    edges = [((i + 1, ()), (0, ())) for i in range(k)]
    return CubicalComplex([[()] * (k + 1), edges], name=f"C{k}")


# ---------------------------------------------------------------------------
# subdivision

_SWAP = {0: 1, 1: 0, 2: 2}  # half0 <-> half1 under a flip; 2 marks the midpoint


def cubical_subdivide(c: CubicalComplex) -> CubicalComplex:
    """Cut every n-cube into 2^n cubes.

    New cells are indexed by (old cell, pattern) with one entry per old axis:
    0 = [0, 1/2], 1 = [1/2, 1], 2 = the midpoint.
    """
    index = [dict() for _ in range(c.dim + 1)]
    for n in range(c.dim + 1):
        for cell in range(c.count(n)):
            for pat in iproduct((0, 1, 2), repeat=n):
                k = sum(1 for v in pat if v != 2)
                index[k][(n, cell, pat)] = len(index[k])
    cells = [[None] * len(index[k]) for k in range(c.dim + 1)]
    for k in range(1, c.dim + 1):
        for (n, cell, pat), nid in index[k].items():
            free = [a for a, v in enumerate(pat) if v != 2]
            facets = []
            for pos, a in enumerate(free):
                for side in (0, 1):
                    if (pat[a] == 0 and side == 1) or (pat[a] == 1 and side == 0):
                        p2 = pat[:a] + (2,) + pat[a + 1:]
                        facets.append((index[k - 1][(n, cell, p2)], cubes.identity(k - 1)))
                        continue
                    d, phi = c.cells[n][cell][2 * a + side]
                    rest = pat[:a] + pat[a + 1:]
                    p2 = [2] * (n - 1)
                    for m, v in enumerate(rest):
                        t, f = phi[m] >> 1, phi[m] & 1
                        p2[t] = _SWAP[v] if f else v
                    p2 = tuple(p2)
                    dfree = [t for t, v in enumerate(p2) if v != 2]
                    rest_free = [m for m, v in enumerate(rest) if v != 2]
                    iso = []
                    for m in rest_free:
                        t, f = phi[m] >> 1, phi[m] & 1
                        iso.append(2 * dfree.index(t) + f)
                    facets.append((index[k - 1][(n - 1, d, p2)], tuple(iso)))
            cells[k][nid] = tuple(facets)
    cells[0] = [()] * len(index[0])
    out = CubicalComplex(cells, name=f"sd({c.name})")
    vmap = {v: index[0][(0, v, ())] for v in range(c.count(0))}
    out.basepoint = vmap.get(c.basepoint, 0)
    for nm, lp in c.loops.items():
        edges = []
        for e, o in lp.edges:
            halves = [(index[1][(1, e, (0,))], o), (index[1][(1, e, (1,))], o)]
            edges.extend(halves if o == 0 else halves[::-1])
        out.loops[nm] = LoopMarking(tuple(edges), vmap[lp.basepoint])
    return out


# ---------------------------------------------------------------------------
# validation

@dataclass
class ValidationReport:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def validate(c: CubicalComplex, limit=20) -> ValidationReport:
    bad = []
    for n in range(len(c.cells)):
        for i, facets in enumerate(c.cells[n]):
            if len(facets) != 2 * n:
                bad.append(("facet-count", n, i))
                continue
            for d, iso in facets:
                if not (0 <= d < c.count(n - 1)):
                    bad.append(("missing-facet", n, i, d))
                elif len(iso) != n - 1 or sorted(x >> 1 for x in iso) != list(range(n - 1)):
                    bad.append(("bad-iso", n, i, d))
            if len(bad) >= limit:
                return ValidationReport(False, bad)
    if bad:
        return ValidationReport(False, bad)
    for n in range(2, len(c.cells)):
        for i in range(c.count(n)):
            for a, b in combinations(range(n), 2):
                for ea, eb in iproduct((0, 1), repeat=2):
                    fm = tuple(cubes.const(ea) if j == a else cubes.const(eb) if j == b else 0
                               for j in range(n))
                    # re-number the free coordinates densely
                    free = [j for j in range(n) if j not in (a, b)]
                    fm = tuple(2 * free.index(j) if v == 0 else v for j, v in enumerate(fm))
                    r1 = c.resolve(n, i, fm, order=[a, b])
                    r2 = c.resolve(n, i, fm, order=[b, a])
                    if r1 != r2:
                        bad.append(("face-identity", n, i, (a, ea), (b, eb), r1, r2))
                        if len(bad) >= limit:
                            return ValidationReport(False, bad)
    for name, lp in c.loops.items():
        if check_loop(c, lp):
            bad.append(("loop", name))
    return ValidationReport(not bad, bad)


def check_loop(c: CubicalComplex, lp: LoopMarking) -> list:
    """Empty list when the marking is a closed edge path at its basepoint."""
    ends = []
    for e, o in lp.edges:
        a, b = c.edge_ends(e)
        ends.append((a, b) if o == 0 else (b, a))
    bad = []
    if not ends or ends[0][0] != lp.basepoint:
        bad.append("basepoint")
    for k in range(len(ends)):
        if ends[k][1] != ends[(k + 1) % len(ends)][0]:
            bad.append(("gap", k))
    return bad


def euler(c) -> int:
    return c.euler()


# ---------------------------------------------------------------------------
# simplicial complexes

class SimplicialComplex:
    def __init__(self, maximal, vertices=None):
        simp = set()
        for s in maximal:
            s = tuple(sorted(s))
            if len(set(s)) != len(s):
                raise ValueError(f"repeated vertex in simplex {s}")
            for k in range(1, len(s) + 1):
                simp.update(combinations(s, k))
        if vertices:
            simp.update((v,) for v in vertices)
        self.vertices = sorted({v for s in simp for v in s})
        dim = max((len(s) for s in simp), default=0) - 1
        self.simplices = [sorted(s for s in simp if len(s) == n + 1) for n in range(dim + 1)]

    @property
    def dim(self):
        return len(self.simplices) - 1

    def all_simplices(self):
        return [s for level in self.simplices for s in level]

    def positive(self):
        """Positive-dimensional simplices, dimension-nondecreasing then input order."""
        return [s for level in self.simplices[1:] for s in level]

    def subcomplex(self, simplices) -> frozenset:
        out = set()
        for s in simplices:
            for k in range(1, len(s) + 1):
                out.update(combinations(s, k))
        return frozenset(out)

    def full(self) -> frozenset:
        return frozenset(self.all_simplices())

    def __repr__(self):
        return f"SimplicialComplex(f={[len(x) for x in self.simplices]})"
