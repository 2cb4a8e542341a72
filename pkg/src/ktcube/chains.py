"""Exact integral chain complexes, chain maps and strong deformation retracts.

Vectors are sparse dicts ``{basis_index: coefficient}``.  ``d[n][j]`` is the
boundary of the j-th basis element of degree n.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .homology import HomologyResult, homology_from_boundaries


def _axpy(acc, k, vec):
    """acc += k * vec (in place)."""
    if not k:
        return acc
    for i, v in vec.items():
        nv = acc.get(i, 0) + k * v
        if nv:
            acc[i] = nv
        else:
            acc.pop(i, None)
    return acc


def _scale(k, vec):
    return {i: k * v for i, v in vec.items()} if k else {}


class ChainComplex:
    __slots__ = ("ranks", "d", "name")

    def __init__(self, ranks, d=None, name=""):
        ranks = list(ranks)
        while len(ranks) > 1 and ranks[-1] == 0:
            ranks.pop()
        self.ranks = ranks
        if d is None:
            d = [[{} for _ in range(r)] for r in ranks]
        self.d = [list(x) for x in d[:len(ranks)]]
        if not self.d:
            self.d = [[]]
        self.d[0] = [{} for _ in range(ranks[0] if ranks else 0)]
        self.name = name

    def rank(self, n):
        return self.ranks[n] if 0 <= n < len(self.ranks) else 0

    @property
    def top(self):
        return len(self.ranks) - 1

    def size(self):
        return sum(self.ranks)

    def boundary(self, n, vec):
        out = {}
        if n <= 0 or n >= len(self.d):
            return out
        col = self.d[n]
        for i, v in vec.items():
            _axpy(out, v, col[i])
        return out

    def boundary_matrices(self):
        return self.d

    def homology(self) -> HomologyResult:
        return homology_from_boundaries(self.d, self.ranks)

    def check_d2(self) -> bool:
        for n in range(2, len(self.ranks)):
            for col in self.d[n]:
                if self.boundary(n - 1, col):
                    return False
        return True

    def euler(self):
        return sum((-1) ** n * r for n, r in enumerate(self.ranks))

    @classmethod
    def from_boundaries(cls, mats, name=""):
        return cls([len(m) for m in mats], mats, name=name)

    def __repr__(self):
        return f"ChainComplex({self.name or '?'}, ranks={self.ranks})"


def chains_of(c, name=None) -> ChainComplex:
    """Cellular chain complex of a cubical or simplicial complex."""
    from .homology import boundary_matrices
    mats = boundary_matrices(c)
    return ChainComplex.from_boundaries(mats, name=name or getattr(c, "name", ""))


def point_complex() -> ChainComplex:
    return ChainComplex([1], name="pt")


# ---------------------------------------------------------------------------
# maps

class ChainMap:
    """Graded map of given degree; ``cols[n][j]`` is the image of basis j of degree n."""

    __slots__ = ("src", "dst", "cols", "degree")

    def __init__(self, src, dst, cols=None, degree=0):
        self.src, self.dst, self.degree = src, dst, degree
        if cols is None:
            cols = [[{} for _ in range(r)] for r in src.ranks]
        self.cols = [list(c) for c in cols]
        while len(self.cols) < len(src.ranks):
            self.cols.append([{} for _ in range(src.ranks[len(self.cols)])])

    def apply(self, n, vec):
        out = {}
        if n >= len(self.cols):
            return out
        col = self.cols[n]
        for i, v in vec.items():
            _axpy(out, v, col[i])
        return out

    def image(self, n, j):
        return self.cols[n][j] if n < len(self.cols) else {}

    def compose(self, first: "ChainMap") -> "ChainMap":
        """self after first."""
        cols = [[self.apply(n + first.degree, v) for v in row] for n, row in enumerate(first.cols)]
        return ChainMap(first.src, self.dst, cols, self.degree + first.degree)

    def __matmul__(self, other):
        return self.compose(other)

    def __add__(self, other):
        cols = [[_axpy(dict(a), 1, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.cols, other.cols)]
        return ChainMap(self.src, self.dst, cols, self.degree)

    def __neg__(self):
        return ChainMap(self.src, self.dst, [[_scale(-1, v) for v in r] for r in self.cols], self.degree)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self):
        return not any(v for r in self.cols for v in r)

    def __eq__(self, other):
        return isinstance(other, ChainMap) and (self - other).is_zero()

    __hash__ = None

    def is_chain_map(self) -> bool:
        """d f = (-1)^deg f d."""
        s = -1 if self.degree % 2 else 1
        for n, row in enumerate(self.cols):
            for j, img in enumerate(row):
                lhs = self.dst.boundary(n + self.degree, img)
                rhs = self.apply(n - 1, self.src.d[n][j]) if n > 0 else {}
                if _axpy(dict(lhs), -s, rhs):
                    return False
        return True


def identity(c: ChainComplex) -> ChainMap:
    return ChainMap(c, c, [[{j: 1} for j in range(r)] for r in c.ranks])


def zero_map(src, dst, degree=0) -> ChainMap:
    return ChainMap(src, dst, None, degree)


def map_from_cubical(f, src: ChainComplex, dst: ChainComplex) -> ChainMap:
    """Chain map induced by a cubical map (signed by each iso's orientation)."""
    from . import cubes
    cols = [[{d: cubes.sign(iso)} for d, iso in row] for row in f.images]
    return ChainMap(src, dst, cols)


# ---------------------------------------------------------------------------
# tensor products

class TensorInfo:
    """Basis indexing of A (x) B: degree n ordered by (p, i, j)."""

    __slots__ = ("a", "b", "offsets")

    def __init__(self, a, b):
        self.a, self.b = a, b
        self.offsets = {}
        for n in range(a.top + b.top + 1):
            off = 0
            for p in range(n + 1):
                self.offsets[(p, n - p)] = off
                off += a.rank(p) * b.rank(n - p)

    def id(self, p, i, q, j):
        return self.offsets[(p, q)] + i * self.b.rank(q) + j

    def pair(self, n, vec_a, p, vec_b, q, coef=1):
        out = {}
        if not vec_a or not vec_b:
            return out
        bq = self.b.rank(q)
        off = self.offsets[(p, q)]
        for i, x in vec_a.items():
            for j, y in vec_b.items():
                out[off + i * bq + j] = coef * x * y
        return out


def tensor_complex(a: ChainComplex, b: ChainComplex, name=None):
    info = TensorInfo(a, b)
    top = a.top + b.top
    ranks = [sum(a.rank(p) * b.rank(n - p) for p in range(n + 1)) for n in range(top + 1)]
    d = [[None] * r for r in ranks]
    for p in range(a.top + 1):
        for q in range(b.top + 1):
            n = p + q
            s = -1 if p % 2 else 1
            for i in range(a.rank(p)):
                da = a.d[p][i] if p > 0 else {}
                for j in range(b.rank(q)):
                    col = {}
                    if da:
                        col.update(info.pair(n - 1, da, p - 1, {j: 1}, q))
                    if q > 0 and b.d[q][j]:
                        _axpy(col, s, info.pair(n - 1, {i: 1}, p, b.d[q][j], q - 1))
                    d[n][info.id(p, i, q, j)] = col
    out = ChainComplex(ranks, d, name=name or f"({a.name}*{b.name})")
    return out, info


def tensor_maps(f: ChainMap, g: ChainMap, src_info: TensorInfo, dst_info: TensorInfo, src=None, dst=None):
    """(f (x) g)(a (x) b) = (-1)^{|g||a|} f(a) (x) g(b)."""
    a, b = src_info.a, src_info.b
    ranks = [sum(a.rank(p) * b.rank(n - p) for p in range(n + 1)) for n in range(a.top + b.top + 1)]
    cols = [[None] * r for r in ranks]
    for p in range(a.top + 1):
        for q in range(b.top + 1):
            s = -1 if (g.degree * p) % 2 else 1
            for i in range(a.rank(p)):
                fa = f.image(p, i)
                for j in range(b.rank(q)):
                    cols[p + q][src_info.id(p, i, q, j)] = dst_info.pair(
                        0, fa, p + f.degree, g.image(q, j), q + g.degree, s) if fa else {}
    return ChainMap(src, dst, cols, f.degree + g.degree)


# ---------------------------------------------------------------------------
# reductions

@dataclass
class Reduction:
    big: ChainComplex
    small: ChainComplex
    f: ChainMap
    g: ChainMap
    h: ChainMap = None
    survivors: list = field(default_factory=list)

    def check(self) -> dict:
        """The five reduction identities, each exactly."""
        big, small = self.big, self.small
        fg = self.f.compose(self.g) == identity(small)
        out = {"fg=id": fg}
        if self.h is None:
            return out
        lhs = identity(big) - self.g.compose(self.f)
        dh = _dh_plus_hd(big, self.h)
        out["id-gf=dh+hd"] = lhs == dh
        out["fh=0"] = self.f.compose(self.h).is_zero()
        out["hg=0"] = self.h.compose(self.g).is_zero()
        out["hh=0"] = self.h.compose(self.h).is_zero()
        return out

    def ok(self) -> bool:
        return all(self.check().values())


def _dh_plus_hd(c, h):
    cols = []
    for n, row in enumerate(h.cols):
        out = []
        for j, img in enumerate(row):
            v = c.boundary(n + 1, img)
            if n > 0:
                _axpy(v, 1, h.apply(n - 1, c.d[n][j]))
            out.append(v)
        cols.append(out)
    return ChainMap(c, c, cols)


def reduce(c: ChainComplex, protect=(), with_homotopy=True) -> Reduction:
    """Eliminate unit boundary entries pair by pair (algebraic Morse reduction).

    ``protect`` is a set of ``(degree, index)`` cells that are never removed.
    """
    top = c.top
    alive = [set(range(r)) for r in c.ranks]
    D = [[dict(col) for col in c.d[n]] for n in range(top + 1)]      # columns
    CO = [[dict() for _ in range(c.rank(n))] for n in range(top + 1)]  # rows: cell -> {coface: coef}
    for n in range(1, top + 1):
        for j, col in enumerate(D[n]):
            for i, v in col.items():
                CO[n - 1][i][j] = v
    F = [[{j: 1} for j in range(r)] for r in c.ranks]          # f(x) over current basis
    FINV = [[{j} for j in range(r)] for r in c.ranks]          # current cell -> originals x with it in f(x)
    G = [[{j: 1} for j in range(r)] for r in c.ranks]          # g(y) over original basis
    H = [[{} for _ in range(r)] for r in c.ranks] if with_homotopy else None
    prot = set(protect)

    while True:
        # cheap sweep: take every available pivot in one pass per degree
        found = False
        for n in range(top, 0, -1):
            for s in sorted(alive[n], key=lambda x: len(D[n][x])):
                if s not in alive[n] or (n, s) in prot:
                    continue
                best = None
                for t, u in D[n][s].items():
                    if (u == 1 or u == -1) and (n - 1, t) not in prot:
                        cost = len(CO[n - 1][t])
                        if best is None or cost < best[0]:
                            best = (cost, t, u)
                if best is None:
                    continue
                found = True
                _eliminate(n, s, best[1], best[2], alive, D, CO, F, FINV, G, H)
        if not found:
            break
    survivors = [sorted(a) for a in alive]
    pos = [{x: k for k, x in enumerate(sv)} for sv in survivors]
    small_d = [[{pos[n - 1][i]: v for i, v in D[n][x].items()} for x in survivors[n]] if n > 0
               else [{} for _ in survivors[0]] for n in range(top + 1)]
    small = ChainComplex([len(s) for s in survivors], small_d, name=f"red({c.name})")
    f = ChainMap(c, small, [[{pos[n][i]: v for i, v in F[n][x].items()} for x in range(c.rank(n))]
                            for n in range(top + 1)])
    g = ChainMap(small, c, [[dict(G[n][x]) for x in survivors[n]] for n in range(top + 1)])
    h = ChainMap(c, c, [[dict(H[n][x]) for x in range(c.rank(n))] for n in range(top + 1)], 1) \
        if with_homotopy else None
    return Reduction(c, small, f, g, h, survivors)


def _eliminate(n, s, t, u, alive, D, CO, F, FINV, G, H):
    # s in degree n, t in degree n-1, <d s, t> = u = +-1
    ds = dict(D[n][s])
    gs = dict(G[n][s])
    # h += g_old h_k f_old ; f update ; uses originals x with t in f(x)
    xs = list(FINV[n - 1][t])
    for x in xs:
        k = F[n - 1][x].get(t, 0)
        if not k:
            continue
        coef = k * u  # u^{-1} = u
        if H is not None:
            _axpy(H[n - 1][x], coef, gs)
        fx = F[n - 1][x]
        for i, v in ds.items():
            nv = fx.get(i, 0) - coef * v
            if nv:
                if i not in fx:
                    FINV[n - 1][i].add(x)
                fx[i] = nv
            else:
                fx.pop(i, None)
                FINV[n - 1][i].discard(x)
        fx.pop(t, None)
    FINV[n - 1][t] = set()
    # f(x)[s] dropped for degree-n originals
    for x in FINV[n][s]:
        F[n][x].pop(s, None)
    FINV[n][s] = set()
    # g and d updates for degree-n cells y with <d y, t> = a
    cof = dict(CO[n - 1][t])
    for y, a in cof.items():
        if y == s:
            continue
        coef = a * u
        _axpy(G[n][y], -coef, gs)
        dy = D[n][y]
        for i, v in ds.items():
            nv = dy.get(i, 0) - coef * v
            if nv:
                dy[i] = nv
                CO[n - 1][i][y] = nv
            else:
                dy.pop(i, None)
                CO[n - 1][i].pop(y, None)
    # remove s and t
    for i in ds:
        CO[n - 1][i].pop(s, None)
    for i in list(D[n - 1][t]) if n - 1 > 0 else []:
        CO[n - 2][i].pop(t, None)
    if n + 1 < len(D):
        for z in list(CO[n][s]):
            D[n + 1][z].pop(s, None)
    CO[n][s] = {} if n < len(CO) else None
    D[n][s] = {}
    if n - 1 > 0:
        D[n - 1][t] = {}
    CO[n - 1][t] = {}
    alive[n].discard(s)
    alive[n - 1].discard(t)


def compose_reductions(r1: Reduction, r2: Reduction) -> Reduction:
    """big -> mid (r1) followed by mid -> small (r2)."""
    f = r2.f.compose(r1.f)
    g = r1.g.compose(r2.g)
    h = None
    if r1.h is not None and r2.h is not None:
        h = r1.h + r1.g.compose(r2.h.compose(r1.f))
    return Reduction(r1.big, r2.small, f, g, h)


# ---------------------------------------------------------------------------
# models

@dataclass
class ChainModel:
    """A (usually reduced) chain complex with named incoming chain maps."""
    complex: ChainComplex
    ports: dict = field(default_factory=dict)
    manifest: object = None
    base: ChainMap = None

    def homology(self):
        return self.complex.homology()

    def check_ports(self) -> dict:
        return {k: p.is_chain_map() for k, p in self.ports.items()}


def model_from(c, ports=None, manifest=None, reduce_it=True) -> ChainModel:
    """Model of an explicit complex; ``ports`` maps names to chain maps into
    ``chains_of(c)`` (or cubical maps into ``c``)."""
    cc = chains_of(c)
    base = ChainMap(point_complex(), cc, [[{getattr(c, "basepoint", 0): 1}]])
    return wrap(cc, ports or {}, manifest, base, reduce_it)


def wrap(cc, ports, manifest, base, reduce_it=True) -> ChainModel:
    if not reduce_it:
        return ChainModel(cc, dict(ports), manifest, base)
    red = reduce(cc, with_homotopy=False)
    ports = {k: red.f.compose(p) for k, p in ports.items()}
    return ChainModel(red.small, ports, manifest, red.f.compose(base) if base is not None else None)


def tensor(a: ChainModel, b: ChainModel, reduce_it=True, manifest=None) -> ChainModel:
    """Tensor model; each port of one factor is paired with the other's basepoint."""
    cc, info = tensor_complex(a.complex, b.complex)
    pt = point_complex()
    ports = {}
    for k, p in a.ports.items():
        ports[k if k not in b.ports else f"left.{k}"] = tensor_maps(
            p, b.base, TensorInfo(p.src, pt), info, p.src, cc)
    for k, q in b.ports.items():
        ports[k if k not in a.ports else f"right.{k}"] = tensor_maps(
            a.base, q, TensorInfo(pt, q.src), info, q.src, cc)
    base = None
    if a.base is not None and b.base is not None:
        base = tensor_maps(a.base, b.base, TensorInfo(pt, pt), info, pt, cc)
    return wrap(cc, ports, manifest, base, reduce_it)


def mapping_cone(phi: ChainMap):
    """Cone(phi) = B + A[-1], d(a) = phi(a) - d(a). Returns complex and the B inclusion."""
    a, b = phi.src, phi.dst
    top = max(b.top, a.top + 1)
    ranks = [b.rank(n) + a.rank(n - 1) for n in range(top + 1)]
    d = []
    for n in range(top + 1):
        cols = [dict(b.d[n][j]) if n > 0 and n <= b.top else {} for j in range(b.rank(n))]
        for j in range(a.rank(n - 1)):
            col = dict(phi.image(n - 1, j))
            if n - 1 > 0:
                off = b.rank(n - 1)
                for i, v in a.d[n - 1][j].items():
                    col[off + i] = -v
            cols.append(col)
        d.append(cols)
    cc = ChainComplex(ranks, d)
    inc = ChainMap(b, cc, [[{j: 1} for j in range(b.rank(n))] for n in range(b.top + 1)])
    return cc, inc


def direct_sum_complex(a: ChainComplex, b: ChainComplex):
    top = max(a.top, b.top)
    ranks = [a.rank(n) + b.rank(n) for n in range(top + 1)]
    d = []
    for n in range(top + 1):
        cols = [dict(a.d[n][j]) if n > 0 else {} for j in range(a.rank(n))]
        off = a.rank(n - 1)
        cols += [{off + i: v for i, v in b.d[n][j].items()} if n > 0 else {} for j in range(b.rank(n))]
        d.append(cols)
    cc = ChainComplex(ranks, d)
    ia = ChainMap(a, cc, [[{j: 1} for j in range(a.rank(n))] for n in range(a.top + 1)])
    ib = ChainMap(b, cc, [[{a.rank(n) + j: 1} for j in range(b.rank(n))] for n in range(b.top + 1)])
    return cc, ia, ib


def cone_of_gluing(locus: ChainModel, left: ChainModel, right: ChainModel, port_left: ChainMap,
                   port_right: ChainMap, reduce_it=True, manifest=None) -> ChainModel:
    """Homology model of left U_locus right: the cone of (pL, -pR)."""
    for nm, p in (("left", port_left), ("right", port_right)):
        if not p.is_chain_map():
            raise ValueError(f"{nm} port is not a chain map")
    s, il, ir = direct_sum_complex(left.complex, right.complex)
    phi = il.compose(port_left) - ir.compose(port_right)
    cc, inc = mapping_cone(phi)
    to_l = inc.compose(il)
    to_r = inc.compose(ir)
    ports = {"left": to_l, "right": to_r}
    for k, p in left.ports.items():
        ports.setdefault(k, to_l.compose(p))
    for k, p in right.ports.items():
        ports.setdefault(k, to_r.compose(p))
    base = to_l.compose(left.base) if left.base is not None else None
    return wrap(cc, ports, manifest, base, reduce_it)


def cylinder_model(f: ChainMap, reduce_it=True, manifest=None, source_base=None) -> ChainModel:
    """Algebraic mapping cylinder of f: K -> T with ports 'source' (K) and 'target' (T)."""
    if not f.is_chain_map():
        raise ValueError("f is not a chain map")
    k, t = f.src, f.dst
    top = max(t.top, k.top + 1)
    # basis: T, then K (level 0), then sK
    ranks = [t.rank(n) + k.rank(n) + k.rank(n - 1) for n in range(top + 1)]
    d = []
    for n in range(top + 1):
        cols = [dict(t.d[n][j]) if 0 < n <= t.top else {} for j in range(t.rank(n))]
        offk = t.rank(n - 1)
        cols += [{offk + i: v for i, v in k.d[n][j].items()} if 0 < n <= k.top else {}
                 for j in range(k.rank(n))]
        for j in range(k.rank(n - 1)):
            col = dict(f.image(n - 1, j))               # phi(k)
            _axpy(col, -1, {t.rank(n - 1) + j: 1})      # - k
            if n - 1 > 0:
                offs = t.rank(n - 1) + k.rank(n - 1)
                for i, v in k.d[n - 1][j].items():      # - s(dk)
                    col[offs + i] = col.get(offs + i, 0) - v
            cols.append(col)
        d.append(cols)
    cc = ChainComplex(ranks, d)
    to_t = ChainMap(t, cc, [[{j: 1} for j in range(t.rank(n))] for n in range(t.top + 1)])
    to_k = ChainMap(k, cc, [[{t.rank(n) + j: 1} for j in range(k.rank(n))] for n in range(k.top + 1)])
    base = to_t.compose(source_base) if source_base is not None else None
    return wrap(cc, {"source": to_k, "target": to_t}, manifest, base, reduce_it)


# ---------------------------------------------------------------------------
# strict pushouts along basis embeddings

def monomial_injective(f: ChainMap) -> bool:
    """Each basis element goes to +-(a distinct basis element)."""
    for row in f.cols:
        seen = set()
        for img in row:
            if len(img) != 1:
                return False
            (i, v), = img.items()
            if v not in (1, -1) or i in seen:
                return False
            seen.add(i)
    return True


def pushout_chains(locus: ChainComplex, left: ChainComplex, right: ChainComplex,
                   f_left: ChainMap, f_right: ChainMap):
    """(left + right) / (f_left(a) = f_right(a)); both maps must be basis embeddings.

    Returns (complex, into_left_map, into_right_map); left basis comes first.
    """
    if not (monomial_injective(f_left) and monomial_injective(f_right)):
        raise ValueError("strict pushout needs basis embeddings")
    top = max(left.top, right.top)
    # right basis element -> signed left basis element, or new index
    rmap = []
    ranks = []
    for n in range(top + 1):
        ident = {}
        for j in range(locus.rank(n)):
            (r, s), = f_right.cols[n][j].items()
            (l, t), = f_left.cols[n][j].items()
            ident[r] = {l: s * t}
        row = []
        k = left.rank(n)
        for r in range(right.rank(n)):
            if r in ident:
                row.append(ident[r])
            else:
                row.append({k: 1})
                k += 1
        rmap.append(row)
        ranks.append(k)
    d = []
    for n in range(top + 1):
        cols = [dict(left.d[n][j]) if 0 < n <= left.top else {} for j in range(left.rank(n))]
        for r in range(right.rank(n)):
            img = rmap[n][r]
            (i, _), = img.items()
            if i >= left.rank(n):
                col = {}
                if n > 0:
                    for a, v in right.d[n][r].items():
                        _axpy(col, v, rmap[n - 1][a])
                cols.append(col)
        d.append(cols)
    out = ChainComplex(ranks, d)
    il = ChainMap(left, out, [[{j: 1} for j in range(left.rank(n))] for n in range(left.top + 1)])
    ir = ChainMap(right, out, [rmap[n] for n in range(right.top + 1)])
    return out, il, ir


def induced_from_pushout(out: ChainComplex, il: ChainMap, ir: ChainMap, g_left: ChainMap,
                         g_right: ChainMap, target: ChainComplex) -> ChainMap:
    """The map out of a strict pushout restricting to g_left and g_right."""
    cols = [[None] * r for r in out.ranks]
    for src, inc in ((g_left, il), (g_right, ir)):
        for n, row in enumerate(inc.cols):
            for j, img in enumerate(row):
                (i, s), = img.items()
                val = _scale(s, src.image(n, j))
                if cols[n][i] is None:
                    cols[n][i] = val
                elif cols[n][i] != val:
                    raise ValueError(f"maps disagree on the gluing locus (degree {n}, cell {i})")
    cols = [[c if c is not None else {} for c in row] for row in cols]
    return ChainMap(out, target, cols)


def slice_chain(a: ChainComplex, t: ChainComplex, vertex: int, info: TensorInfo, dst, side="right"):
    if side == "right":
        cols = [[{info.id(n, i, 0, vertex): 1} for i in range(a.rank(n))] for n in range(a.top + 1)]
    else:
        cols = [[{info.id(0, vertex, n, i): 1} for i in range(a.rank(n))] for n in range(a.top + 1)]
    return ChainMap(a, dst, cols)


def assoc_chain(ab: TensorInfo, ab_c: TensorInfo, bc: TensorInfo, a_bc: TensorInfo, src, dst):
    """(A (x) B) (x) C -> A (x) (B (x) C); no signs arise."""
    a, b, c = ab.a, ab.b, bc.b
    cols = [[None] * r for r in src.ranks]
    for p in range(a.top + 1):
        for q in range(b.top + 1):
            for r in range(c.top + 1):
                for i in range(a.rank(p)):
                    for j in range(b.rank(q)):
                        s = ab.id(p, i, q, j)
                        for k in range(c.rank(r)):
                            cols[p + q + r][ab_c.id(p + q, s, r, k)] = {
                                a_bc.id(p, i, q + r, bc.id(q, j, r, k)): 1}
    return ChainMap(src, dst, cols)
