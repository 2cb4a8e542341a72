"""Two interchangeable evaluators for the constructions: explicit cubical
complexes, or integral chain complexes (with reduced atoms).

Both expose the same operations so a construction is written once.  Products
are memoized per backend instance so that equal expressions give identical
objects, which keeps induced maps composable.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import chains as ch
from . import complex as cx
from . import cubes
from .homology import homology


class BudgetExceeded(RuntimeError):
    def __init__(self, what, size, budget):
        super().__init__(f"{what}: {size} cells exceeds the remaining budget of {budget}")
        self.what, self.size, self.budget = what, size, budget


@dataclass
class Glued:
    obj: object
    left: object
    right: object
    locus: object = None


class ExplicitBackend:
    name = "explicit"

    def __init__(self, budget=None, check_maps=False, check_convex=False):
        self.budget = budget
        self.check_maps = check_maps
        self.check_convex = check_convex
        self._prod = {}
        self._cache = {}
        self.total = 0
        self.convexity = []      # (label, CurvatureReport) of every checked locus

    # --- bookkeeping
    def size(self, obj):
        return obj.size()

    def ranks(self, obj):
        return obj.counts()

    def dim(self, obj):
        return obj.dim

    def _guard(self, size, what):
        # the budget bounds every cell materialized by this backend, not just
        # the object at hand: memoized intermediates stay alive
        if self.budget is not None and self.total + size > self.budget:
            raise BudgetExceeded(what, size, self.budget - self.total)
        self.total += size

    def homology(self, obj):
        return homology(obj)

    # --- objects
    def atom(self, c):
        self._guard(c.size(), c.name or "atom")
        return c

    def points(self, k):
        return cx.make_points(k, name=f"pts{k}")

    def path(self, k):
        if ("path", k) not in self._cache:
            self._cache[("path", k)] = cx.make_path(k)
        return self._cache[("path", k)]

    def circle(self, k):
        if ("circle", k) not in self._cache:
            self._cache[("circle", k)] = cx.make_circle(k)
        return self._cache[("circle", k)]

    def point_map(self, src, dst, sigma):
        return cx.CubicalMap(src, dst, [[(sigma[i], ()) for i in range(src.count(0))]])

    def cone_map(self, src, dst, sigma):
        """Cone on a map of point sets (apex to apex)."""
        k = len(sigma)
        if k == 0:
            return cx.CubicalMap(src, dst, [[(0, ())]])
        return cx.CubicalMap(src, dst, [[(0, ())] + [(sigma[i] + 1, ()) for i in range(k)],
                                        [(sigma[i], (0,)) for i in range(k)]])

    def product(self, a, b):
        key = (id(a), id(b))
        hit = self._prod.get(key)
        if hit is not None:
            return hit[2]
        self._guard(a.size() * b.size(), f"{a.name} x {b.name}")
        p = cx.product(a, b)
        self._prod[key] = (a, b, p)
        return p

    def cone_points(self, y):
        c = cx.cone_over_points(y)
        incl = cx.CubicalMap(y, c, [[(i + 1, ()) for i in range(y.count(0))]])
        return c, incl

    # --- maps
    def identity(self, a):
        return cx.identity_map(a)

    def compose(self, g, f):
        return g.compose(f)

    def product_map(self, f, g):
        return cx.product_map(f, g, self.product(f.src, g.src), self.product(f.dst, g.dst))

    def slice(self, a, t, vertex, side="right"):
        prod = self.product(a, t) if side == "right" else self.product(t, a)
        return cx.slice_map(a, t, vertex, prod, side)

    def assoc(self, a, b, c):
        return cx.assoc_map(a, b, c, self.product(self.product(a, b), c),
                            self.product(a, self.product(b, c)))

    def wrap(self, path, circle):
        """Unit-speed map of a k-edge path once around a k-edge circle."""
        k = circle.count(1)
        return cx.CubicalMap(path, circle, [[(i % k, ()) for i in range(path.count(0))],
                                            [(i % k, (0,)) for i in range(path.count(1))]])

    def loop(self, target, loop):
        return cx.loop_map(target, loop)

    def maps_equal(self, f, g):
        return f.images == g.images

    def is_embedding(self, f):
        return f.is_injective() and not f.check(limit=1)

    # --- gluing
    def pushout(self, locus, left, right, f_left, f_right, name=""):
        self._guard(left.size() + right.size(), name or "pushout")
        if self.check_maps:
            for m in (f_left, f_right):
                if m.check(limit=1):
                    raise cx.ComplexError(f"{name}: gluing map is not cellular")
        if self.check_convex:
            from .links import check_locally_convex
            for side, m in (("left", f_left), ("right", f_right)):
                rep = check_locally_convex(m)
                self.convexity.append((f"{name}/{side}", rep))
        res = cx.pushout(left, right, locus, f_left, f_right, require_injective=True, name=name)
        return Glued(res.complex, res.left, res.right, locus)

    def induced(self, glued, g_left, g_right, target):
        out = glued.obj
        images = [[None] * out.count(n) for n in range(len(out.cells))]
        for g, inc in ((g_left, glued.left), (g_right, glued.right)):
            for n, row in enumerate(inc.images):
                for i, (t, iso) in enumerate(row):
                    d, diso = g.images[n][i]
                    val = (d, cubes.compose(diso, cubes.invert(iso)))
                    if images[n][t] is None:
                        images[n][t] = val
                    elif images[n][t] != val:
                        raise cx.ComplexError("maps disagree on the gluing locus", witness=(n, t))
        return cx.CubicalMap(out, target, images)

    def glue_map(self, g1, g2, f_left, f_right):
        return self.induced(g1, g2.left.compose(f_left), g2.right.compose(f_right), g2.obj)

    def cylinder(self, f, name=""):
        self._guard(2 * f.src.size() + f.dst.size(), name or "cylinder")
        res = cx.mapping_cylinder(f, name=name)
        return res.complex, res.source, res.target

    def from_explicit(self, c, maps=None):
        return c, maps or {}


class ChainBackend:
    """Cellular chains; atoms may be replaced by reduced models."""
    name = "chain"

    def __init__(self, budget=None):
        self.budget = budget
        self._prod = {}
        self._cache = {}

    def size(self, obj):
        return obj.size()

    def ranks(self, obj):
        return list(obj.ranks)

    def dim(self, obj):
        return obj.top

    def homology(self, obj):
        return obj.homology()

    def atom(self, c):
        return ch.chains_of(c)

    def points(self, k):
        return ch.ChainComplex([k], name=f"pts{k}")

    def path(self, k):
        key = ("path", k)
        if key not in self._cache:
            self._cache[key] = ch.chains_of(cx.make_path(k))
        return self._cache[key]

    def circle(self, k):
        key = ("circle", k)
        if key not in self._cache:
            self._cache[key] = ch.chains_of(cx.make_circle(k))
        return self._cache[key]

    def product(self, a, b):
        key = (id(a), id(b))
        hit = self._prod.get(key)
        if hit is not None:
            return hit[2]
        p, info = ch.tensor_complex(a, b)
        self._prod[key] = (a, b, p, info)
        return p

    def _info(self, a, b):
        self.product(a, b)
        return self._prod[(id(a), id(b))][3]

    def cone_points(self, y):
        k = y.rank(0)
        c = ch.chains_of(cx.cone_over_points(cx.make_points(k)))
        return c, ch.ChainMap(y, c, [[{i + 1: 1} for i in range(k)]])

    def point_map(self, src, dst, sigma):
        return ch.ChainMap(src, dst, [[{sigma[i]: 1} for i in range(src.rank(0))]])

    def cone_map(self, src, dst, sigma):
        k = len(sigma)
        cols = [[{0: 1}] + [{sigma[i] + 1: 1} for i in range(k)]]
        if k:
            cols.append([{sigma[i]: 1} for i in range(k)])
        return ch.ChainMap(src, dst, cols)

    def identity(self, a):
        return ch.identity(a)

    def compose(self, g, f):
        return g.compose(f)

    def product_map(self, f, g):
        src = self.product(f.src, g.src)
        dst = self.product(f.dst, g.dst)
        return ch.tensor_maps(f, g, self._info(f.src, g.src), self._info(f.dst, g.dst), src, dst)

    def slice(self, a, t, vertex, side="right"):
        if side == "right":
            dst = self.product(a, t)
            return ch.slice_chain(a, t, vertex, self._info(a, t), dst, side)
        dst = self.product(t, a)
        return ch.slice_chain(a, t, vertex, self._info(t, a), dst, side)

    def assoc(self, a, b, c):
        ab = self.product(a, b)
        bc = self.product(b, c)
        src = self.product(ab, c)
        dst = self.product(a, bc)
        return ch.assoc_chain(self._info(a, b), self._info(ab, c), self._info(b, c),
                              self._info(a, bc), src, dst)

    def wrap(self, path, circle):
        k = circle.rank(1)
        return ch.ChainMap(path, circle, [[{i % k: 1} for i in range(path.rank(0))],
                                          [{i % k: 1} for i in range(path.rank(1))]])

    def maps_equal(self, f, g):
        return f == g

    def is_embedding(self, f):
        return ch.monomial_injective(f) and f.is_chain_map()

    def pushout(self, locus, left, right, f_left, f_right, name=""):
        out, il, ir = ch.pushout_chains(locus, left, right, f_left, f_right)
        out.name = name
        return Glued(out, il, ir, locus)

    def induced(self, glued, g_left, g_right, target):
        return ch.induced_from_pushout(glued.obj, glued.left, glued.right, g_left, g_right, target)

    def glue_map(self, g1, g2, f_left, f_right):
        return self.induced(g1, g2.left.compose(f_left), g2.right.compose(f_right), g2.obj)

    def cylinder(self, f, name=""):
        m = ch.cylinder_model(f, reduce_it=False)
        m.complex.name = name
        return m.complex, m.ports["source"], m.ports["target"]
