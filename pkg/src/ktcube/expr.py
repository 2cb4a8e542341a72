"""Construction expressions and their two evaluations.

Object nodes: Atom, Product, Glue, Cylinder.  Map nodes: LoopMap, BaseMap,
Inclusion, ProductMap, Identity, Compose, Slice.  ``evaluate_explicit``
materializes cubical complexes; ``evaluate_chain`` folds the tree into reduced
chain models, gluing by algebraic mapping cones.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import chains as ch
from . import complex as cx
from .homology import HomologyResult, homology


# ---------------------------------------------------------------------------
# nodes

class Node:
    kind = "node"

    def key(self):
        return id(self)

    def describe(self):
        return {"op": self.kind}


class Atom(Node):
    kind = "atom"

    def __init__(self, c: cx.CubicalComplex, name=None):
        self.c = c
        self.name = name or c.name

    def describe(self):
        return {"op": "atom", "name": self.name, "cells": self.c.counts()}


class Product(Node):
    kind = "product"
    _interned = {}

    def __new__(cls, a, b):
        k = (id(a), id(b))
        hit = cls._interned.get(k)
        if hit is not None and hit.a is a and hit.b is b:
            return hit
        obj = super().__new__(cls)
        obj.a, obj.b = a, b
        cls._interned[k] = obj
        return obj

    def __init__(self, a, b):
        pass

    def describe(self):
        return {"op": "product", "args": [self.a.describe(), self.b.describe()]}


class Glue(Node):
    kind = "glue"

    def __init__(self, locus, left, right, f_left, f_right, name=""):
        self.locus, self.left, self.right = locus, left, right
        self.f_left, self.f_right = f_left, f_right
        self.name = name

    def describe(self):
        return {"op": "glue", "name": self.name, "locus": self.locus.describe(),
                "left": self.left.describe(), "right": self.right.describe(),
                "maps": [self.f_left.describe(), self.f_right.describe()]}


class Cylinder(Node):
    kind = "cylinder"

    def __init__(self, f, name=""):
        self.f = f
        self.name = name

    def describe(self):
        return {"op": "cylinder", "name": self.name, "map": self.f.describe()}


class MapNode(Node):
    src: Node
    dst: Node


class LoopMap(MapNode):
    kind = "loop"

    def __init__(self, circle: Atom, target: Node, loop: str):
        self.src, self.dst, self.loop = circle, target, loop

    def describe(self):
        return {"op": "loop", "loop": self.loop}


class BaseMap(MapNode):
    kind = "base"

    def __init__(self, point: Atom, target: Node):
        self.src, self.dst = point, target


class Inclusion(MapNode):
    kind = "inclusion"

    def __init__(self, node: Node, side: str):
        self.node, self.side = node, side
        self.dst = node
        if isinstance(node, Glue):
            self.src = {"left": node.left, "right": node.right}[side]
        else:
            self.src = {"source": node.f.src, "target": node.f.dst}[side]

    def describe(self):
        return {"op": "inclusion", "side": self.side}


class ProductMap(MapNode):
    kind = "product_map"

    def __init__(self, f, g):
        self.f, self.g = f, g
        self.src = Product(f.src, g.src)
        self.dst = Product(f.dst, g.dst)

    def describe(self):
        return {"op": "product_map", "args": [self.f.describe(), self.g.describe()]}


class Identity(MapNode):
    kind = "identity"

    def __init__(self, node):
        self.src = self.dst = node


class Compose(MapNode):
    kind = "compose"

    def __init__(self, g, f):
        if f.dst is not g.src:
            raise ValueError("maps are not composable")
        self.g, self.f = g, f
        self.src, self.dst = f.src, g.dst

    def describe(self):
        return {"op": "compose", "args": [self.g.describe(), self.f.describe()]}


class Slice(MapNode):
    """a -> a x t (side right) or t x a (side left) at a vertex of the atom t."""
    kind = "slice"

    def __init__(self, a, t: Atom, vertex=0, side="right"):
        self.a, self.t, self.vertex, self.side = a, t, vertex, side
        self.src = a
        self.dst = Product(a, t) if side == "right" else Product(t, a)

    def describe(self):
        return {"op": "slice", "vertex": self.vertex, "side": self.side}


# ---------------------------------------------------------------------------
# explicit evaluation

class ExplicitEval:
    def __init__(self, budget=None):
        self.budget = budget
        self.memo = {}
        self.parts = {}

    def _guard(self, size, what):
        if self.budget is not None and size > self.budget:
            from .backends import BudgetExceeded
            raise BudgetExceeded(what, size, self.budget)

    def __call__(self, node):
        k = id(node)
        if k in self.memo:
            return self.memo[k][1]
        val = self._eval(node)
        self.memo[k] = (node, val)
        return val

    def size_estimate(self, node):
        if isinstance(node, Atom):
            return node.c.size()
        if isinstance(node, Product):
            return self.size_estimate(node.a) * self.size_estimate(node.b)
        if isinstance(node, Glue):
            return self.size_estimate(node.left) + self.size_estimate(node.right)
        if isinstance(node, Cylinder):
            return 2 * self.size_estimate(node.f.src) + self.size_estimate(node.f.dst)
        raise TypeError(node)

    def _eval(self, n):
        if isinstance(n, Atom):
            return n.c
        if isinstance(n, Product):
            self._guard(self.size_estimate(n), "product")
            return cx.product(self(n.a), self(n.b))
        if isinstance(n, Glue):
            self._guard(self.size_estimate(n), n.name or "glue")
            res = cx.pushout(self(n.left), self(n.right), self(n.locus), self(n.f_left), self(n.f_right),
                             require_injective=True, name=n.name)
            self.parts[id(n)] = {"left": res.left, "right": res.right}
            return res.complex
        if isinstance(n, Cylinder):
            self._guard(self.size_estimate(n), n.name or "cylinder")
            res = cx.mapping_cylinder(self(n.f), name=n.name)
            self.parts[id(n)] = {"source": res.source, "target": res.target}
            return res.complex
        if isinstance(n, LoopMap):
            t = self(n.dst)
            return cx.loop_map(t, t.loops[n.loop], self(n.src))
        if isinstance(n, BaseMap):
            t = self(n.dst)
            return cx.CubicalMap(self(n.src), t, [[(t.basepoint, ())]])
        if isinstance(n, Inclusion):
            self(n.node)
            return self.parts[id(n.node)][n.side]
        if isinstance(n, ProductMap):
            return cx.product_map(self(n.f), self(n.g), self(n.src), self(n.dst))
        if isinstance(n, Identity):
            return cx.identity_map(self(n.src))
        if isinstance(n, Compose):
            return self(n.g).compose(self(n.f))
        if isinstance(n, Slice):
            return cx.slice_map(self(n.a), self(n.t), n.vertex, self(n.dst), n.side)
        raise TypeError(n)


# ---------------------------------------------------------------------------
# chain evaluation

@dataclass
class ChainVal:
    small: ch.ChainComplex
    f: ch.ChainMap                    # big -> small
    g: ch.ChainMap                    # small -> big
    big: ch.ChainComplex
    ports: dict = field(default_factory=dict)   # loop name -> map from std circle
    base: ch.ChainMap = None
    parts: dict = field(default_factory=dict)
    info: object = None

    def homology(self) -> HomologyResult:
        return self.small.homology()


_STD = {}


def std_circle(k):
    if k not in _STD:
        _STD[k] = ch.chains_of(cx.make_circle(k))
    return _STD[k]


class ChainEval:
    def __init__(self, reduce=True):
        self.reduce = reduce
        self.memo = {}

    def __call__(self, node):
        k = id(node)
        if k in self.memo:
            return self.memo[k][1]
        val = self._eval(node)
        self.memo[k] = (node, val)
        return val

    def _wrap(self, big, ports, base, parts=None, info=None):
        if self.reduce:
            red = ch.reduce(big, with_homotopy=False)
            f, g, small = red.f, red.g, red.small
        else:
            f = g = ch.identity(big)
            small = big
        ports = {k: f.compose(p) for k, p in ports.items()}
        parts = {k: f.compose(p) for k, p in (parts or {}).items()}
        return ChainVal(small, f, g, big, ports, f.compose(base) if base is not None else None,
                        parts, info)

    def _eval(self, n):
        if isinstance(n, Atom):
            big = ch.chains_of(n.c)
            ports = {}
            for nm, lp in n.c.loops.items():
                lm = cx.loop_map(n.c, lp)
                ports[nm] = ch.map_from_cubical(lm, std_circle(len(lp)), big)
            base = ch.ChainMap(ch.point_complex(), big, [[{n.c.basepoint: 1}]])
            return self._wrap(big, ports, base)
        if isinstance(n, Product):
            a, b = self(n.a), self(n.b)
            big, info = ch.tensor_complex(a.small, b.small)
            pt = ch.point_complex()
            ports = {}
            for k, p in a.ports.items():
                ports[k if k not in b.ports else f"left.{k}"] = ch.tensor_maps(
                    p, b.base, ch.TensorInfo(p.src, pt), info, p.src, big)
            for k, q in b.ports.items():
                ports[k if k not in a.ports else f"right.{k}"] = ch.tensor_maps(
                    a.base, q, ch.TensorInfo(pt, q.src), info, q.src, big)
            base = ch.tensor_maps(a.base, b.base, ch.TensorInfo(pt, pt), info, pt, big)
            return self._wrap(big, ports, base, info=info)
        if isinstance(n, Glue):
            left, right = self(n.left), self(n.right)
            fl, fr = self(n.f_left), self(n.f_right)
            s, il, ir = ch.direct_sum_complex(left.small, right.small)
            big, inc = ch.mapping_cone(il.compose(fl) - ir.compose(fr))
            to_l, to_r = inc.compose(il), inc.compose(ir)
            ports = {k: to_l.compose(p) for k, p in left.ports.items()}
            for k, p in right.ports.items():
                ports.setdefault(k, to_r.compose(p))
            return self._wrap(big, ports, to_l.compose(left.base), {"left": to_l, "right": to_r})
        if isinstance(n, Cylinder):
            f = self(n.f)
            m = ch.cylinder_model(f, reduce_it=False)
            big = m.complex
            to_t, to_k = m.ports["target"], m.ports["source"]
            tgt = self(n.f.dst)
            ports = {k: to_t.compose(p) for k, p in tgt.ports.items()}
            return self._wrap(big, ports, to_t.compose(tgt.base), {"source": to_k, "target": to_t})
        if isinstance(n, LoopMap):
            t = self(n.dst)
            circ = self(n.src)
            return t.ports[n.loop].compose(circ.g)
        if isinstance(n, BaseMap):
            return self(n.dst).base.compose(self(n.src).g)
        if isinstance(n, Inclusion):
            return self(n.node).parts[n.side]
        if isinstance(n, ProductMap):
            f, g = self(n.f), self(n.g)
            src, dst = self(n.src), self(n.dst)
            t = ch.tensor_maps(f, g, src.info, dst.info, src.big, dst.big)
            return dst.f.compose(t.compose(src.g))
        if isinstance(n, Identity):
            return ch.identity(self(n.src).small)
        if isinstance(n, Compose):
            return self(n.g).compose(self(n.f))
        if isinstance(n, Slice):
            a, t, prod = self(n.a), self(n.t), self(n.dst)
            vec = t.f.apply(0, {n.vertex: 1})
            info = prod.info
            cols = []
            for d in range(a.small.top + 1):
                row = []
                for i in range(a.small.rank(d)):
                    if n.side == "right":
                        row.append(info.pair(d, {i: 1}, d, vec, 0))
                    else:
                        row.append(info.pair(d, vec, 0, {i: 1}, d))
                cols.append(row)
            return prod.f.compose(ch.ChainMap(a.small, prod.big, cols))
        raise TypeError(n)


# ---------------------------------------------------------------------------
# public API

def evaluate(expr: Node, reduce=True) -> ChainVal:
    return ChainEval(reduce)(expr)


@dataclass
class CrossReport:
    chain: HomologyResult
    explicit: HomologyResult = None
    cells: int = None
    skipped: str = ""

    @property
    def ok(self):
        return self.explicit is None or self.chain == self.explicit

    def to_json(self):
        return {"chain": self.chain.to_json(),
                "explicit": self.explicit.to_json() if self.explicit is not None else None,
                "cells": self.cells, "skipped": self.skipped, "ok": self.ok}


def cross_validate(expr: Node, budget=10 ** 5) -> CrossReport:
    from .backends import BudgetExceeded
    chain = evaluate(expr).homology()
    ev = ExplicitEval(budget)
    try:
        c = ev(expr)
    except BudgetExceeded as exc:
        return CrossReport(chain, None, exc.size, str(exc))
    return CrossReport(chain, homology(c), c.size())


# ---------------------------------------------------------------------------
# random expressions

def _atom_pool(rng):
    pool = []
    for k in (3, 4, 5, 6):
        pool.append(lambda k=k: cx.make_circle(k))
    pool.append(cx.make_square)
    pool.append(lambda: cx.grid_complex([(0, 0), (1, 0), (0, 1)]))
    pool.append(lambda: cx.grid_complex([(0, 0), (1, 0), (2, 0), (0, 1), (2, 1), (0, 2), (1, 2), (2, 2)]))
    pool.append(lambda: cx.product(cx.make_circle(3), cx.make_circle(4)))
    pool.append(lambda: cx.make_path(rng.randint(1, 4)))
    pool.append(projective_plane)
    pool.append(klein_bottle)
    return pool


def projective_plane():
    from .disks import PresentationData, TesselatedDisk, parse_word, presentation_complex
    pres = PresentationData.parse("a", ["aa"])
    return presentation_complex(pres, [TesselatedDisk(frozenset({(0, 0)}), parse_word("aa"))], name="RP2")


def klein_bottle():
    from .disks import PresentationData, TesselatedDisk, parse_word, presentation_complex
    pres = PresentationData.parse("ab", ["abaB"])
    disk = TesselatedDisk(frozenset({(0, 0), (1, 0), (2, 0)}), parse_word("abaB"))
    return presentation_complex(pres, [disk], name="K")


def random_expression(rng: random.Random, depth=3, max_cells=500):
    """A random tree of products, loop gluings, wedges and cylinders whose
    leaves are small complexes and whose explicit size stays near ``max_cells``."""
    pool = _atom_pool(rng)
    circles = {}

    def circle(k):
        if k not in circles:
            circles[k] = Atom(cx.make_circle(k), f"S1_{k}")
        return circles[k]

    point = Atom(cx.make_point())
    ev = ExplicitEval()

    def leaf():
        return Atom(rng.choice(pool)())

    def loops_of(node):
        # loop names with lengths, read from an explicit evaluation
        c = ev(node)
        return {k: len(v) for k, v in c.loops.items()}

    def build(d):
        if d == 0:
            return leaf()
        op = rng.choice(["product", "wedge", "glue", "cylinder", "leaf"])
        if op == "leaf":
            return leaf()
        a = build(d - 1)
        if op == "cylinder":
            la = loops_of(a)
            if not la:
                return a
            nm = rng.choice(sorted(la))
            return Cylinder(LoopMap(circle(la[nm]), a, nm), name="cyl")
        b = build(d - 1)
        if ev.size_estimate(a) * (ev.size_estimate(b) if op == "product" else 1) > max_cells:
            op = "wedge"
        if op == "product":
            return Product(a, b)
        if op == "glue":
            la, lb = loops_of(a), loops_of(b)
            common = sorted({(n1, n2) for n1 in la for n2 in lb if la[n1] == lb[n2]})
            if common:
                n1, n2 = rng.choice(common)
                return Glue(circle(la[n1]), a, b, LoopMap(circle(la[n1]), a, n1),
                            LoopMap(circle(la[n1]), b, n2), name="glue")
        return Glue(point, a, b, BaseMap(point, a), BaseMap(point, b), name="wedge")

    return build(depth)
