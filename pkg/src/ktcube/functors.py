"""The functors L, M : S(X) -> C(n), built by induction over the positive
simplices of X.

Objects are only built for the subcomplexes that are asked for, plus whatever
the induction needs to reach them (intersections with earlier skeleta and the
boundaries of attached simplices).  Both backends run the same code: explicit
cube complexes, or chain complexes with the kit atoms reduced.  In the chain
backend every gluing is a strict pushout along signed-monomial injections, so
naturality squares are checked as exact equalities in either mode.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from itertools import combinations

from . import chains as ch
from . import io as kio
from .backends import BudgetExceeded, ChainBackend, ExplicitBackend
from .complex import SimplicialComplex
from .expr import ChainEval, ExplicitEval
from .homology import homology

log = logging.getLogger(__name__)

# duality-dimension increments per attached simplex: L1, L2, L3, L-bar
STEPS = (("L1", 3), ("L2", 2), ("L3", 2), ("Lbar", 3))


@dataclass
class KitView:
    """Kit atoms living inside one backend."""
    backend: object
    X2: object
    X3: object
    S1: object
    emb: object          # backend.product(X2, S1) -> X3
    P4: object
    wrap: object         # P4 -> S1, once around
    k2: object           # X2 -> X3
    dims: tuple = (2, 3)
    real: bool = False


def kit_view(kit, backend) -> KitView:
    dims = (kit_dim(kit.X2), kit_dim(kit.X3))
    if isinstance(backend, ExplicitBackend):
        ev = ExplicitEval()
        x2, s1, x3 = ev(kit.X2), ev(kit.S1), ev(kit.X3)
        p = ev(kit.X2xS1)
        backend._prod[(id(x2), id(s1))] = (x2, s1, p)
        emb = ev(kit.emb)
    else:
        payload = kio.cached_json(kit_fingerprint(kit), lambda: _chain_kit_payload(kit))
        x2, x3, s1 = (kio.chain_from_json(payload[k]) for k in ("X2", "X3", "S1"))
        emb = kio.map_from_json(payload["emb"], backend.product(x2, s1), x3)
    p4 = backend.path(4)
    wrap = backend.wrap(p4, s1)
    k2 = backend.compose(emb, backend.slice(x2, s1, 0, "right"))
    return KitView(backend, x2, x3, s1, emb, p4, wrap, k2, dims, kit.real)


def _chain_kit_payload(kit) -> dict:
    """Reduced X2 and X3 with the embedding from X2 (reduced) x S1 (cellular)."""
    ev = ChainEval()
    v2, vs, v3, vp = ev(kit.X2), ev(kit.S1), ev(kit.X3), ev(kit.X2xS1)
    x2, x3, s1 = v2.small, v3.small, vs.big
    src, info = ch.tensor_complex(x2, s1)
    lift = ch.tensor_maps(ch.identity(x2), vs.f, info, vp.info, src, vp.big)
    emb = ev(kit.emb).compose(vp.f).compose(lift)
    return {"X2": kio.chain_to_json(x2), "X3": kio.chain_to_json(x3), "S1": kio.chain_to_json(s1),
            "emb": kio.map_to_json(emb)}


def kit_fingerprint(kit) -> str:
    return "kit-" + kio.cache_key(kit.name, kio.complex_to_json(kit.X2.c), FORMAT_VERSION)


FORMAT_VERSION = 1


def kit_dim(node):
    from .expr import Atom, Product
    if isinstance(node, Atom):
        return node.c.dim
    if isinstance(node, Product):
        return kit_dim(node.a) + kit_dim(node.b)
    return max(kit_dim(node.left), kit_dim(node.right))


# ---------------------------------------------------------------------------
# planning

def boundary_of(e) -> frozenset:
    out = set()
    for k in range(1, len(e)):
        out.update(combinations(e, k))
    return frozenset(out)


def is_connected(Y) -> bool:
    verts = sorted(s[0] for s in Y if len(s) == 1)
    if not verts:
        return False
    parent = {v: v for v in verts}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v
    for s in Y:
        if len(s) == 2:
            parent[find(s[0])] = find(s[1])
    return len({find(v) for v in verts}) == 1


def label(Y) -> str:
    """Compact deterministic name of a subcomplex: its maximal simplices."""
    maximal = [s for s in Y if not any(len(t) > len(s) and set(s) <= set(t) for t in Y)]
    return "{" + ",".join("".join(map(str, s)) if all(len(str(v)) == 1 for v in s)
                          else "-".join(map(str, s)) for s in sorted(maximal, key=lambda s: (len(s), s))) + "}"


@dataclass
class Plan:
    order: list              # attached positive simplices
    skeleta: list            # skeleta[k] = subcomplex after k attachments
    families: list           # families[k] = subcomplexes built at stage k
    pairs: list              # pairs[k] = (A, B), A strictly inside B

    def to_json(self):
        return {"order": [list(e) for e in self.order],
                "families": [[label(Y) for Y in sorted(f, key=_key)] for f in self.families]}


def _key(Y):
    return (len(Y), sorted(Y))


def make_plan(X: SimplicialComplex, requested=None) -> Plan:
    order = [tuple(s) for s in X.positive()]
    full = X.full()
    skeleta = [frozenset((v,) for v in X.vertices)]
    for e in order:
        skeleta.append(skeleta[-1] | {e})
    requested = [frozenset(Y) for Y in (requested or [full])]
    fam = {Y for Y in requested if Y}
    pairs = {(a, b) for a in fam for b in fam if a < b}
    m = len(order)
    families, allpairs = [None] * (m + 1), [None] * (m + 1)
    for k in range(m, 0, -1):
        families[k], allpairs[k] = fam, pairs
        e, prev = order[k - 1], skeleta[k - 1]
        bd = boundary_of(e)
        nfam = {Y & prev for Y in fam} | {bd}
        npairs = {(a & prev, b & prev) for a, b in pairs if (a & prev) != (b & prev)}
        npairs |= {(bd, Y & prev) for Y in fam if e in Y and bd != Y & prev}
        fam, pairs = {Y for Y in nfam if Y}, {(a, b) for a, b in npairs if a}
    families[0], allpairs[0] = fam, pairs
    assert full == skeleta[-1]
    return Plan(order, skeleta, families, allpairs)


# ---------------------------------------------------------------------------
# stages

@dataclass
class Stage:
    index: int
    L: dict = field(default_factory=dict)
    M: dict = field(default_factory=dict)
    k: dict = field(default_factory=dict)      # L(Y) -> M(Y)
    Lp: dict = field(default_factory=dict)     # (A, B) -> L(A) -> L(B)
    Mp: dict = field(default_factory=dict)
    dimL: dict = field(default_factory=dict)   # geometric cube dimension
    dimM: dict = field(default_factory=dict)
    manifest: dict = field(default_factory=dict)
    duality: int = 0
    trimmed: bool = False
    partial_L: dict = None     # L3 objects, kept when the M side overflows


@dataclass
class FunctorAssignment:
    X: SimplicialComplex
    plan: Plan
    mode: str
    kit: str
    stages: list
    trim_last: bool
    failure: str = ""
    seconds: float = 0.0
    partial: Stage = None

    @property
    def final(self) -> Stage:
        return self.stages[-1]

    @property
    def complete(self) -> bool:
        return not self.failure and len(self.stages) == len(self.plan.order) + 1

    @property
    def m(self):
        return len(self.plan.order)


class FunctorBuilder:
    def __init__(self, X, kit, backend, trim_last=False, requested=None):
        self.X = X
        self.B = backend
        self.kv = kit_view(kit, backend) if not isinstance(kit, KitView) else kit
        self.kit_name = getattr(kit, "name", "view")
        self.trim_last = trim_last
        self.plan = make_plan(X, requested)

    # small helpers
    def _id(self, a):
        return self.B.identity(a)

    def _pm(self, f, g):
        return self.B.product_map(f, g)

    def _c(self, *maps):
        out = maps[-1]
        for g in reversed(maps[:-1]):
            out = self.B.compose(g, out)
        return out

    def base(self) -> Stage:
        B = self.B
        st = Stage(0)
        verts = {}
        for Y in self.plan.families[0]:
            pts = sorted(s[0] for s in Y)
            verts[Y] = pts
            st.L[Y] = B.points(len(pts))
            st.M[Y], st.k[Y] = B.cone_points(st.L[Y])
            st.dimL[Y], st.dimM[Y] = 0, 1
        for a, b in self.plan.pairs[0]:
            pos = {v: i for i, v in enumerate(verts[b])}
            sigma = [pos[v] for v in verts[a]]
            st.Lp[(a, b)] = B.point_map(st.L[a], st.L[b], sigma)
            st.Mp[(a, b)] = B.cone_map(st.M[a], st.M[b], sigma)
        return st

    def step(self, prev: Stage, k: int) -> Stage:
        B, kv = self.B, self.kv
        X2, X3, k2 = kv.X2, kv.X3, kv.k2
        d2, d3 = kv.dims
        prod, pm, I, c = B.product, self._pm, self._id, self._c
        e = self.plan.order[k - 1]
        prevX = self.plan.skeleta[k - 1]
        last = k == len(self.plan.order)
        trim = last and self.trim_last
        st = Stage(k, duality=prev.duality + (7 if trim else 10), trimmed=trim)
        self._current = st
        man = st.manifest

        def lp(a, b):
            return I(prev.L[a]) if a == b else prev.Lp[(a, b)]

        def mp(a, b):
            return I(prev.M[a]) if a == b else prev.Mp[(a, b)]

        def l2p(a, b):
            return pm(pm(lp(a, b), I(X3)), I(X2))

        def m2p(a, b):
            return pm(pm(mp(a, b), I(X3)), I(X2))

        # pieces over the boundary of e
        bd = boundary_of(e)
        Ld, Md, kd = prev.L[bd], prev.M[bd], prev.k[bd]
        Lh1 = prod(Ld, X2)
        L1e = prod(Md, X3)
        Lh2 = prod(Lh1, X2)
        L2e = prod(L1e, X2)                                   # also M2(boundary)
        i0 = pm(pm(kd, k2), I(X2))
        Mc2 = B.pushout(Lh2, prod(Lh1, X3), L2e, pm(I(Lh1), k2), i0, name="M2check(e)")
        P4 = kv.P4
        tube = prod(Lh2, P4)
        s0, s4 = B.slice(Lh2, P4, 0), B.slice(Lh2, P4, 4)
        K0 = B.pushout(Lh2, L2e, tube, i0, s0, name="K0")
        K = B.pushout(Lh2, K0.obj, L2e, c(K0.right, s4), i0, name="K")
        Lc2 = B.pushout(Lh2, tube, L2e, s4, i0, name="L2check(e)")
        wrapped = c(kv.emb, pm(I(X2), kv.wrap))              # X2 x [0,4] -> X3 along c
        on_tube = c(Mc2.left, pm(I(Lh1), wrapped), B.assoc(Lh1, X2, P4))
        phi0 = B.induced(K0, Mc2.right, on_tube, Mc2.obj)
        phi = B.induced(K, phi0, Mc2.right, Mc2.obj)
        M2e, cyl_src, _ = B.cylinder(phi, name="M2(e)")
        s_e = c(cyl_src, K.left, K0.left)                    # M2(boundary) -> M2(e)
        kappa = B.induced(Lc2, c(K.left, K0.right), K.right, K.obj)
        into_cyl = c(cyl_src, kappa)                          # L2check(e) -> M2(e)
        for nm, obj in (("Lhat1(de)", Lh1), ("L1(e)", L1e), ("Lhat2(de)", Lh2), ("L2(e)", L2e),
                        ("M2check(e)", Mc2.obj), ("K", K.obj), ("L2check(e)", Lc2.obj),
                        ("M2(e)", M2e)):
            man[nm] = B.size(obj)

        # geometric dimensions of the e-pieces
        dLh2 = prev.dimL[bd] + 2 * d2
        dL2e = prev.dimM[bd] + d3 + d2
        dLc2 = max(dLh2 + 1, dL2e)
        dM2e = max(max(dL2e, dLh2 + 1) + 1, max(prev.dimL[bd] + d2 + d3, dL2e))

        L3g, M3g, L3, M3, k3 = {}, {}, {}, {}, {}
        fam = sorted(self.plan.families[k], key=_key)
        st.partial_L = L3
        # the L side first, so a budget failure on M still leaves L3 inspectable
        for Y in fam:
            if e not in Y:
                L3[Y] = prod(prod(prod(prev.L[Y], X3), X2), X2)
                st.dimL[Y] = prev.dimL[Y] + d3 + 2 * d2
            else:
                Yx = Y & prevX
                L1 = B.pushout(Lh1, prod(prev.L[Yx], X3), L1e, pm(lp(bd, Yx), k2), pm(kd, k2),
                               name=f"L1{label(Y)}")
                man[f"L1{label(Y)}"] = B.size(L1.obj)
                L2x = prod(prod(prev.L[Yx], X3), X2)
                iota = pm(pm(lp(bd, Yx), k2), I(X2))
                L3g[Y] = B.pushout(prod(Lh2, X2), prod(L2x, X2), prod(Lc2.obj, X2),
                                   pm(iota, I(X2)), pm(c(Lc2.left, s0), I(X2)), name=f"L3{label(Y)}")
                L3[Y] = L3g[Y].obj
                st.dimL[Y] = max(prev.dimL[Yx] + d3 + 2 * d2, dLc2 + d2)
            man[f"L3{label(Y)}"] = B.size(L3[Y])
        for Y in fam:
            if e not in Y:
                M3[Y] = prod(prod(prod(prev.M[Y], X3), X2), X3)
                k3[Y] = pm(pm(pm(prev.k[Y], I(X3)), I(X2)), k2)
                st.dimM[Y] = prev.dimM[Y] + 2 * d3 + d2
            else:
                Yx = Y & prevX
                M2x = prod(prod(prev.M[Yx], X3), X2)
                M3g[Y] = B.pushout(prod(L2e, X2), prod(M2x, X3), prod(M2e, X3),
                                   pm(m2p(bd, Yx), k2), pm(s_e, k2), name=f"M3{label(Y)}")
                M3[Y] = M3g[Y].obj
                k2nd = pm(pm(prev.k[Yx], I(X3)), I(X2))
                k3[Y] = B.induced(L3g[Y], c(M3g[Y].left, pm(k2nd, k2)),
                                  c(M3g[Y].right, pm(into_cyl, k2)), M3[Y])
                st.dimM[Y] = max(prev.dimM[Yx] + 2 * d3 + d2, dM2e + d3)
            man[f"M3{label(Y)}"] = B.size(M3[Y])

        # ports between L3 and M3
        L3p, M3p = {}, {}
        for a, b in sorted(self.plan.pairs[k], key=lambda p: (_key(p[0]), _key(p[1]))):
            bx, ax = b & prevX, a & prevX
            if e not in b:
                L3p[(a, b)] = pm(l2p(a, b), I(X2))
                M3p[(a, b)] = pm(m2p(a, b), I(X3))
            elif e not in a:
                L3p[(a, b)] = c(L3g[b].left, pm(l2p(a, bx), I(X2)))
                M3p[(a, b)] = c(M3g[b].left, pm(m2p(a, bx), I(X3)))
            else:
                L3p[(a, b)] = B.glue_map(L3g[a], L3g[b], pm(l2p(ax, bx), I(X2)),
                                         I(prod(Lc2.obj, X2)))
                M3p[(a, b)] = B.glue_map(M3g[a], M3g[b], pm(m2p(ax, bx), I(X3)), I(prod(M2e, X3)))

        if trim:
            st.L, st.M, st.k, st.Lp, st.Mp = L3, M3, k3, L3p, M3p
            return st
        Mb = {}
        for Y in fam:
            st.L[Y] = prod(L3[Y], X3)
            Mb[Y] = B.pushout(prod(L3[Y], X2), prod(M3[Y], X2), st.L[Y],
                              pm(k3[Y], I(X2)), pm(I(L3[Y]), k2), name=f"Mbar{label(Y)}")
            st.M[Y], st.k[Y] = Mb[Y].obj, Mb[Y].right
            st.dimL[Y] += d3
            st.dimM[Y] = max(st.dimM[Y] + d2, st.dimL[Y])
        for (a, b) in L3p:
            st.Lp[(a, b)] = pm(L3p[(a, b)], I(X3))
            st.Mp[(a, b)] = B.glue_map(Mb[a], Mb[b], pm(M3p[(a, b)], I(X2)), st.Lp[(a, b)])
        return st

    def run(self) -> FunctorAssignment:
        t0 = time.perf_counter()
        assign = FunctorAssignment(self.X, self.plan, self.B.name, self.kit_name, [], self.trim_last)
        try:
            st = self.base()
            assign.stages.append(st)
            for k in range(1, len(self.plan.order) + 1):
                log.debug("attaching %s", self.plan.order[k - 1])
                self._current = None
                st = self.step(st, k)
                assign.stages.append(st)
        except BudgetExceeded as err:
            assign.failure = f"budget: {err}"
            assign.partial = self._current
        assign.seconds = time.perf_counter() - t0
        return assign


def build_functors(X, kit, mode="chain", trim_last=False, budget=None, requested=None,
                   check_convex=False) -> FunctorAssignment:
    if mode == "explicit":
        backend = ExplicitBackend(budget=budget, check_convex=check_convex)
    elif mode == "chain":
        backend = ChainBackend(budget=budget)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    b = FunctorBuilder(X, kit, backend, trim_last, requested)
    out = b.run()
    out.backend = backend
    return out


# ---------------------------------------------------------------------------
# checks

@dataclass
class FunctorCheck:
    name: str
    ok: bool
    detail: str = ""

    def to_json(self):
        return {"check": self.name, "verdict": "PASS" if self.ok else "FAIL", "detail": self.detail}


def check_naturality(assign: FunctorAssignment) -> list:
    """k_B o L(A -> B) == M(A -> B) o k_A, and ports compose, at every stage."""
    B = assign.backend
    out = []
    for st in assign.stages:
        bad = []
        for (a, b), lmap in st.Lp.items():
            lhs = B.compose(st.k[b], lmap)
            rhs = B.compose(st.Mp[(a, b)], st.k[a])
            if not B.maps_equal(lhs, rhs):
                bad.append(f"{label(a)}<{label(b)}")
        comp = 0
        for (a, b) in st.Lp:
            for (b2, c_) in st.Lp:
                if b2 == b and (a, c_) in st.Lp:
                    comp += 1
                    for P in (st.Lp, st.Mp):
                        if not B.maps_equal(P[(a, c_)], B.compose(P[(b, c_)], P[(a, b)])):
                            bad.append(f"compose {label(a)}<{label(b)}<{label(c_)}")
        out.append(FunctorCheck(f"stage {st.index} naturality ({len(st.Lp)} squares, {comp} triples)",
                                not bad, "; ".join(bad[:5])))
    return out


def check_homology(assign: FunctorAssignment, stages="final") -> list:
    """H(L(Y)) = H(Y) for connected Y and M(Y) acyclic."""
    B = assign.backend
    out = []
    if not assign.complete:
        out.append(FunctorCheck("construction complete", False, assign.failure))
        part = assign.partial
        for Y in sorted((part.partial_L or {}) if part else {}, key=_key):
            if is_connected(Y):
                hy = homology(SimplicialComplex(list(Y)))
                hl = B.homology(part.partial_L[Y])
                out.append(FunctorCheck(f"stage {part.index} {label(Y)}: H(L3) = H(Y) (partial)",
                                        hl == hy, f"H(L3) = {hl}; H(Y) = {hy}"))
        return out
    pool = assign.stages if stages == "all" else assign.stages[-1:]
    for st in pool:
        sk = assign.plan.skeleta[st.index]
        for Y in sorted(st.L, key=_key):
            assert Y <= sk
            name = f"stage {st.index} {label(Y)}"
            hy = homology(SimplicialComplex(list(Y)))
            if is_connected(Y):
                hl = B.homology(st.L[Y])
                out.append(FunctorCheck(f"{name}: H(L) = H(Y)", hl == hy, f"H(L) = {hl}; H(Y) = {hy}"))
            hm = B.homology(st.M[Y])
            out.append(FunctorCheck(f"{name}: M acyclic", hm.is_acyclic(), f"H(M) = {hm}"))
    return out


def dimension_report(assign: FunctorAssignment) -> dict:
    m = assign.m
    rows = [{"stage": 0, "simplex": "", "duality": 0}]
    for st in assign.stages[1:]:
        rows.append({"stage": st.index, "simplex": "".join(map(str, assign.plan.order[st.index - 1])),
                     "duality": st.duality, "increments": "3+2+2" if st.trimmed else "3+2+2+3"})
    tracked = assign.final.duality if assign.complete else None
    expected = 10 * m - (3 if assign.trim_last and m else 0)
    bound = 10 * m - 7
    final = assign.final
    top = max(final.dimL.values(), default=0) if assign.complete else None
    return {
        "m": m,
        "tracked": tracked,
        "expected_from_increments": expected,
        "stated_bound": bound,
        "matches_increments": tracked == expected,
        "flag": (None if tracked is None else
                 f"tracked {tracked} {'>' if tracked > bound else '<='} stated bound {bound}"),
        "cube_dim_L": top,
        "cube_dim_M": max(final.dimM.values(), default=0) if assign.complete else None,
        "rows": rows,
    }
