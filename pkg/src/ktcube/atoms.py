"""The acyclic building blocks: W, X2, the pieces Y, Z_v, Z_w, U_v, U_w, X3,
the tower X_n, and the atom kits consumed by the functor construction."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache

from . import complex as cx
from .disks import (H_PRESENTATION, K_PRESENTATION, NONAGON, certify_presentation_complex,
                    find_x2_disks, load_disks, presentation_complex)
from .expr import (Atom, ChainEval, Compose, ExplicitEval, Glue, Identity, Inclusion, LoopMap,
                   Product, ProductMap, Slice)
from .homology import homology
from .links import check_closed_geodesic, check_gromov, check_locally_convex

LOOP_NAMES = tuple("abcdef")


@lru_cache(maxsize=None)
def build_W() -> cx.CubicalComplex:
    return presentation_complex(K_PRESENTATION, [NONAGON], name="W")


@lru_cache(maxsize=4)
def _x2_from_search(skip=0):
    return presentation_complex(H_PRESENTATION, find_x2_disks(H_PRESENTATION, skip), name="X2")


def build_X2(disks=None, skip=0) -> cx.CubicalComplex:
    """Assemble X2 from given disks (list or .disk path) or from the search."""
    if disks is None:
        return _x2_from_search(skip)
    if isinstance(disks, (str, bytes)) or hasattr(disks, "read_text"):
        disks = load_disks(disks)
    return presentation_complex(H_PRESENTATION, list(disks), name="X2")


# ---------------------------------------------------------------------------
# kits

@dataclass
class AtomKit:
    name: str
    real: bool
    X2: Atom
    S1: Atom
    X3: object           # expression node
    emb: object          # map node Product(X2, S1) -> X3
    nodes: dict = field(default_factory=dict)

    @property
    def X2xS1(self):
        return Product(self.X2, self.S1)

    def k2(self):
        """X2 -> X3 through the basepoint slice of the marked X2 x S1."""
        return Compose(self.emb, Slice(self.X2, self.S1, 0, "right"))


def toy_kit() -> AtomKit:
    sq = cx.make_square()
    bd = sq.loops["boundary"]
    x2 = Atom(sq.with_loops({g: bd for g in LOOP_NAMES}, name="square"), "X2(toy)")
    sq2 = Atom(cx.make_square(), "square")
    s1 = Atom(cx.make_circle(4), "S1")
    x3 = Product(x2, sq2)
    emb = ProductMap(Identity(x2), LoopMap(s1, sq2, "boundary"))
    return AtomKit("toy", False, x2, s1, x3, emb, {"square": sq2})


def micro_kit() -> AtomKit:
    """Plumbing fixture: X2 a point, X3 = point x square.  It does not carry
    the marked loops, so verify_kit rejects it; it exists so the functor
    construction can be run explicitly end to end at small sizes."""
    pt = Atom(cx.make_point(), "pt")
    sq = Atom(cx.make_square(), "square")
    s1 = Atom(cx.make_circle(4), "S1")
    return AtomKit("micro", False, pt, s1, Product(pt, sq), ProductMap(Identity(pt), LoopMap(s1, sq, "boundary")))


def piece_nodes(x2: Atom, w: Atom, s1: Atom) -> dict:
    """Expression nodes for Y, Z_v, Z_w, U_v, U_w, X3 and the marked maps."""
    n = {}
    n["Y"] = Glue(s1, w, x2, LoopMap(s1, w, "x"), LoopMap(s1, x2, "f"), "Y")
    n["Z_v"] = Glue(s1, n["Y"], x2, LoopMap(s1, n["Y"], "w"), LoopMap(s1, x2, "f"), "Z_v")
    n["Z_w"] = Glue(s1, n["Y"], x2, LoopMap(s1, n["Y"], "v"), LoopMap(s1, x2, "f"), "Z_w")
    torus = Product(s1, s1)
    n["T"] = torus
    jc = LoopMap(s1, x2, "c")
    for z, loop in (("v", "v"), ("w", "w")):
        zn = n[f"Z_{z}"]
        n[f"U_{z}"] = Glue(torus, Product(s1, zn), Product(x2, s1),
                           ProductMap(Identity(s1), LoopMap(s1, zn, loop)),
                           ProductMap(jc, Identity(s1)), f"U_{z}")
        n[f"i_{z}"] = Compose(Inclusion(n[f"U_{z}"], "left"),
                              Compose(Slice(zn, s1, 0, "left"), Inclusion(zn, "left")))
    n["X3"] = Glue(n["Y"], n["U_v"], n["U_w"], n["i_v"], n["i_w"], "X3")
    n["emb"] = Compose(Inclusion(n["X3"], "left"), Inclusion(n["U_v"], "right"))
    return n


def real_kit(disks=None, skip=0) -> AtomKit:
    x2c = build_X2(disks, skip)
    x2 = Atom(x2c, "X2")
    w = Atom(build_W(), "W")
    s1 = Atom(cx.make_circle(4), "S1")
    n = piece_nodes(x2, w, s1)
    n["W"] = w
    return AtomKit("real", True, x2, s1, n["X3"], n["emb"], n)


# ---------------------------------------------------------------------------
# certification

@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0

    def to_json(self):
        return {"check": self.name, "verdict": "PASS" if self.ok else "FAIL",
                "detail": self.detail, "seconds": round(self.seconds, 3)}


class Timer:
    def __enter__(self):
        self.t = time.perf_counter()
        return self

    def __exit__(self, *a):
        self.seconds = time.perf_counter() - self.t


def certify_X2(x2: cx.CubicalComplex) -> list:
    out = []
    with Timer() as t:
        rep = certify_presentation_complex(x2, H_PRESENTATION)
    for k, v in rep.items():
        if k == "homology":
            out.append(Check("X2 acyclic", v.is_acyclic(), str(v), t.seconds))
        else:
            out.append(Check(f"X2 {k}", v.ok, str(v.witnesses[:1]) if not v.ok else ""))
    out.append(Check("X2 loops have length 4", all(len(x2.loops[g]) == 4 for g in LOOP_NAMES)))
    return out


def certify_W(w: cx.CubicalComplex) -> list:
    out = [Check("W gromov", check_gromov(w).ok)]
    for g in "vwxy":
        out.append(Check(f"W geodesic {g}", check_closed_geodesic(w, w.loops[g]).ok))
    h = homology(w)
    out.append(Check("W homology (Z, Z^3, 0)", h == cx_hom([1, 3, 0]), str(h)))
    out.append(Check("W census: 64 squares, 4 loops of 4 edges",
                     w.count(2) == 64 and all(len(w.loops[g]) == 4 for g in "vwxy")))
    return out


def cx_hom(bettis, torsion=None):
    from .homology import Group, HomologyResult
    torsion = torsion or {}
    return HomologyResult(tuple(Group(b, tuple(torsion.get(n, ()))) for n, b in enumerate(bettis)))


EXPECTED_PIECES = {
    "Y": cx_hom([1, 2, 0]), "Z_v": cx_hom([1, 1, 0]), "Z_w": cx_hom([1, 1, 0]),
    "U_v": cx_hom([1, 1, 0]), "U_w": cx_hom([1, 1, 0]), "X3": cx_hom([1]),
}


def loop_generates(c: cx.CubicalComplex, loop) -> bool:
    """True when the loop's 1-cycle spans H_1 modulo nothing else: killing it
    leaves H_1 = 0 and adds no new H_2."""
    from .homology import boundary_matrices, homology_from_boundaries
    mats = boundary_matrices(c)
    z = {}
    for e, o in loop.edges:
        z[e] = z.get(e, 0) + (1 if o == 0 else -1)
    mats2 = [list(m) for m in mats]
    while len(mats2) < 3:
        mats2.append([])
    mats2[2] = mats2[2] + [z]
    h0, h1 = homology_from_boundaries(mats), homology_from_boundaries(mats2)
    before = h0[2] if len(h0) > 2 else None
    return h1[1].trivial and (h1[2].trivial if before is None else h1[2] == before)


def certify_pieces(kit: AtomKit, convexity=True) -> tuple:
    """Explicit build of the pieces with homology, Euler and convexity checks.

    Returns (checks, evaluator)."""
    ev = ExplicitEval()
    n = kit.nodes
    checks = []
    for name in ("Y", "Z_v", "Z_w", "U_v", "U_w", "X3"):
        with Timer() as t:
            c = ev(n[name])
            h = homology(c)
        node = n[name]
        chi = ev(node.left).euler() + ev(node.right).euler() - ev(node.locus).euler()
        checks.append(Check(f"H({name}) = {EXPECTED_PIECES[name]}", h == EXPECTED_PIECES[name],
                            f"{h}; cells {c.size()}", t.seconds))
        checks.append(Check(f"chi({name}) additive", chi == c.euler(), f"{c.euler()}"))
    zv, zw, y = ev(n["Z_v"]), ev(n["Z_w"]), ev(n["Y"])
    checks.append(Check("H1(Z_v) generated by v", loop_generates(zv, zv.loops["v"])))
    checks.append(Check("H1(Z_w) generated by w", loop_generates(zw, zw.loops["w"])))
    uv, uw = ev(n["U_v"]), ev(n["U_w"])
    checks.append(Check("H1(U_v) generated by v", loop_generates(uv, uv.loops["v"])))
    checks.append(Check("H1(U_w) generated by w", loop_generates(uw, uw.loops["w"])))
    if convexity:
        for label, node in (("x in W", n["Y"].f_left), ("f in X2", n["Y"].f_right),
                            ("w in Y", n["Z_v"].f_left), ("v in Y", n["Z_w"].f_left),
                            ("T in S1 x Z_v", n["U_v"].f_left), ("T in X2 x S1", n["U_v"].f_right),
                            ("T in S1 x Z_w", n["U_w"].f_left),
                            ("Y in U_v", n["i_v"]), ("Y in U_w", n["i_w"]),
                            ("X2 x S1 in X3", n["emb"])):
            with Timer() as t:
                rep = check_locally_convex(ev(node))
            checks.append(Check(f"locally convex: {label}", rep.ok,
                                str(rep.witnesses[:1]) if not rep.ok else "", t.seconds))
        for name in ("Y", "Z_v", "Z_w"):
            checks.append(Check(f"{name} gromov", check_gromov(ev(n[name])).ok))
    return checks, ev


def verify_kit(kit: AtomKit, deep_links=False) -> list:
    """Invariants of a kit; geometric ones only for the real kit."""
    checks = []
    ev = ExplicitEval()
    x2 = ev(kit.X2)
    checks.append(Check("X2 acyclic", homology(x2).is_acyclic()))
    checks.append(Check("marked loops a..f of length 4",
                        all(g in x2.loops and len(x2.loops[g]) == 4 for g in LOOP_NAMES)))
    if kit.emb is None:
        checks.append(Check("marked embedding X2 x S1 -> X3 present", False, "missing"))
        return checks
    x3 = ev(kit.X3)
    checks.append(Check("X3 acyclic", homology(x3).is_acyclic(), f"cells {x3.size()}"))
    emb = ev(kit.emb)
    checks.append(Check("X2 x S1 -> X3 is an embedding", emb.is_injective() and not emb.check(1)))
    checks.append(Check("S1 has length 4", ev(kit.S1).count(1) == 4))
    if kit.real:
        checks += certify_X2(x2)
        checks.append(Check("X2 x S1 locally convex in X3", check_locally_convex(emb).ok))
        if deep_links:
            checks.append(Check("X3 gromov", check_gromov(x3).ok))
    return checks


# ---------------------------------------------------------------------------
# tower

def tower_nodes(kit: AtomKit, n: int) -> tuple:
    """Expression nodes X_2..X_n and inclusions i_m : X_{m-1} -> X_m."""
    if n < 2:
        raise ValueError("tower starts at n = 2")
    s1, x2 = kit.S1, kit.X2
    xs = {2: x2, 3: kit.X3}
    inc = {3: kit.k2()}
    jf = LoopMap(s1, x2, "f")
    for m in range(4, n + 1):
        xs[m] = Glue(Product(s1, xs[m - 2]), Product(x2, xs[m - 2]), Product(s1, xs[m - 1]),
                     ProductMap(jf, Identity(xs[m - 2])), ProductMap(Identity(s1), inc[m - 1]), f"X{m}")
        inc[m] = Compose(Inclusion(xs[m], "right"), Slice(xs[m - 1], s1, 0, "left"))
    return xs, inc


def build_tower(n: int, kit: AtomKit = None, mode="chain", budget=10 ** 5):
    """X_n as a reduced chain model (mode 'chain') or explicit complex."""
    kit = kit or real_kit()
    xs, _ = tower_nodes(kit, n)
    if mode == "chain":
        return ChainEval()(xs[n])
    return ExplicitEval(budget)(xs[n])


def tower_count_formula(x2_cells, x3_cells):
    """Cells of X4 = X2 x X2 + S1 x X3 - S1 x X2 (S1 has 8 cells)."""
    return x2_cells ** 2 + 8 * x3_cells - 8 * x2_cells


def chain_kit_eval(kit: AtomKit):
    """Reduced chain values of the kit atoms (shared by all consumers)."""
    ev = ChainEval()
    return ev, {k: ev(getattr(kit, k)) for k in ("X2", "S1", "X3")}
