"""Command line front end.

    ktcube atoms | tower N | kt X.scx ... | check C.ccx | homology F | snf M | cross-validate MANIFEST

Every command writes report.tsv, report.json and figures into --out and exits
0 exactly when the report holds no FAIL row.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .report import FAIL, INFO, PASS, SKIP, Report, bar_sizes, homology_table_plot, ledger_plot, polyomino_plot

log = logging.getLogger("ktcube")


# ---------------------------------------------------------------------------
# kits

def load_kit(spec):
    from . import atoms
    if spec == "toy":
        return atoms.toy_kit()
    if spec == "real":
        return atoms.real_kit()
    path = Path(spec)
    if not path.exists():
        raise SystemExit(f"kit file not found: {spec}")
    return atoms.real_kit(disks=path)


# ---------------------------------------------------------------------------
# atoms

def cmd_atoms(args, rep: Report):
    from . import atoms
    from .disks import NONAGON, save_disks
    from .expr import ChainEval
    from .io import write_ccx
    from .manifest import write_manifest

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    t = time.perf_counter()
    w = atoms.build_W()
    rep.extend("W", atoms.certify_W(w))
    rep.timings["W"] = time.perf_counter() - t

    t = time.perf_counter()
    if args.kit in ("real", "toy"):
        from .disks import H_PRESENTATION, find_x2_disks
        disks = find_x2_disks(H_PRESENTATION)
        kit = atoms.real_kit(disks=disks)
    else:
        from .disks import load_disks
        disks = load_disks(args.kit)
        kit = atoms.real_kit(disks=disks)
    x2 = kit.X2.c
    rep.extend("X2", atoms.certify_X2(x2))
    rep.timings["X2"] = time.perf_counter() - t
    save_disks(out / "x2.disk", disks)
    write_ccx(x2, out / "X2.ccx")
    write_ccx(w, out / "W.ccx")

    t = time.perf_counter()
    checks, ev = atoms.certify_pieces(kit, convexity=True)
    rep.extend("pieces", checks)
    rep.timings["pieces"] = time.perf_counter() - t
    sizes = {nm: ev(kit.nodes[nm]).size() for nm in ("Y", "Z_v", "Z_w", "U_v", "U_w", "X3")}
    if args.mode in ("chain", "both"):
        cev = ChainEval()
        for nm in ("Y", "Z_v", "Z_w", "U_v", "U_w", "X3"):
            h = cev(kit.nodes[nm]).homology()
            rep.add("pieces", f"chain H({nm}) = explicit", h == atoms.EXPECTED_PIECES[nm], str(h))
    if args.deep_links:
        from .links import check_gromov
        rep.add("pieces", "X3 gromov (deep)", check_gromov(ev(kit.X3)).ok)
    rep.data["cells"] = {"W": w.size(), "X2": x2.size(), **sizes}
    write_manifest(out / "manifest.json", {k: kit.nodes[k] for k in ("Y", "Z_v", "Z_w", "U_v", "U_w", "X3", "emb")},
                   {"command": "atoms"})
    rep.figure("disks.png", polyomino_plot(list(disks) + [NONAGON], "X2 disks and the W nonagon"))
    names = list(rep.data["cells"])
    rep.figure("pieces.png", bar_sizes("cells per piece", names, [rep.data["cells"][k] for k in names]))


# ---------------------------------------------------------------------------
# tower

def cmd_tower(args, rep: Report):
    from . import atoms
    from .backends import BudgetExceeded
    from .expr import ChainEval, ExplicitEval
    from .homology import homology
    from .manifest import write_manifest

    kit = load_kit(args.kit)
    xs, inc = atoms.tower_nodes(kit, args.n)
    ranks, sizes = {}, {}
    cev, eev = ChainEval(), ExplicitEval(args.cell_budget)
    for m in range(2, args.n + 1):
        hc = he = None
        if args.mode in ("chain", "both"):
            t = time.perf_counter()
            v = cev(xs[m])
            hc = v.homology()
            rep.timings[f"chain X{m}"] = time.perf_counter() - t
            ranks[m] = v.big.size()
            rep.add("tower", f"X{m} acyclic (chain)", hc.is_acyclic(), str(hc))
        if args.mode in ("explicit", "both"):
            try:
                t = time.perf_counter()
                c = eev(xs[m])
                he = homology(c)
                rep.timings[f"explicit X{m}"] = time.perf_counter() - t
                sizes[m] = c.size()
                rep.add("tower", f"X{m} acyclic (explicit)", he.is_acyclic(), f"{he}; cells {c.size()}")
                if m == 4:
                    want = atoms.tower_count_formula(eev(xs[2]).size(), eev(xs[3]).size())
                    rep.add("tower", "X4 cell count formula", c.size() == want, f"{c.size()} vs {want}")
            except BudgetExceeded as err:
                rep.add("tower", f"X{m} explicit", verdict=SKIP, detail=str(err))
        if hc is not None and he is not None:
            rep.add("tower", f"X{m} chain = explicit", hc == he)
    rep.data.update({"chain_cells": ranks, "explicit_cells": sizes})
    write_manifest(Path(args.out) / "manifest.json", {f"X{m}": xs[m] for m in xs}, {"command": "tower", "n": args.n})
    data = sizes or ranks
    rep.figure("tower.png", bar_sizes("tower sizes (cells or chain generators)",
                                      [f"X{m}" for m in data], [data[m] for m in data]))


# ---------------------------------------------------------------------------
# kt

def _requested(X):
    maximal = []
    simp = X.all_simplices()
    for s in simp:
        if not any(len(t) > len(s) and set(s) <= set(t) for t in simp):
            maximal.append(s)
    req = [X.full(), X.subcomplex([maximal[0]]), X.subcomplex([maximal[-1]]), X.subcomplex([(X.vertices[0],)])]
    out = []
    for Y in req:
        if Y not in out:
            out.append(Y)
    return out


def kt_job(path, cfg):
    """One input; returns plain data (safe to ship across processes)."""
    from . import functors as F
    from .homology import homology
    from .io import parse_scx

    X, names = parse_scx(Path(path))
    kit = load_kit(cfg["kit"])
    modes = ["chain", "explicit"] if cfg["mode"] == "both" else [cfg["mode"]]
    res = {"input": Path(path).name, "rows": [], "runs": {}, "timings": {}}
    hx = homology(X)
    for mode in modes:
        t = time.perf_counter()
        a = F.build_functors(X, kit, mode, trim_last=cfg["trim_last"], budget=cfg["budget"] if mode == "explicit" else None,
                             requested=_requested(X), check_convex=cfg["deep_links"] and kit.real)
        res["timings"][mode] = time.perf_counter() - t
        rows = res["rows"]
        sec = f"{res['input']}:{mode}"
        hom = F.check_homology(a)
        nat = F.check_naturality(a) if a.complete else []
        rows += [(sec, c.name, c.ok, c.detail) for c in hom + nat]
        dim = F.dimension_report(a)
        if a.complete:
            rows.append((sec, f"duality ledger = 10m-{3 if cfg['trim_last'] and dim['m'] else 0}",
                         dim["matches_increments"], f"tracked {dim['tracked']} (m = {dim['m']})"))
            rows.append((sec, "stated bound 10m-7", None, dim["flag"]))
        hl = None
        if a.complete:
            hl = str(a.backend.homology(a.final.L[X.full()]))
        sizes = {}
        for st in a.stages[1:] + ([a.partial] if a.partial else []):
            for k, v in st.manifest.items():
                sizes[f"s{st.index}:{k}"] = v
        res["runs"][mode] = {"complete": a.complete, "failure": a.failure, "H(X)": str(hx), "H(L(X))": hl,
                             "ledger": dim, "order": [list(e) for e in a.plan.order], "sizes": sizes}
        if mode == "explicit" and cfg["deep_links"] and kit.real:
            for lab, r in a.backend.convexity:
                rows.append((sec, f"locally convex {lab}", r.ok, ""))
    if len(modes) == 2 and all(res["runs"][m]["complete"] for m in modes):
        same = res["runs"]["chain"]["H(L(X))"] == res["runs"]["explicit"]["H(L(X))"]
        res["rows"].append((f"{res['input']}:both", "chain = explicit", same, ""))
    return res


def cmd_kt(args, rep: Report):
    cfg = {"kit": args.kit, "mode": args.mode, "trim_last": args.trim_last, "budget": args.cell_budget,
           "deep_links": args.deep_links}
    workers = args.parallelism
    if args.mode != "chain":
        # an explicit build may hold up to the cell budget in memory; run
        # those one at a time
        workers = 1
    if workers > 1 and len(args.inputs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(kt_job, args.inputs, [cfg] * len(args.inputs)))
    else:
        results = [kt_job(p, cfg) for p in args.inputs]
    labels, left, right = [], [], []
    for res in results:
        for sec, item, ok, detail in res["rows"]:
            rep.add(sec, item, ok, detail)
        rep.data[res["input"]] = res["runs"]
        for mode, run in res["runs"].items():
            rep.timings[f"{res['input']}:{mode}"] = res["timings"][mode]
            labels.append(f"{res['input']} ({mode})")
            left.append(run["H(X)"])
            right.append(run["H(L(X))"] or "-")
            stem = Path(res["input"]).stem
            rows = run["ledger"]["rows"]
            if run["complete"]:
                rep.figure(f"{stem}-{mode}-ledger.png", ledger_plot(rows, lambda k: 10 * k - 7, f"{stem}: duality ledger"))
            last = {k: v for k, v in run["sizes"].items() if k.startswith(f"s{max(len(rows) - 1, 1)}:")}
            if last:
                rep.figure(f"{stem}-{mode}-sizes.png", bar_sizes(f"{stem}: last stage objects", list(last), list(last.values())))
    rep.figure("homology.png", homology_table_plot(labels, left, right, "H(X) against H(L(X))"))
    print("complex\tH(X)\tH(L(X))")
    for lab, a, b in zip(labels, left, right):
        print(f"{lab}\t{a}\t{b}")


# ---------------------------------------------------------------------------
# check, homology, snf, cross-validate

def _read_any(path):
    from .io import parse_scx, read_ccx
    p = Path(path)
    if p.suffix == ".scx":
        return parse_scx(p)[0]
    return read_ccx(p)


def cmd_check(args, rep: Report):
    from .complex import validate
    from .links import all_links, check_brady_meier, check_closed_geodesic, check_gromov

    c = _read_any(args.file)
    v = validate(c)
    rep.add("check", "cells well formed", bool(v), "; ".join(map(str, v.violations[:3])))
    if not v:
        return
    g = check_gromov(c)
    rep.add("check", "gromov", g.ok, str(g.witnesses[:1]) if not g.ok else "")
    links = all_links(c)
    for name, lp in sorted(c.loops.items()):
        r = check_closed_geodesic(c, lp, links)
        rep.add("check", f"closed geodesic {name}", r.ok, str(r.witnesses[:1]) if not r.ok else "")
    if c.dim == 2:
        # a property of the complex, not a validity condition: reported, never FAIL
        r = check_brady_meier(c)
        rep.add("check", "brady-meier", None, r.verdict + (f" {r.witnesses[:1]}" if not r.ok else ""))
    sizes = [len(lk.graph().nodes) for _, lk in sorted(links.items())]
    rep.data["link_vertices"] = sizes

    def draw():
        import matplotlib.pyplot as plt
        fig, ax = plt.subplots(figsize=(5, 3))
        ax.hist(sizes, bins=range(0, max(sizes, default=0) + 2), color="#4878a8")
        ax.set_xlabel("link vertices")
        ax.set_ylabel("vertices of the complex")
        ax.set_title(c.name or Path(args.file).name)
        fig.tight_layout()
        return fig
    rep.figure("links.png", draw)


def cmd_homology(args, rep: Report):
    from . import chains as ch
    from .homology import homology

    obj = _read_any(args.file)
    h = homology(obj)
    rep.add("homology", "explicit SNF", None, str(h))
    rep.data["homology"] = h.to_json()
    if args.mode in ("chain", "both") and not hasattr(obj, "simplices"):
        red = ch.reduce(ch.chains_of(obj), with_homotopy=False)
        hc = red.small.homology()
        rep.add("homology", "reduced chain model = explicit", hc == h, f"{hc}; generators {red.small.size()}")
    print(h)


def cmd_snf(args, rep: Report):
    from .io import parse_matrix
    from .snf import matmul, smith_normal_form

    a = parse_matrix(Path(args.file))
    divisors, rank = smith_normal_form(a)
    rep.data.update({"divisors": divisors, "rank": rank})
    rep.add("snf", "divisors", None, " ".join(map(str, divisors)) or "(zero matrix)")
    if a and len(a) * len(a[0]) <= 400:
        diag, _, U, V = smith_normal_form(a, certificates=True)
        D = matmul(matmul(U, a), V)
        ok = all(D[i][j] == (diag[i] if i == j and i < len(diag) else 0)
                 for i in range(len(D)) for j in range(len(D[0])))
        rep.add("snf", "U A V = D certificate", ok)
    print(" ".join(map(str, divisors)))


def cmd_cross(args, rep: Report):
    from .expr import MapNode, cross_validate
    from .manifest import read_manifest

    roots = read_manifest(args.file)
    for name, node in roots.items():
        if isinstance(node, MapNode):
            continue
        r = cross_validate(node, args.cell_budget)
        if r.explicit is None:
            rep.add("cross", name, verdict=SKIP, detail=f"chain {r.chain}; {r.skipped}")
        else:
            rep.add("cross", name, r.ok, f"chain {r.chain}; explicit {r.explicit}; cells {r.cells}")


# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["explicit", "chain", "both"], default="chain")
    common.add_argument("--cell-budget", type=int, default=10 ** 5)
    common.add_argument("--kit", default="real", help="real, toy, or a .disk file for X2")
    common.add_argument("--trim-last", action="store_true")
    common.add_argument("--deep-links", action="store_true")
    common.add_argument("--parallelism", type=int, default=1)
    common.add_argument("--out", default="ktcube-out")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="ktcube", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("atoms", parents=[common], help="build and certify W, X2 and the X3 pieces")
    t = sub.add_parser("tower", parents=[common], help="the acyclic tower X_2..X_n")
    t.add_argument("n", type=int)
    k = sub.add_parser("kt", parents=[common], help="run the functor construction on .scx inputs")
    k.add_argument("inputs", nargs="+")
    for name, helptext in (("check", "curvature suite on a .ccx"), ("homology", "homology of .ccx or .scx"),
                           ("snf", "Smith normal form of an integer matrix"),
                           ("cross-validate", "chain vs explicit on a build manifest")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("file")
    return p


COMMANDS = {"atoms": cmd_atoms, "tower": cmd_tower, "kt": cmd_kt, "check": cmd_check,
            "homology": cmd_homology, "snf": cmd_snf, "cross-validate": cmd_cross}


def config_of(args) -> dict:
    d = {k: v for k, v in vars(args).items() if k not in ("verbose", "out", "parallelism")}
    for k in ("file", "inputs"):
        if k in d:
            d[k] = [Path(x).name for x in d[k]] if isinstance(d[k], list) else Path(d[k]).name
    return d


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "n", 2) < 2:
        print("tower starts at n = 2", file=sys.stderr)
        return 2
    if args.cell_budget <= 0 or args.parallelism <= 0:
        print("--cell-budget and --parallelism must be positive", file=sys.stderr)
        return 2
    rep = Report(args.command, config_of(args))
    Path(args.out).mkdir(parents=True, exist_ok=True)
    try:
        COMMANDS[args.command](args, rep)
    except (FileNotFoundError, ValueError) as err:
        rep.add("input", "readable input", False, str(err))
    rep.write(args.out)
    bad = rep.failures
    rep.print_table(sys.stderr, failures_only=not args.verbose)
    counts = rep.summary()
    print(f"{counts.get(PASS, 0)} pass, {counts.get(FAIL, 0)} fail, {counts.get(SKIP, 0)} skip, "
          f"{counts.get(INFO, 0)} info; report in {args.out}", file=sys.stderr)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
