"""Build manifests: an expression DAG as JSON, with atoms stored inline in
.ccx form, so any recorded build can be replayed by ``cross-validate``."""
from __future__ import annotations

import json
from pathlib import Path

from . import expr as ex
from .io import complex_from_json, complex_to_json

_FIELDS = {
    "product": ("a", "b"),
    "glue": ("locus", "left", "right", "f_left", "f_right"),
    "cylinder": ("f",),
    "loop": ("src", "dst"),
    "base": ("src", "dst"),
    "inclusion": ("node",),
    "product_map": ("f", "g"),
    "identity": ("src",),
    "compose": ("g", "f"),
    "slice": ("a", "t"),
}

_KIND = {ex.Product: "product", ex.Glue: "glue", ex.Cylinder: "cylinder", ex.LoopMap: "loop",
         ex.BaseMap: "base", ex.Inclusion: "inclusion", ex.ProductMap: "product_map",
         ex.Identity: "identity", ex.Compose: "compose", ex.Slice: "slice"}


def to_manifest(roots: dict, meta=None) -> dict:
    """roots: name -> node.  Nodes are numbered in dependency order."""
    ids, nodes, atoms, atom_ids = {}, [], [], {}

    def visit(n):
        if id(n) in ids:
            return ids[id(n)]
        if isinstance(n, ex.Atom):
            if id(n.c) not in atom_ids:
                atom_ids[id(n.c)] = len(atoms)
                atoms.append(complex_to_json(n.c))
            rec = {"op": "atom", "name": n.name, "complex": atom_ids[id(n.c)]}
        else:
            kind = _KIND[type(n)]
            rec = {"op": kind}
            for f in _FIELDS[kind]:
                rec[f] = visit(getattr(n, f))
            if kind == "glue" or kind == "cylinder":
                rec["name"] = n.name
            if kind == "loop":
                rec["loop"] = n.loop
            if kind == "inclusion":
                rec["side"] = n.side
            if kind == "slice":
                rec["vertex"], rec["side"] = n.vertex, n.side
        ids[id(n)] = len(nodes)
        nodes.append(rec)
        return ids[id(n)]

    named = {k: visit(v) for k, v in roots.items()}
    return {"format": "ktcube-manifest", "version": 1, "meta": meta or {},
            "atoms": atoms, "nodes": nodes, "roots": named}


def from_manifest(d: dict) -> dict:
    if d.get("format") != "ktcube-manifest":
        raise ValueError("not a build manifest")
    atoms = [complex_from_json(a) for a in d["atoms"]]
    built = []
    for rec in d["nodes"]:
        op = rec["op"]
        get = lambda f: built[rec[f]]  # noqa: E731
        if op == "atom":
            n = ex.Atom(atoms[rec["complex"]], rec.get("name"))
        elif op == "product":
            n = ex.Product(get("a"), get("b"))
        elif op == "glue":
            n = ex.Glue(get("locus"), get("left"), get("right"), get("f_left"), get("f_right"), rec.get("name", ""))
        elif op == "cylinder":
            n = ex.Cylinder(get("f"), rec.get("name", ""))
        elif op == "loop":
            n = ex.LoopMap(get("src"), get("dst"), rec["loop"])
        elif op == "base":
            n = ex.BaseMap(get("src"), get("dst"))
        elif op == "inclusion":
            n = ex.Inclusion(get("node"), rec["side"])
        elif op == "product_map":
            n = ex.ProductMap(get("f"), get("g"))
        elif op == "identity":
            n = ex.Identity(get("src"))
        elif op == "compose":
            n = ex.Compose(get("g"), get("f"))
        elif op == "slice":
            n = ex.Slice(get("a"), get("t"), rec["vertex"], rec["side"])
        else:
            raise ValueError(f"unknown op {op!r}")
        built.append(n)
    return {k: built[i] for k, i in d["roots"].items()}


def write_manifest(path, roots, meta=None):
    Path(path).write_text(json.dumps(to_manifest(roots, meta), sort_keys=True) + "\n")


def read_manifest(path) -> dict:
    return from_manifest(json.loads(Path(path).read_text()))
