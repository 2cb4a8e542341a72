"""File formats: .scx (simplicial), .ccx (cubical, JSON), .chm (chain model,
JSON), integer matrices for ``snf``, and the on-disk model cache."""
from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from . import chains as ch
from .complex import CubicalComplex, LoopMarking, SimplicialComplex


def _text(src) -> str:
    if isinstance(src, Path) or (isinstance(src, str) and "\n" not in src and os.path.exists(src)):
        return Path(src).read_text()
    return src


# ---------------------------------------------------------------------------
# .scx

def parse_scx(src):
    """Returns (SimplicialComplex on 0..n-1, vertex names).  Vertices are
    numbered by first appearance, so simplex order follows the input."""
    names, index, maximal = [], {}, []
    for raw in _text(src).splitlines():
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        s = []
        for v in line:
            if v not in index:
                index[v] = len(names)
                names.append(v)
            s.append(index[v])
        maximal.append(tuple(s))
    if not maximal:
        raise ValueError("empty .scx input")
    return SimplicialComplex(maximal), names


def format_scx(X: SimplicialComplex, names=None) -> str:
    names = names or [str(v) for v in range(max(X.vertices) + 1)]
    simp = X.all_simplices()
    maximal = [s for s in simp if not any(len(t) > len(s) and set(s) <= set(t) for t in simp)]
    return "".join(" ".join(names[v] for v in s) + "\n" for s in maximal)


# ---------------------------------------------------------------------------
# .ccx

def complex_to_json(c: CubicalComplex) -> dict:
    cells = []
    for n, level in enumerate(c.cells):
        cells.append([{"id": i, "facets": [{"axis": j // 2, "side": j % 2, "cell": f, "iso": list(iso)}
                                           for j, (f, iso) in enumerate(faces)]}
                      for i, faces in enumerate(level)])
    labels = {"basepoint": c.basepoint,
              "loops": {k: {"edges": [list(x) for x in lp.edges], "basepoint": lp.basepoint}
                        for k, lp in sorted(c.loops.items())}}
    return {"name": c.name, "dims": c.counts(), "cells": cells, "labels": labels}


def complex_from_json(d: dict) -> CubicalComplex:
    if not isinstance(d, dict) or not isinstance(d.get("cells"), list):
        raise ValueError("not a .ccx complex (no 'cells' list)")
    cells = []
    for n, level in enumerate(d["cells"]):
        row = []
        for i, cell in enumerate(level):
            if cell.get("id", i) != i:
                raise ValueError(f"cell ids must be consecutive (dim {n}, position {i})")
            faces = sorted(cell["facets"], key=lambda f: (f["axis"], f["side"]))
            if len(faces) != 2 * n:
                raise ValueError(f"cell {n}:{i} has {len(faces)} facets, expected {2 * n}")
            row.append(tuple((f["cell"], tuple(f["iso"])) for f in faces))
        cells.append(row)
    labels = d.get("labels", {})
    loops = {k: LoopMarking(tuple(tuple(e) for e in v["edges"]), v["basepoint"])
             for k, v in labels.get("loops", {}).items()}
    return CubicalComplex(cells, loops, labels.get("basepoint", 0), d.get("name", ""))


def read_ccx(path) -> CubicalComplex:
    return complex_from_json(json.loads(_text(path)))


def write_ccx(c: CubicalComplex, path):
    Path(path).write_text(json.dumps(complex_to_json(c), sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# .chm

def _cols(cols):
    return [[[int(k), int(v)] for k, v in sorted(col.items())] for col in cols]


def _uncols(rows):
    return [{int(k): int(v) for k, v in col} for col in rows]


def chain_to_json(c: ch.ChainComplex) -> dict:
    return {"name": c.name, "ranks": list(c.ranks), "d": [_cols(col) for col in c.d]}


def chain_from_json(d) -> ch.ChainComplex:
    return ch.ChainComplex(d["ranks"], [_uncols(x) for x in d["d"]], d.get("name", ""))


def map_to_json(f: ch.ChainMap) -> dict:
    return {"degree": f.degree, "cols": [_cols(row) for row in f.cols]}


def map_from_json(d, src, dst) -> ch.ChainMap:
    return ch.ChainMap(src, dst, [_uncols(r) for r in d["cols"]], d.get("degree", 0))


def model_to_json(m: ch.ChainModel) -> dict:
    """Ports keep their source complexes inline so the file is self-contained."""
    return {"format": "chm", "complex": chain_to_json(m.complex),
            "ports": {k: {"src": chain_to_json(p.src), "map": map_to_json(p)}
                      for k, p in sorted(m.ports.items())},
            "manifest": m.manifest}


def model_from_json(d) -> ch.ChainModel:
    c = chain_from_json(d["complex"])
    ports = {k: map_from_json(v["map"], chain_from_json(v["src"]), c) for k, v in d["ports"].items()}
    return ch.ChainModel(c, ports, d.get("manifest"))


def write_chm(m: ch.ChainModel, path):
    Path(path).write_text(json.dumps(model_to_json(m), sort_keys=True) + "\n")


def read_chm(path) -> ch.ChainModel:
    return model_from_json(json.loads(_text(path)))


# ---------------------------------------------------------------------------
# matrices

def parse_matrix(src) -> list:
    """Whitespace rows of integers, or a JSON list of rows."""
    text = _text(src).strip()
    if text.startswith("["):
        rows = json.loads(text)
    else:
        rows = [[int(x) for x in line.split("#", 1)[0].split()]
                for line in text.splitlines() if line.split("#", 1)[0].strip()]
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("ragged matrix")
    return rows


# ---------------------------------------------------------------------------
# cache

def cache_dir():
    d = os.environ.get("KT_CACHE_DIR")
    return Path(d) if d else None


def cache_key(*parts) -> str:
    return hashlib.sha256(json.dumps(parts, sort_keys=True, default=str).encode()).hexdigest()[:20]


def cached_json(key, build):
    """Load ``key`` from KT_CACHE_DIR or build and store it (JSON payloads)."""
    d = cache_dir()
    if d is None:
        return build()
    path = d / f"{key}.chm"
    if path.exists():
        return json.loads(path.read_text())
    payload = build()
    d.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(payload, sort_keys=True))
    tmp.replace(path)
    return payload
