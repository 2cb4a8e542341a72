import json
import random

import pytest
from hypothesis import given

from ktcube import chains as ch
from ktcube import io as kio
from ktcube.complex import validate
from ktcube.homology import homology
from strategies import random_complex, seeds


def test_scx_numbering_follows_first_appearance():
    X, names = kio.parse_scx("b c  # comment\na b\n\nc d\n")
    assert names == ["b", "c", "a", "d"]
    assert X.simplices[1] == [(0, 1), (0, 2), (1, 3)]
    assert kio.parse_scx(kio.format_scx(X, names))[0].simplices == X.simplices


def test_scx_rejects_empty_and_repeats():
    with pytest.raises(ValueError):
        kio.parse_scx("# nothing\n")
    with pytest.raises(ValueError):
        kio.parse_scx("a a\n")


def test_corpus_files_parse(corpus):
    import glob
    files = sorted(glob.glob(f"{corpus}/*.scx"))
    assert len(files) == 8
    for f in files:
        X, _ = kio.parse_scx(f)
        assert X.vertices == list(range(len(X.vertices)))


@given(seeds)
def test_ccx_round_trip(seed):
    c = random_complex(random.Random(seed))
    back = kio.complex_from_json(json.loads(json.dumps(kio.complex_to_json(c))))
    assert back.cells == c.cells and back.loops == c.loops and back.basepoint == c.basepoint
    assert validate(back).ok


def test_ccx_rejects_wrong_facet_count():
    d = kio.complex_to_json(random_complex(random.Random(1)))
    d["cells"][1][0]["facets"] = d["cells"][1][0]["facets"][:1]
    with pytest.raises(ValueError):
        kio.complex_from_json(d)


def test_ccx_file(tmp_path):
    from ktcube.complex import make_square
    p = tmp_path / "sq.ccx"
    kio.write_ccx(make_square(), p)
    assert homology(kio.read_ccx(p)).is_acyclic()


@given(seeds)
def test_chain_model_round_trip(seed):
    c = random_complex(random.Random(seed))
    cc = ch.chains_of(c)
    m = ch.model_from(c, {"id": ch.identity(cc)}, manifest={"seed": seed})
    back = kio.model_from_json(json.loads(json.dumps(kio.model_to_json(m))))
    assert back.complex.ranks == m.complex.ranks and back.complex.d == m.complex.d
    assert back.ports["id"].cols == m.ports["id"].cols
    assert back.manifest == {"seed": seed}


def test_parse_matrix():
    assert kio.parse_matrix("1 2\n3 4  # row\n") == [[1, 2], [3, 4]]
    assert kio.parse_matrix("[[1, 0], [0, 2]]") == [[1, 0], [0, 2]]
    with pytest.raises(ValueError):
        kio.parse_matrix("1 2\n3\n")


def test_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("KT_CACHE_DIR", str(tmp_path))
    calls = []

    def build():
        calls.append(1)
        return {"x": 1}

    key = kio.cache_key("a", 1)
    assert kio.cached_json(key, build) == {"x": 1}
    assert kio.cached_json(key, build) == {"x": 1}
    assert len(calls) == 1
    assert (tmp_path / f"{key}.chm").exists()
    assert kio.cache_key("a", 1) != kio.cache_key("a", 2)


def test_no_cache_without_env(monkeypatch):
    monkeypatch.delenv("KT_CACHE_DIR", raising=False)
    assert kio.cache_dir() is None
