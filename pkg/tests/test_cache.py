import json
import os
import threading

from qsuper.cache import ENV_VAR, GramCache, default_dir
from qsuper.cartan import RootWeight, catalog_lookup, load_cartan
from qsuper.pairing import gram, quotient_basis

SL3 = catalog_lookup("sl3")


def test_put_get_roundtrip(tmp_path):
    c = GramCache(tmp_path)
    mu = RootWeight((2, 1))
    assert c.get(SL3, mu, 3) is None
    c.put(SL3, mu, 3, gram(SL3, mu))
    got = c.get(SL3, mu, 3)
    assert got.matrix == gram(SL3, mu).matrix
    assert c.hits == 1 and c.misses == 1
    assert len(c.entries()) == 1 and c.size_bytes() > 0


def test_key_ignores_name_but_not_content(tmp_path):
    c = GramCache(tmp_path)
    renamed = load_cartan({"name": "other", "A": [[2, -1], [-1, 2]]})
    mu = RootWeight((1, 1))
    assert c.key(SL3, mu, 3) == c.key(renamed, mu, 3)
    assert c.key(SL3, mu, 3) != c.key(SL3, mu, 4)
    assert c.key(SL3, mu, 3) != c.key(catalog_lookup("sl(2|1)"), mu, 3)


def test_corrupt_entry_is_a_miss(tmp_path):
    c = GramCache(tmp_path)
    mu = RootWeight((1, 0))
    (tmp_path / f"{c.key(SL3, mu, 2)}.json").write_text("{not json")
    assert c.get(SL3, mu, 2) is None


def test_quotient_basis_uses_cache(tmp_path):
    c = GramCache(tmp_path)
    cold = quotient_basis(SL3, 3, eager=True, cache=c)
    n = len(c.entries())
    assert n == 10
    warm = quotient_basis(SL3, 3, eager=True, cache=GramCache(tmp_path))
    for mu in cold.all_weights():
        assert cold.pivots(mu) == warm.pivots(mu)
        assert cold.block(mu).solve == warm.block(mu).solve


def test_concurrent_writers(tmp_path):
    c = GramCache(tmp_path)
    mu = RootWeight((2, 1))
    g = gram(SL3, mu)
    threads = [threading.Thread(target=c.put, args=(SL3, mu, 3, g)) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(c.entries()) == 1
    assert json.loads(c.entries()[0].read_text())["weight"] == [2, 1]
    assert not [p for p in os.listdir(tmp_path) if p.startswith(".tmp-")]


def test_clear_and_env(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "x"))
    assert default_dir() == tmp_path / "x"
    c = GramCache()
    c.put(SL3, RootWeight((1, 0)), 1, gram(SL3, RootWeight((1, 0))))
    assert c.clear() == 1 and c.entries() == []
