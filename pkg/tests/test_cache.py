from citegate.cache import CachedClient, RetrievalCache
from citegate.models import Source
from citegate.sources import ScriptedBackend, SourceError

HIT = {"title": "Quantum Dots", "authors": "A. B", "year": 2001}


def _client(tmp_path, fixtures):
    backend = ScriptedBackend(fixtures)
    cache = RetrievalCache(tmp_path)
    return backend, cache


def test_search_hits_are_cached(tmp_path):
    backend, cache = _client(tmp_path, {"crossref": {"*": [HIT]}})
    client = CachedClient(backend.client(Source.CROSSREF), cache)
    first = client.search("Quantum dots!", 2001, 5)
    again = client.search("quantum   dots", 2001, 5)
    assert first == again and len(backend.calls(Source.CROSSREF)) == 1
    assert (cache.hits, cache.misses) == (1, 1)
    # a different limit is a different entry
    client.search("quantum dots", 2001, 3)
    assert len(backend.calls(Source.CROSSREF)) == 2


def test_lookups_including_misses_are_cached(tmp_path):
    backend, cache = _client(tmp_path, {"arxiv": {"0804.0389": HIT}})
    client = CachedClient(backend.client(Source.ARXIV), cache)
    assert client.lookup_id("0804.0389").title == "Quantum Dots"
    assert client.lookup_id("0804.0389").title == "Quantum Dots"
    assert client.lookup_id("1111.22222") is None
    assert client.lookup_id("1111.22222") is None
    assert len(backend.calls(Source.ARXIV)) == 2


def test_errors_are_not_cached(tmp_path):
    backend, cache = _client(tmp_path, {"crossref": {"*": {"error": "timeout"}}})
    client = CachedClient(backend.client(Source.CROSSREF), cache)
    assert isinstance(client.search("q"), SourceError)
    assert isinstance(client.search("q"), SourceError)
    assert len(backend.calls(Source.CROSSREF)) == 2


def test_cache_survives_reopen(tmp_path):
    backend, cache = _client(tmp_path, {"crossref": {"*": [HIT]}})
    CachedClient(backend.client(Source.CROSSREF), cache).search("q")
    fresh = ScriptedBackend({})
    out = CachedClient(fresh.client(Source.CROSSREF), RetrievalCache(tmp_path)).search("q")
    assert out[0].title == "Quantum Dots" and fresh.call_log == []


def test_corrupt_entry_is_a_miss(tmp_path):
    cache = RetrievalCache(tmp_path)
    cache.put("crossref", "search", "k", [])
    path = next(tmp_path.rglob("*.json"))
    path.write_text("{broken")
    assert cache.get("crossref", "search", "k") is not None
    assert cache.misses == 1
