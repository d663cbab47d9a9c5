from aeskit.knowledge import TripleStore


def test_add_and_exact_query():
    store = TripleStore()
    assert store.add("a", "likes", "b")
    assert store.query("a", "likes", "b") == [("a", "likes", "b")]


def test_duplicates_collapse():
    store = TripleStore()
    assert store.add("a", "p", "b")
    assert not store.add("a", "p", "b")
    assert len(store) == 1


def test_wildcard_queries():
    store = TripleStore()
    store.add("r1", "derived-from", "model:classifier")
    store.add("r2", "derived-from", "doc:42")
    store.add("r1", "recommends-label", "robots")
    assert len(store.query(None, "derived-from", None)) == 2
    assert store.query("r1", None, None) == [
        ("r1", "derived-from", "model:classifier"),
        ("r1", "recommends-label", "robots"),
    ]
    assert store.query(None, None, "doc:42") == [("r2", "derived-from", "doc:42")]


def test_empty_store_empty_result():
    assert TripleStore().query(None, None, None) == []


def test_save_load(tmp_path):
    store = TripleStore()
    store.add("x", "y", "z")
    store.add("a", "b", "c")
    path = tmp_path / "triples.json"
    store.save(path)
    again = TripleStore.load(path)
    assert again.triples == store.triples
