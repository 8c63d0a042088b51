import json
import os
import subprocess

import pytest

import embanks

SPEC = {
    "papers": 400,
    "authors": 150,
    "writes": 1000,
    "cites": 1000,
    "communities": 4,
    "high_terms": {"xml": 0.1},
    "low_terms": {"soumen": 2},
    "seed": 7,
}


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    data = root / "data"
    embanks.synth(json.dumps(SPEC), data)
    db = embanks.load_database(data / "schema.txt", data)
    idx = embanks.build_index(db)
    cl = embanks.cluster(db.graph, "greedymin", 20, 3)
    embanks.write_store(root / "store", db, idx, cl)
    return root, db, idx, cl


def test_tokenize_and_memory():
    assert embanks.tokenize("XML-Query, 2006") == ["xml", "query", "2006"]
    assert embanks.estimate_memory(1_000_000, 10_000_000) == 140_000_000


def test_database_shape(corpus):
    _, db, idx, cl = corpus
    g = db.graph
    assert g.node_count == len(db.text)
    assert g.slot_count % 2 == 0
    assert len(idx.lookup("soumen")) == 2
    assert cl.cluster_count == -(-g.node_count // 20)
    assert sorted(u for c in range(cl.cluster_count) for u in cl.members(c)) == list(range(g.node_count))


def test_two_phase_answers_are_trees(corpus):
    root, db, idx, _ = corpus
    store = embanks.Store(root / "store")
    r = embanks.query(store, "xml soumen", k=5)
    assert 0 < len(r["answers"]) <= 5
    scores = [a["score"] for a in r["answers"]]
    assert scores == sorted(scores, reverse=True)
    soumen = set(idx.lookup("soumen"))
    for a in r["answers"]:
        assert len(a["edges"]) == len(a["nodes"]) - 1
        assert set(a["nodes"]) == {a["root"]} | {c for _, c, _ in a["edges"]}
        assert any(u in soumen for u in a["keyword_nodes"])
        assert all(a["text"][u] == db.text[u] for u in a["nodes"])
    assert r["stats"]["nodes_touched"] > 0
    assert store.cluster_reads > 0


def test_single_phase_and_missing_term(corpus):
    _, db, idx, _ = corpus
    r = embanks.search(db, idx, "xml soumen", algorithm="backward", k=3)
    assert 0 < len(r["answers"]) <= 3
    with pytest.raises(embanks.NoAnswerError):
        embanks.search(db, idx, "nosuchterm")


def test_corrupt_store_is_reported(tmp_path):
    (tmp_path / "graph.emb").write_bytes(b"nope")
    with pytest.raises(embanks.StoreError):
        embanks.Store(tmp_path)


@pytest.mark.skipif(not os.environ.get("EMBANKS_CLI"), reason="CLI path not provided")
def test_cli_query_matches_module(corpus):
    root, _, _, _ = corpus
    out = subprocess.run(
        [os.environ["EMBANKS_CLI"], "query", "--store", str(root / "store"), "--k", "5", "xml soumen"],
        check=True, capture_output=True, text=True,
    ).stdout.splitlines()
    cli = [json.loads(line) for line in out if '"rank"' in line]
    mod = embanks.query(embanks.Store(root / "store"), "xml soumen", k=5)["answers"]
    assert [a["nodes"] for a in cli] == [a["nodes"] for a in mod]
    assert [a["score"] for a in cli] == pytest.approx([a["score"] for a in mod])
