import os

import pytest

import rowcomp

FIXTURES = os.environ.get("ROWCOMP_FIXTURE_DIR")


def fixture(name):
    assert FIXTURES, "ROWCOMP_FIXTURE_DIR must point at the fixtures directory"
    return os.path.join(FIXTURES, name)


def base_config():
    return {"kb": fixture("kb.tsv"), "embeddings": fixture("embeddings.txt")}


def test_text_helpers():
    assert rowcomp.normalize_text("  Kanye   WEST ") == "kanye west"
    assert rowcomp.normalized_levenshtein("kitten", "sitting") == pytest.approx(3 / 7)
    assert rowcomp.cosine_similarity([1.0, 0.0], [0.0, 1.0]) == pytest.approx(0.0)
    assert rowcomp.euclidean_distance([0.0, 0.0], [3.0, 4.0]) == pytest.approx(5.0)
    emb = rowcomp.label_embedding("kanye west")
    assert len(emb) == 128
    assert emb == rowcomp.label_embedding("kanye west")


def test_metrics():
    assert rowcomp.recall_at_n(["a", "x", "b"], {"a", "b"}, 2) == pytest.approx(0.5)
    assert rowcomp.recall_at_n([], set(), 5) == 1.0
    assert rowcomp.average_precision(["x", "a"], {"a"}) == pytest.approx(0.5)


def test_run_link(tmp_path):
    table = tmp_path / "t.csv"
    table.write_text("Kanye West,Yeezy,1977\nKendrick Lamar,K-Dot,1987\n")
    out = rowcomp.run_link(str(table), base_config())
    assert out["rows"] == 2
    assert out["mainColumn"] == ["Q1", "Q2"]
    assert out["columnLinks"]["1"] == "P1"
    assert out["columnLinks"]["2"] == "P2"


def test_run_complete(tmp_path):
    table = tmp_path / "t.csv"
    table.write_text("Kanye West,1977\nKendrick Lamar,1987\nDrake,1986\n")
    cfg = base_config()
    cfg["suggestions"] = 2
    out = rowcomp.run_complete(str(table), cfg)
    assert len(out["suggestions"]) == 2
    assert all(f["provenanceKind"] == "kb-triple"
               for row in out["rows"] for f in row["fills"])


def test_run_evaluate():
    cfg = base_config()
    cfg["clients"] = {
        "generator": "mock:" + fixture("lm.json"),
        "search": "mock:" + fixture("search.json"),
    }
    report = rowcomp.run_evaluate(fixture("bench"), cfg)
    assert report["macro"]["tables"] == 10
    assert report["skipped"] == ["skipme"]


def test_run_ingest(tmp_path):
    src = tmp_path / "in.jsonl"
    src.write_text(
        '{"kind": "entity", "id": "A", "label": "Alpha"}\n'
        '{"kind": "property", "id": "P", "label": "prop"}\n'
        '{"kind": "triple", "subject": "A", "property": "P", "value": "hello"}\n'
    )
    dst = tmp_path / "out.tsv"
    rowcomp.run_ingest(str(src), str(dst))
    text = dst.read_text()
    assert "Alpha" in text and "hello" in text
