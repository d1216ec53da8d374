from __future__ import annotations

import io
import random

import pytest

from litscape.ingest import PAPERS_HEADER, parse_anthology_export
from litscape.store import (
    BuildError,
    build_tables,
    detect_language_mentions,
    extract_title_bigrams,
    extract_title_unigrams,
    inner_join,
    load_language_lexicon,
    load_snapshot,
    write_snapshot,
)

from helpers import as_multiset, nested_loop_join


def make_records(rows):
    """rows: (aa_id, title, year, authors)"""
    text = "\t".join(PAPERS_HEADER) + "\n" + "\n".join(
        f"{aa}\t{title}\t{year}\tACL\tmain-conference\t{authors}"
        for aa, title, year, authors in rows
    )
    records, report = parse_anthology_export(io.StringIO(text))
    assert not report.parse_errors
    return records


def test_unigrams_dedup():
    assert extract_title_unigrams("Very Very Deep Networks") == {
        "very", "deep", "networks",
    }
    assert extract_title_unigrams("Parsing with Parsing") == {"parsing", "with"}


def test_bigrams_adjacent_pairs():
    assert extract_title_bigrams("machine translation system") == {
        "machine translation", "translation system",
    }
    assert extract_title_bigrams("a b a b") == {"a b", "b a"}
    assert extract_title_bigrams("parsing") == set()
    assert extract_title_bigrams("") == set()


def test_unigrams_match_independent_retokenization():
    rng = random.Random(91)
    vocab = ["neural", "parsing", "deep", "multi-task", "graph", "a", "of"]
    for _ in range(50):
        words = [rng.choice(vocab) for _ in range(rng.randint(1, 7))]
        title = " ".join(words)
        assert extract_title_unigrams(title) == set(words)
        assert extract_title_bigrams(title) == {
            f"{x} {y}" for x, y in zip(words, words[1:])
        }


def test_language_detection_single_word():
    lexicon = load_language_lexicon()
    assert detect_language_mentions("Swahili Part-of-Speech Tagging", lexicon) == {
        "swahili"
    }
    assert detect_language_mentions("A Study of Embeddings", lexicon) == set()


def test_language_detection_multiple_hits():
    lexicon = load_language_lexicon()
    got = detect_language_mentions("Chinese–English Translation", lexicon)
    assert got == {"chinese", "english"}


def test_language_detection_multiword_contiguity():
    lexicon = {"haitian creole", "creole"}
    assert detect_language_mentions("Haitian Creole POS Tagging", lexicon) == {
        "haitian creole", "creole",
    }
    # non-adjacent tokens must not match the two-word entry
    assert detect_language_mentions("Haitian Dances and Creole", lexicon) == {"creole"}


def test_custom_lexicon_file(tmp_path):
    path = tmp_path / "langs.txt"
    path.write_text("# comment\nklingon\n\n", encoding="utf-8")
    lexicon = load_language_lexicon(path)
    assert lexicon == frozenset({"klingon"})


def test_build_tables_row_counts():
    records = make_records(
        [
            ("A1", "Neural Parsing", 2015, "Lee, Ana; Chen, Bo; Novak, Eva"),
            ("A2", "Deep Parsing", 2016, "Chen, Bo; Kumar, Raj"),
        ]
    )
    snap = build_tables(records, frozenset())
    assert len(snap.authors_table) == 5
    assert len(snap.papers_table) == 2
    assert {r["unigram"] for r in snap.unigrams_table} == {"neural", "parsing", "deep"}


def test_build_tables_repeated_token_title():
    records = make_records([("A1", "a a", 2015, "Lee, Ana")])
    snap = build_tables(records, frozenset())
    assert len(snap.unigrams_table) == 1
    assert snap.bigrams_table == [{"nlps_id": records[0].nlps_id, "bigram": "a a"}]


def test_build_tables_duplicate_id_fails():
    records = make_records(
        [("A1", "Neural Parsing", 2015, "Lee, Ana"), ("A2", "Neural, Parsing!", 2015, "Lee, Bo")]
    )
    with pytest.raises(BuildError) as err:
        build_tables(records, frozenset())
    assert "A1" in str(err.value) and "A2" in str(err.value)


def test_snapshot_referential_integrity_and_indexes():
    records = make_records(
        [
            ("A1", "Swahili Parsing", 2015, "Lee, Ana"),
            ("A2", "Deep Parsing", 2016, "Chen, Bo"),
        ]
    )
    snap = build_tables(records, load_language_lexicon())
    ids = set(snap.papers)
    for table in (snap.authors_table, snap.unigrams_table, snap.bigrams_table,
                  snap.languages_table):
        assert {row["nlps_id"] for row in table} <= ids
    assert snap.ids_by_unigram["parsing"] == ids
    assert snap.ids_by_language["swahili"] == {records[0].nlps_id}
    assert snap.ids_by_year[2016] == {records[1].nlps_id}
    assert snap.ids_by_author_last["lee"] == {records[0].nlps_id}


def test_inner_join_basics():
    papers = [{"nlps_id": "P1", "title": "t"}]
    authors = [
        {"nlps_id": "P1", "last": "Lee"},
        {"nlps_id": "P1", "last": "Chen"},
        {"nlps_id": "P2", "last": "Kumar"},
    ]
    joined = inner_join(papers, authors)
    assert len(joined) == 2
    assert all(row["title"] == "t" for row in joined)

    disjoint = inner_join([{"nlps_id": "X"}], [{"nlps_id": "Y"}])
    assert disjoint == []


def test_inner_join_matches_nested_loop_reference():
    rng = random.Random(5)
    for _ in range(20):
        keys = [f"K{i}" for i in range(rng.randint(1, 8))]
        left = [
            {"nlps_id": rng.choice(keys), "left_val": rng.randint(0, 9)}
            for _ in range(rng.randint(0, 15))
        ]
        right = [
            {"nlps_id": rng.choice(keys), "right_val": rng.randint(0, 9)}
            for _ in range(rng.randint(0, 15))
        ]
        assert as_multiset(inner_join(left, right)) == as_multiset(
            nested_loop_join(left, right, "nlps_id")
        )


def test_inner_join_count_identity():
    # row count = sum over keys of left multiplicity * right multiplicity
    left = [{"nlps_id": k} for k in ["A", "A", "B", "C"]]
    right = [{"nlps_id": k} for k in ["A", "B", "B", "D"]]
    joined = inner_join(left, right)
    assert len(joined) == 2 * 1 + 1 * 2


def test_write_then_load_round_trip(tmp_path, snapshot200):
    out = tmp_path / "snap"
    write_snapshot(snapshot200, out)
    names = sorted(p.name for p in out.iterdir())
    assert names == [
        "authors.out.tsv", "bigrams.out.tsv", "languages.out.tsv",
        "papers.out.tsv", "stats.json", "unigrams.out.tsv",
    ]
    loaded = load_snapshot(out)
    assert loaded.papers_table == snapshot200.papers_table
    assert loaded.authors_table == snapshot200.authors_table
    assert loaded.unigrams_table == snapshot200.unigrams_table
    assert loaded.bigrams_table == snapshot200.bigrams_table
    assert loaded.languages_table == snapshot200.languages_table
    assert loaded.stats == snapshot200.stats
    assert set(loaded.papers) == set(snapshot200.papers)


def test_serialized_build_is_deterministic(tmp_path, data_dir200):
    from litscape.pipeline import build_from_dir

    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    write_snapshot(build_from_dir(data_dir200).snapshot, out_a)
    write_snapshot(build_from_dir(data_dir200).snapshot, out_b)
    for name in ("papers.out.tsv", "authors.out.tsv", "unigrams.out.tsv",
                 "bigrams.out.tsv", "languages.out.tsv", "stats.json"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_load_snapshot_rejects_dangling_reference(tmp_path, snapshot200):
    out = tmp_path / "snap"
    write_snapshot(snapshot200, out)
    with open(out / "unigrams.out.tsv", "a", encoding="utf-8") as f:
        f.write("ghost|1999|nobody\tghost\n")
    with pytest.raises(BuildError):
        load_snapshot(out)
