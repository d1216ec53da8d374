from __future__ import annotations

import io
import random

import pytest

from litscape.align import (
    AlignmentStats,
    CitationRecord,
    align,
    alignment_report,
    read_citations_file,
)
from litscape.ingest import IngestError, PAPERS_HEADER, parse_anthology_export


def make_papers(rows):
    """rows: (aa_id, title, year, last)"""
    text = "\t".join(PAPERS_HEADER) + "\n" + "\n".join(
        f"{aa}\t{title}\t{year}\tACL\tmain-conference\t{last}, Ana"
        for aa, title, year, last in rows
    )
    records, report = parse_anthology_export(io.StringIO(text))
    assert not report.parse_errors
    return records


def cit(title, year, last, n):
    return CitationRecord(title=title, year=year, first_author_last=last, n_citations=n)


def test_exact_match_aligns():
    papers = make_papers([("A1", "Neural Parsing", 2015, "Lee")])
    aligned, stats = align(papers, [cit("Neural Parsing", 2015, "Lee", 42)])
    assert aligned[0].n_citations == 42
    assert stats.coverage == 1.0
    assert stats.collisions == 0


def test_year_off_by_one_does_not_align():
    papers = make_papers([("A1", "Neural Parsing", 2015, "Lee")])
    aligned, stats = align(papers, [cit("Neural Parsing", 2016, "Lee", 42)])
    assert aligned[0].n_citations is None
    assert stats.coverage == 0.0


def test_normalized_titles_match_across_noise():
    papers = make_papers([("A1", "Déjà-vu: Parsing!", 2015, "LEE")])
    aligned, _ = align(papers, [cit("deja vu parsing", 2015, "lee", 7)])
    assert aligned[0].n_citations == 7


def test_citation_side_ambiguity_blocks_alignment():
    papers = make_papers([("A1", "Neural Parsing", 2015, "Lee")])
    two = [cit("Neural Parsing", 2015, "Lee", 10), cit("neural parsing", 2015, "LEE", 20)]
    aligned, stats = align(papers, two)
    assert aligned[0].n_citations is None
    assert stats.collisions == 1
    assert stats.n_aligned == 0


def test_identical_counts_still_a_collision():
    papers = make_papers([("A1", "Neural Parsing", 2015, "Lee")])
    two = [cit("Neural Parsing", 2015, "Lee", 10), cit("Neural Parsing", 2015, "Lee", 10)]
    _, stats = align(papers, two)
    assert stats.collisions == 1
    assert stats.n_aligned == 0


def test_paper_side_ambiguity_blocks_alignment():
    papers = make_papers(
        [("A1", "Neural Parsing", 2015, "Lee"), ("A2", "Neural: Parsing?", 2015, "Lee")]
    )
    aligned, stats = align(papers, [cit("Neural Parsing", 2015, "Lee", 10)])
    assert all(r.n_citations is None for r in aligned)
    assert stats.collisions == 1


def test_collision_count_is_distinct_keys():
    # 150 exact matches plus 10 keys duplicated on the citation side
    papers = make_papers(
        [(f"A{i}", f"title {i} parsing", 2000 + i % 20, "Lee") for i in range(200)]
    )
    citations = []
    for i in range(150):
        citations.append(cit(f"title {i} parsing", 2000 + i % 20, "Lee", i))
    for i in range(150, 160):
        citations.append(cit(f"title {i} parsing", 2000 + i % 20, "Lee", 5))
        citations.append(cit(f"title {i} parsing", 2000 + i % 20, "Lee", 6))
    aligned, stats = align(papers, citations)
    assert stats.n_aligned == 150
    assert stats.collisions == 10
    assert sum(1 for r in aligned if r.n_citations is not None) == 150


def test_permutation_invariance():
    papers = make_papers(
        [(f"A{i}", f"topic {i} study", 1995 + i, "Chen") for i in range(30)]
    )
    citations = [cit(f"topic {i} study", 1995 + i, "Chen", i * 3) for i in range(20)]
    citations.append(cit("topic 0 study", 1995, "Chen", 999))  # collide key 0
    base_aligned, base_stats = align(papers, citations)
    base_map = {r.aa_id: r.n_citations for r in base_aligned}
    rng = random.Random(4)
    for _ in range(10):
        p = papers[:]
        c = citations[:]
        rng.shuffle(p)
        rng.shuffle(c)
        aligned, stats = align(p, c)
        assert stats == base_stats
        assert {r.aa_id: r.n_citations for r in aligned} == base_map


def test_stats_arithmetic():
    papers = make_papers(
        [(f"A{i}", f"topic {i} study", 2000, "Chen") for i in range(10)]
    )
    citations = [cit(f"topic {i} study", 2000, "Chen", 1) for i in range(4)]
    _, stats = align(papers, citations)
    assert stats.n_anthology == 10
    assert stats.n_citation_records == 4
    assert stats.coverage == stats.n_aligned / stats.n_anthology
    assert stats.coverage == 0.4


def test_empty_inputs():
    aligned, stats = align([], [])
    assert aligned == []
    assert stats.coverage == 0.0


def test_report_rendering():
    report = alignment_report(
        AlignmentStats(
            n_anthology=44895, n_citation_records=0, n_aligned=32985,
            coverage=32985 / 44895, collisions=0,
        )
    )
    assert "(73%)" in report
    assert "44895" in report and "32985" in report


def test_report_full_coverage():
    report = alignment_report(
        AlignmentStats(
            n_anthology=10, n_citation_records=10, n_aligned=10,
            coverage=1.0, collisions=0,
        )
    )
    assert "(100%)" in report


def test_report_percent_matches_recomputed_ratio():
    stats = AlignmentStats(
        n_anthology=148, n_citation_records=200, n_aligned=37,
        coverage=37 / 148, collisions=3,
    )
    expected = int(100 * 37 / 148 + 0.5)
    assert f"({expected}%)" in alignment_report(stats)


def test_round_trip_stats_dict():
    stats = AlignmentStats(
        n_anthology=5, n_citation_records=6, n_aligned=3, coverage=0.6, collisions=1
    )
    assert AlignmentStats.from_dict(stats.to_dict()) == stats


def test_read_citations_file_errors(tmp_path):
    path = tmp_path / "citations.tsv"
    with pytest.raises(IngestError):
        read_citations_file(path)  # missing

    path.write_text("wrong\theader\n", encoding="utf-8")
    with pytest.raises(IngestError):
        read_citations_file(path)

    path.write_text(
        "title\tyear\tfirst_author_last\tn_citations\nA Study\t2002\tLee\t-3\n",
        encoding="utf-8",
    )
    with pytest.raises(IngestError):
        read_citations_file(path)


def test_read_citations_file_ok(tmp_path):
    path = tmp_path / "citations.tsv"
    path.write_text(
        "title\tyear\tfirst_author_last\tn_citations\n"
        "A Study\t2002\tLee\t14\n"
        "\n"
        "Another\t2003\tChen\t0\n",
        encoding="utf-8",
    )
    records = read_citations_file(path)
    assert len(records) == 2
    assert records[0].key == "a study|2002|lee"
