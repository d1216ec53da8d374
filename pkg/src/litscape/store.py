"""Relational tables and indexes behind every query.

A build turns aligned paper records into four tables -- papers, authors,
title-unigrams, title-bigrams -- plus a language-mention table, mirrored
on disk as plain TSV files so the artifact stays inspectable. The
in-memory :class:`CorpusSnapshot` additionally carries inverted indexes
(token -> paper ids, year -> paper ids, ...) that the query module
intersects; the TSV dump is the source of truth, the indexes are derived.

A snapshot is immutable once built. Re-ingesting produces a new snapshot
that readers swap in atomically; nothing here mutates in place.
"""

from __future__ import annotations

import datetime as _dt
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .align import AlignmentStats
from .ingest import (
    AuthorName,
    IngestError,
    PaperRecord,
    canonicalize_author,
    format_authors,
)
from .textnorm import tokenize_title

__all__ = [
    "BuildError",
    "CorpusSnapshot",
    "tokenize_title",
    "extract_title_unigrams",
    "extract_title_bigrams",
    "detect_language_mentions",
    "build_tables",
    "inner_join",
    "write_snapshot",
    "load_snapshot",
    "load_language_lexicon",
]

SNAPSHOT_FILES = (
    "papers.out.tsv",
    "authors.out.tsv",
    "unigrams.out.tsv",
    "bigrams.out.tsv",
    "languages.out.tsv",
    "stats.json",
)

_PAPERS_OUT_HEADER = (
    "nlps_id", "aa_id", "title", "year", "venue", "paper_type", "authors",
    "n_citations",
)


class BuildError(Exception):
    """Table construction failed (e.g. colliding paper ids)."""


def extract_title_unigrams(title: str) -> set[str]:
    """Distinct lowercase tokens of a title."""
    return set(tokenize_title(title))


def extract_title_bigrams(title: str) -> set[str]:
    """Distinct adjacent token pairs, joined by one space.

    Titles with fewer than two tokens yield the empty set.
    """
    tokens = tokenize_title(title)
    return {f"{a} {b}" for a, b in zip(tokens, tokens[1:])}


@lru_cache(maxsize=8)
def _compiled_lexicon(lexicon: frozenset[str]) -> dict[tuple[str, ...], str]:
    compiled = {}
    for name in lexicon:
        tokens = tuple(tokenize_title(name))
        if tokens:
            compiled[tokens] = name
    return compiled


def detect_language_mentions(title: str, lexicon: Iterable[str]) -> set[str]:
    """Lexicon entries whose token sequence occurs in the title's tokens.

    Multi-word names match contiguously: "Haitian Creole POS Tagging"
    mentions "haitian creole" but a title with only "creole" does not.
    """
    compiled = _compiled_lexicon(frozenset(lexicon))
    if not compiled:
        return set()
    tokens = tokenize_title(title)
    max_len = max(len(k) for k in compiled)
    windows = {
        tuple(tokens[i : i + n])
        for n in range(1, min(max_len, len(tokens)) + 1)
        for i in range(len(tokens) - n + 1)
    }
    return {name for key, name in compiled.items() if key in windows}


def load_language_lexicon(path: str | Path | None = None) -> frozenset[str]:
    """Load the language-name lexicon (the packaged default, or a file)."""
    if path is None:
        text = resources.files("litscape").joinpath("data/languages.txt").read_text(
            encoding="utf-8"
        )
    else:
        text = Path(path).read_text(encoding="utf-8")
    names = set()
    for line in text.splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            names.add(line)
    return frozenset(names)


@dataclass
class CorpusSnapshot:
    """The immutable query target: tables, indexes, and alignment stats.

    ``built_at`` identifies the snapshot in a running service; it is not
    part of the serialized artifact, so rebuilding identical inputs gives
    byte-identical output files.
    """

    papers: dict[str, PaperRecord]
    papers_table: list[dict]
    authors_table: list[dict]
    unigrams_table: list[dict]
    bigrams_table: list[dict]
    languages_table: list[dict]
    stats: AlignmentStats
    built_at: str

    all_ids: frozenset[str] = field(init=False, repr=False)
    unigrams_by_paper: dict[str, frozenset[str]] = field(init=False, repr=False)
    bigrams_by_paper: dict[str, frozenset[str]] = field(init=False, repr=False)
    languages_by_paper: dict[str, frozenset[str]] = field(init=False, repr=False)
    ids_by_unigram: dict[str, set[str]] = field(init=False, repr=False)
    ids_by_bigram: dict[str, set[str]] = field(init=False, repr=False)
    ids_by_language: dict[str, set[str]] = field(init=False, repr=False)
    ids_by_year: dict[int, set[str]] = field(init=False, repr=False)
    ids_by_venue: dict[str, set[str]] = field(init=False, repr=False)
    ids_by_type: dict[str, set[str]] = field(init=False, repr=False)
    ids_by_author_last: dict[str, set[str]] = field(init=False, repr=False)
    ids_by_author: dict[tuple[str, str], set[str]] = field(init=False, repr=False)

    def __post_init__(self):
        self.all_ids = frozenset(self.papers)
        grouped: dict[str, list[str]] = {}
        for row in self.unigrams_table:
            grouped.setdefault(row["nlps_id"], []).append(row["unigram"])
        self.unigrams_by_paper = {k: frozenset(v) for k, v in grouped.items()}
        grouped = {}
        for row in self.bigrams_table:
            grouped.setdefault(row["nlps_id"], []).append(row["bigram"])
        self.bigrams_by_paper = {k: frozenset(v) for k, v in grouped.items()}
        grouped = {}
        for row in self.languages_table:
            grouped.setdefault(row["nlps_id"], []).append(row["language"])
        self.languages_by_paper = {k: frozenset(v) for k, v in grouped.items()}

        self.ids_by_unigram = _invert(self.unigrams_by_paper)
        self.ids_by_bigram = _invert(self.bigrams_by_paper)
        self.ids_by_language = _invert(self.languages_by_paper)
        self.ids_by_year = {}
        self.ids_by_venue = {}
        self.ids_by_type = {}
        self.ids_by_author_last = {}
        self.ids_by_author = {}
        for record in self.papers.values():
            self.ids_by_year.setdefault(record.year, set()).add(record.nlps_id)
            self.ids_by_venue.setdefault(record.venue, set()).add(record.nlps_id)
            self.ids_by_type.setdefault(record.paper_type, set()).add(record.nlps_id)
            for author in record.authors:
                last = author.last.lower()
                self.ids_by_author_last.setdefault(last, set()).add(record.nlps_id)
                self.ids_by_author.setdefault(
                    (last, author.first.lower()), set()
                ).add(record.nlps_id)

    def unigram_set(self, nlps_id: str) -> frozenset[str]:
        return self.unigrams_by_paper.get(nlps_id, frozenset())

    def bigram_set(self, nlps_id: str) -> frozenset[str]:
        return self.bigrams_by_paper.get(nlps_id, frozenset())

    def language_set(self, nlps_id: str) -> frozenset[str]:
        return self.languages_by_paper.get(nlps_id, frozenset())


def _invert(by_paper: dict[str, frozenset[str]]) -> dict[str, set[str]]:
    inverted: dict[str, set[str]] = {}
    for nlps_id, values in by_paper.items():
        for value in values:
            inverted.setdefault(value, set()).add(nlps_id)
    return inverted


def build_tables(
    records: Sequence[PaperRecord],
    language_lexicon: Iterable[str],
    stats: AlignmentStats | None = None,
) -> CorpusSnapshot:
    """Materialize all tables from aligned records.

    ``stats`` is the alignment run's statistics; when omitted (tables
    built straight from records, no alignment step), counts that only the
    aligner knows are zero.

    Fails when two records share an nlps_id: the papers table is keyed on
    it, and silently dropping one side would corrupt every join.
    """
    seen: dict[str, str] = {}
    colliding = sorted(
        {
            f"{record.nlps_id} ({seen[record.nlps_id]}, {record.aa_id})"
            for record in records
            if seen.setdefault(record.nlps_id, record.aa_id) != record.aa_id
        }
    )
    if colliding:
        raise BuildError("duplicate nlps_id: " + "; ".join(colliding))

    lexicon = frozenset(language_lexicon)
    papers: dict[str, PaperRecord] = {}
    papers_table = []
    authors_table = []
    unigrams_table = []
    bigrams_table = []
    languages_table = []
    for record in records:
        papers[record.nlps_id] = record
        papers_table.append(
            {
                "nlps_id": record.nlps_id,
                "aa_id": record.aa_id,
                "title": record.title,
                "year": record.year,
                "venue": record.venue,
                "paper_type": record.paper_type,
                "authors": format_authors(record.authors),
                "n_citations": record.n_citations,
            }
        )
        for author in record.authors:
            authors_table.append(
                {"nlps_id": record.nlps_id, "first": author.first, "last": author.last}
            )
        # dict.fromkeys dedups while keeping first-occurrence order, so
        # serialized tables are deterministic.
        tokens = tokenize_title(record.title)
        for unigram in dict.fromkeys(tokens):
            unigrams_table.append({"nlps_id": record.nlps_id, "unigram": unigram})
        for bigram in dict.fromkeys(
            f"{a} {b}" for a, b in zip(tokens, tokens[1:])
        ):
            bigrams_table.append({"nlps_id": record.nlps_id, "bigram": bigram})
        for language in sorted(detect_language_mentions(record.title, lexicon)):
            languages_table.append({"nlps_id": record.nlps_id, "language": language})

    return CorpusSnapshot(
        papers=papers,
        papers_table=papers_table,
        authors_table=authors_table,
        unigrams_table=unigrams_table,
        bigrams_table=bigrams_table,
        languages_table=languages_table,
        stats=stats if stats is not None else _fallback_stats(records),
        built_at=_now_iso(),
    )


def _fallback_stats(records: Sequence[PaperRecord]) -> AlignmentStats:
    n_aligned = sum(1 for r in records if r.n_citations is not None)
    return AlignmentStats(
        n_anthology=len(records),
        n_citation_records=0,
        n_aligned=n_aligned,
        coverage=n_aligned / len(records) if records else 0.0,
        collisions=0,
    )


def inner_join(
    left: Sequence[dict], right: Sequence[dict], key: str = "nlps_id"
) -> list[dict]:
    """Hash join: one merged row per (left row, right row) pair of equal keys."""
    by_key: dict[object, list[dict]] = {}
    for row in left:
        by_key.setdefault(row[key], []).append(row)
    joined = []
    for row in right:
        for left_row in by_key.get(row[key], ()):
            joined.append({**left_row, **row})
    return joined


def _now_iso() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _write_tsv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as out:
        out.write("\t".join(header) + "\n")
        for row in rows:
            out.write("\t".join(str(v) for v in row) + "\n")


def write_snapshot(snapshot: CorpusSnapshot, out_dir: str | Path) -> None:
    """Write the five table TSVs plus stats.json into out_dir.

    Output bytes depend only on the snapshot's tables and stats, never on
    when the build ran.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_tsv(
        out_dir / "papers.out.tsv",
        _PAPERS_OUT_HEADER,
        (
            (
                row["nlps_id"], row["aa_id"], row["title"], row["year"],
                row["venue"], row["paper_type"], row["authors"],
                "" if row["n_citations"] is None else row["n_citations"],
            )
            for row in snapshot.papers_table
        ),
    )
    _write_tsv(
        out_dir / "authors.out.tsv",
        ("nlps_id", "first", "last"),
        ((r["nlps_id"], r["first"], r["last"]) for r in snapshot.authors_table),
    )
    _write_tsv(
        out_dir / "unigrams.out.tsv",
        ("nlps_id", "unigram"),
        ((r["nlps_id"], r["unigram"]) for r in snapshot.unigrams_table),
    )
    _write_tsv(
        out_dir / "bigrams.out.tsv",
        ("nlps_id", "bigram"),
        ((r["nlps_id"], r["bigram"]) for r in snapshot.bigrams_table),
    )
    _write_tsv(
        out_dir / "languages.out.tsv",
        ("nlps_id", "language"),
        ((r["nlps_id"], r["language"]) for r in snapshot.languages_table),
    )
    stats_json = json.dumps(snapshot.stats.to_dict(), indent=2, sort_keys=True)
    (out_dir / "stats.json").write_text(stats_json + "\n", encoding="utf-8")


def _read_tsv(path: Path, expected_header: Sequence[str]) -> list[list[str]]:
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as err:
        raise IngestError(f"cannot read {path}: {err}") from err
    if not lines:
        raise IngestError(f"{path}: missing header row")
    header = tuple(lines[0].split("\t"))
    if header != tuple(expected_header):
        raise IngestError(f"{path}: expected header {tuple(expected_header)}, got {header}")
    rows = []
    for line_no, raw in enumerate(lines[1:], start=2):
        if not raw:
            continue
        parts = raw.split("\t")
        if len(parts) != len(expected_header):
            raise IngestError(
                f"{path} line {line_no}: expected {len(expected_header)} columns"
            )
        rows.append(parts)
    return rows


def _record_from_out_row(parts: list[str]) -> PaperRecord:
    nlps_id, aa_id, title, year, venue, paper_type, authors_raw, citations = parts
    authors = []
    for entry in authors_raw.split(";"):
        entry = entry.strip()
        if not entry:
            continue
        last, _, first = entry.partition(",")
        authors.append(canonicalize_author(first.strip(), last.strip()))
    return PaperRecord(
        nlps_id=nlps_id,
        aa_id=aa_id,
        title=title,
        year=int(year),
        venue=venue,
        paper_type=paper_type,
        authors=tuple(authors),
        n_citations=None if citations == "" else int(citations),
    )


def load_snapshot(out_dir: str | Path) -> CorpusSnapshot:
    """Load a built directory back into a query-ready snapshot.

    The satellite TSVs are loaded as-is (they are the artifact, not a
    cache); referential integrity against the papers table is checked.
    """
    out_dir = Path(out_dir)
    paper_rows = _read_tsv(out_dir / "papers.out.tsv", _PAPERS_OUT_HEADER)
    papers: dict[str, PaperRecord] = {}
    papers_table = []
    for parts in paper_rows:
        record = _record_from_out_row(parts)
        if record.nlps_id in papers:
            raise BuildError(f"duplicate nlps_id in papers table: {record.nlps_id}")
        papers[record.nlps_id] = record
        papers_table.append(
            {
                "nlps_id": record.nlps_id,
                "aa_id": record.aa_id,
                "title": record.title,
                "year": record.year,
                "venue": record.venue,
                "paper_type": record.paper_type,
                "authors": format_authors(record.authors),
                "n_citations": record.n_citations,
            }
        )

    authors_table = [
        {"nlps_id": r[0], "first": r[1], "last": r[2]}
        for r in _read_tsv(out_dir / "authors.out.tsv", ("nlps_id", "first", "last"))
    ]
    unigrams_table = [
        {"nlps_id": r[0], "unigram": r[1]}
        for r in _read_tsv(out_dir / "unigrams.out.tsv", ("nlps_id", "unigram"))
    ]
    bigrams_table = [
        {"nlps_id": r[0], "bigram": r[1]}
        for r in _read_tsv(out_dir / "bigrams.out.tsv", ("nlps_id", "bigram"))
    ]
    languages_table = [
        {"nlps_id": r[0], "language": r[1]}
        for r in _read_tsv(out_dir / "languages.out.tsv", ("nlps_id", "language"))
    ]
    for name, table in (
        ("authors", authors_table),
        ("unigrams", unigrams_table),
        ("bigrams", bigrams_table),
        ("languages", languages_table),
    ):
        dangling = {r["nlps_id"] for r in table} - papers.keys()
        if dangling:
            raise BuildError(
                f"{name} table references unknown papers: {sorted(dangling)[:5]}"
            )

    try:
        stats_raw = json.loads((out_dir / "stats.json").read_text(encoding="utf-8"))
    except OSError as err:
        raise IngestError(f"cannot read {out_dir / 'stats.json'}: {err}") from err
    return CorpusSnapshot(
        papers=papers,
        papers_table=papers_table,
        authors_table=authors_table,
        unigrams_table=unigrams_table,
        bigrams_table=bigrams_table,
        languages_table=languages_table,
        stats=AlignmentStats.from_dict(stats_raw),
        built_at=_now_iso(),
    )
