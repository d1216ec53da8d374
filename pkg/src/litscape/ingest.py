"""Parse anthology-export TSV files into validated paper records.

The input schema is a tab-separated file with a header row and the columns
``aa_id, title, year, venue, paper_type, authors`` where the authors field
holds semicolon-separated "Last, First" entries. Malformed lines never
become records: they are collected in the ingest report with their file
line number, so one bad row does not sink a 50K-row export.

Anthology dumps include entries that are not research papers (forewords,
schedules, whole-proceedings rows); :func:`filter_non_papers` removes them
with an explicit, overridable predicate.
"""

from __future__ import annotations

import datetime as _dt
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .textnorm import build_alignment_key

PAPER_TYPES = (
    "journal",
    "main-conference",
    "workshop",
    "demo",
    "shared-task",
    "tutorial",
    "other",
)

MIN_YEAR = 1965

PAPERS_HEADER = ("aa_id", "title", "year", "venue", "paper_type", "authors")
ALIASES_HEADER = ("variant_last", "variant_first", "canonical_last", "canonical_first")

# Titles that mark front matter and other non-research entries.
_NON_PAPER_TITLE = re.compile(
    r"^(proceedings of|front matter|program|schedule)\b", re.IGNORECASE
)
# Anthology id patterns for whole-volume/front-matter entries: old-style ids
# ending in 000 (e.g. P99-1000) and new-style ids with paper number 0.
_NON_PAPER_AA_ID = re.compile(r"(^[A-Z]\d{2}-\d*000$)|(\.0$)")


class IngestError(Exception):
    """Input could not be ingested at all (missing file, bad header)."""


@dataclass(frozen=True)
class AuthorName:
    """One author of a paper, with the resolved display form."""

    first: str
    last: str
    canonical: str


@dataclass(frozen=True)
class PaperRecord:
    """One anthology paper; the unit everything downstream operates on."""

    nlps_id: str
    aa_id: str
    title: str
    year: int
    venue: str
    paper_type: str
    authors: tuple[AuthorName, ...]
    n_citations: int | None = None


@dataclass
class IngestReport:
    """Bookkeeping for one ingest run.

    ``total_read == kept + discarded_non_papers + len(parse_errors)`` holds
    at every stage: right after parsing ``discarded_non_papers`` is 0, and
    the non-paper filter moves counts from ``kept`` to it.
    """

    total_read: int = 0
    kept: int = 0
    discarded_non_papers: int = 0
    parse_errors: list[tuple[int, str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "total_read": self.total_read,
            "kept": self.kept,
            "discarded_non_papers": self.discarded_non_papers,
            "parse_errors": [
                {"line": line_no, "message": message}
                for line_no, message in self.parse_errors
            ],
        }

    def summary(self) -> str:
        lines = [
            f"rows read:          {self.total_read}",
            f"papers kept:        {self.kept}",
            f"non-papers dropped: {self.discarded_non_papers}",
            f"parse errors:       {len(self.parse_errors)}",
        ]
        for line_no, message in self.parse_errors:
            lines.append(f"  line {line_no}: {message}")
        return "\n".join(lines)


AliasTable = dict[tuple[str, str], tuple[str, str]]


def load_aliases(path: str | Path) -> AliasTable:
    """Load a variant -> canonical author-name table from aliases.tsv."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as err:
        raise IngestError(f"cannot read alias table {path}: {err}") from err
    if not lines:
        return {}
    header = tuple(col.strip() for col in lines[0].split("\t"))
    if header != ALIASES_HEADER:
        raise IngestError(
            f"bad alias header in {path}: expected {ALIASES_HEADER}, got {header}"
        )
    table: AliasTable = {}
    for raw in lines[1:]:
        if not raw.strip():
            continue
        parts = [p.strip() for p in raw.split("\t")]
        if len(parts) != 4:
            raise IngestError(f"alias row needs 4 columns, got {len(parts)}: {raw!r}")
        variant_last, variant_first, canonical_last, canonical_first = parts
        table[(variant_last.lower(), variant_first.lower())] = (
            canonical_last,
            canonical_first,
        )
    return table


def canonicalize_author(
    first: str, last: str, aliases: AliasTable | None = None
) -> AuthorName:
    """Resolve a raw first/last pair through the alias table.

    Unknown names map to themselves. Alias chains (A -> B, B -> C) are
    followed to their end so the operation is idempotent; cycles stop at
    the first repeated name.
    """
    if not last.strip():
        raise ValueError("author last name must be non-empty")
    first = first.strip()
    last = last.strip()
    aliases = aliases or {}
    seen = {(last.lower(), first.lower())}
    while (last.lower(), first.lower()) in aliases:
        last, first = aliases[(last.lower(), first.lower())]
        key = (last.lower(), first.lower())
        if key in seen:
            break
        seen.add(key)
    canonical = f"{last}, {first}" if first else last
    return AuthorName(first=first, last=last, canonical=canonical)


def _derive_paper_type(raw: str, venue: str) -> str:
    """Resolve the paper_type column; fall back to venue heuristics."""
    tag = raw.strip().lower()
    if tag in PAPER_TYPES:
        return tag
    venue_l = venue.lower()
    if "workshop" in venue_l:
        return "workshop"
    if "journal" in venue_l or "transactions" in venue_l:
        return "journal"
    if "demo" in venue_l:
        return "demo"
    if "shared task" in venue_l:
        return "shared-task"
    if "tutorial" in venue_l:
        return "tutorial"
    return "other"


def _parse_authors(raw: str, aliases: AliasTable) -> tuple[AuthorName, ...]:
    authors = []
    for entry in raw.split(";"):
        entry = entry.strip()
        if not entry:
            continue
        last, _, first = entry.partition(",")
        authors.append(canonicalize_author(first.strip(), last.strip(), aliases))
    if not authors:
        raise ValueError("authors field is empty")
    return tuple(authors)


def parse_anthology_export(
    stream: Iterable[str], aliases: AliasTable | None = None, max_year: int | None = None
) -> tuple[list[PaperRecord], IngestReport]:
    """Parse a papers.tsv stream into records plus an ingest report.

    Malformed lines (wrong column count, bad year, empty authors,
    duplicate aa_id) land in ``report.parse_errors`` keyed by their
    physical line number and never become records.
    """
    aliases = aliases or {}
    if max_year is None:
        max_year = _dt.date.today().year
    lines: Iterator[tuple[int, str]] = (
        (i, line.rstrip("\n").rstrip("\r")) for i, line in enumerate(stream, start=1)
    )
    try:
        header_no, header_line = next(lines)
    except StopIteration:
        raise IngestError("empty input: missing header row") from None
    header = tuple(col.strip() for col in header_line.split("\t"))
    if header != PAPERS_HEADER:
        raise IngestError(f"bad header: expected {PAPERS_HEADER}, got {header}")

    records: list[PaperRecord] = []
    report = IngestReport()
    seen_aa_ids: set[str] = set()
    for line_no, line in lines:
        if not line.strip():
            continue
        report.total_read += 1
        try:
            records.append(
                _parse_row(line, aliases, max_year=max_year, seen_aa_ids=seen_aa_ids)
            )
        except ValueError as err:
            report.parse_errors.append((line_no, str(err)))
    report.kept = len(records)
    return records, report


def _parse_row(
    line: str, aliases: AliasTable, max_year: int, seen_aa_ids: set[str]
) -> PaperRecord:
    parts = line.split("\t")
    if len(parts) != len(PAPERS_HEADER):
        raise ValueError(f"expected {len(PAPERS_HEADER)} columns, got {len(parts)}")
    aa_id, title, year_raw, venue, type_raw, authors_raw = (p.strip() for p in parts)
    if not aa_id:
        raise ValueError("empty aa_id")
    if aa_id in seen_aa_ids:
        raise ValueError(f"duplicate aa_id {aa_id}")
    if not title:
        raise ValueError("empty title")
    try:
        year = int(year_raw)
    except ValueError:
        raise ValueError(f"invalid year {year_raw!r}") from None
    if not MIN_YEAR <= year <= max_year:
        raise ValueError(f"year {year} outside [{MIN_YEAR}, {max_year}]")
    authors = _parse_authors(authors_raw, aliases)
    nlps_id = build_alignment_key(title, year, authors[0].last)
    seen_aa_ids.add(aa_id)
    return PaperRecord(
        nlps_id=nlps_id,
        aa_id=aa_id,
        title=title,
        year=year,
        venue=venue,
        paper_type=_derive_paper_type(type_raw, venue),
        authors=authors,
    )


def read_papers_file(
    path: str | Path, aliases: AliasTable | None = None
) -> tuple[list[PaperRecord], IngestReport]:
    """Parse papers.tsv from disk; IngestError when the file is unreadable."""
    try:
        with open(path, encoding="utf-8") as stream:
            return parse_anthology_export(stream, aliases)
    except OSError as err:
        raise IngestError(f"cannot read {path}: {err}") from err


def is_non_paper(record: PaperRecord) -> bool:
    """True for front matter, schedules, and other non-research entries."""
    return bool(
        _NON_PAPER_TITLE.match(record.title) or _NON_PAPER_AA_ID.search(record.aa_id)
    )


def filter_non_papers(
    records: list[PaperRecord], predicate=is_non_paper
) -> tuple[list[PaperRecord], int]:
    """Partition records into (kept research papers, discarded count)."""
    kept = [r for r in records if not predicate(r)]
    return kept, len(records) - len(kept)


def format_authors(authors: Iterable[AuthorName]) -> str:
    """Render authors in the input-file format ("Last, First; Last")."""
    return "; ".join(
        f"{a.last}, {a.first}" if a.first else a.last for a in authors
    )


def serialize_records(records: Iterable[PaperRecord]) -> str:
    """Render records back into the papers.tsv input format.

    Parsing the result yields an identical record list (round-trip
    stability), which also makes ingest restartable from its own output.
    """
    lines = ["\t".join(PAPERS_HEADER)]
    for r in records:
        lines.append(
            "\t".join(
                (r.aa_id, r.title, str(r.year), r.venue, r.paper_type,
                 format_authors(r.authors))
            )
        )
    return "\n".join(lines) + "\n"
