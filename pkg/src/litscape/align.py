"""Align anthology records with citation records by title/year/first-author.

Both sides are keyed by the same id: normalized title + "|" + year + "|" +
normalized first-author last name. A paper receives a citation count only
when exactly one paper and exactly one citation record share its key;
ambiguous keys (duplicated on either side) are counted as collisions and
left unaligned rather than resolved by guesswork, so alignment is
conservative and reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

from .ingest import IngestError, PaperRecord
from .textnorm import build_alignment_key, normalize_title

__all__ = [
    "CitationRecord",
    "AlignmentStats",
    "normalize_title",
    "build_alignment_key",
    "align",
    "alignment_report",
    "read_citations_file",
]

CITATIONS_HEADER = ("title", "year", "first_author_last", "n_citations")


@dataclass(frozen=True)
class CitationRecord:
    """One citation-source entry."""

    title: str
    year: int
    first_author_last: str
    n_citations: int

    @property
    def key(self) -> str:
        return build_alignment_key(self.title, self.year, self.first_author_last)


@dataclass(frozen=True)
class AlignmentStats:
    """Cardinalities and coverage of one alignment run."""

    n_anthology: int
    n_citation_records: int
    n_aligned: int
    coverage: float
    collisions: int

    def to_dict(self) -> dict:
        return {
            "n_anthology": self.n_anthology,
            "n_citation_records": self.n_citation_records,
            "n_aligned": self.n_aligned,
            "coverage": self.coverage,
            "collisions": self.collisions,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AlignmentStats":
        return cls(
            n_anthology=data["n_anthology"],
            n_citation_records=data["n_citation_records"],
            n_aligned=data["n_aligned"],
            coverage=data["coverage"],
            collisions=data["collisions"],
        )


def read_citations_file(path: str | Path) -> list[CitationRecord]:
    """Parse citations.tsv: title, year, first_author_last, n_citations."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as err:
        raise IngestError(f"cannot read {path}: {err}") from err
    if not lines:
        raise IngestError(f"empty citations file {path}: missing header row")
    header = tuple(col.strip() for col in lines[0].split("\t"))
    if header != CITATIONS_HEADER:
        raise IngestError(
            f"bad citations header: expected {CITATIONS_HEADER}, got {header}"
        )
    records = []
    for line_no, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        parts = [p.strip() for p in raw.split("\t")]
        if len(parts) != 4:
            raise IngestError(
                f"{path} line {line_no}: expected 4 columns, got {len(parts)}"
            )
        title, year_raw, last, count_raw = parts
        try:
            year = int(year_raw)
            count = int(count_raw)
        except ValueError as err:
            raise IngestError(f"{path} line {line_no}: {err}") from None
        if count < 0:
            raise IngestError(f"{path} line {line_no}: negative citation count")
        if not title or not last:
            raise IngestError(f"{path} line {line_no}: empty title or author")
        records.append(
            CitationRecord(
                title=title, year=year, first_author_last=last, n_citations=count
            )
        )
    return records


def align(
    anthology: list[PaperRecord], citations: Iterable[CitationRecord]
) -> tuple[list[PaperRecord], AlignmentStats]:
    """Populate n_citations on every unambiguously matched paper.

    Returns new records (inputs are immutable) in the anthology's order,
    plus the run's stats. Input order never changes which papers align:
    the decision depends only on key multiplicities.
    """
    paper_keys: dict[str, int] = {}
    for record in anthology:
        paper_keys[record.nlps_id] = paper_keys.get(record.nlps_id, 0) + 1

    citations_by_key: dict[str, list[CitationRecord]] = {}
    for citation in citations:
        citations_by_key.setdefault(citation.key, []).append(citation)

    collision_keys = {k for k, n in paper_keys.items() if n > 1}
    collision_keys.update(k for k, v in citations_by_key.items() if len(v) > 1)

    aligned: list[PaperRecord] = []
    n_aligned = 0
    for record in anthology:
        key = record.nlps_id
        matches = citations_by_key.get(key, [])
        if key not in collision_keys and len(matches) == 1:
            aligned.append(replace(record, n_citations=matches[0].n_citations))
            n_aligned += 1
        else:
            aligned.append(replace(record, n_citations=None))

    n_anthology = len(anthology)
    stats = AlignmentStats(
        n_anthology=n_anthology,
        n_citation_records=sum(len(v) for v in citations_by_key.values()),
        n_aligned=n_aligned,
        coverage=n_aligned / n_anthology if n_anthology else 0.0,
        collisions=len(collision_keys),
    )
    return aligned, stats


def alignment_report(stats: AlignmentStats) -> str:
    """Human-readable alignment summary with coverage as a whole percent."""
    percent = int(stats.coverage * 100 + 0.5)
    return "\n".join(
        [
            f"anthology papers:  {stats.n_anthology}",
            f"citation records:  {stats.n_citation_records}",
            f"aligned papers:    {stats.n_aligned} ({percent}%)",
            f"ambiguous keys:    {stats.collisions}",
        ]
    )
