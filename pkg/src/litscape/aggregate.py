"""Every number and list the dashboard renders for a filtered paper set.

All aggregations are pure functions over an immutable snapshot plus an id
set, with total, stated tie-breakers, so repeated queries serialize to
byte-identical JSON. Citation credit for coauthors is full (each paper
counts fully for every coauthor), and segment colors are content-addressed
rather than literally random so renders are reproducible.

Stopwords apply only to the unigram/bigram treemap display. The title
tables and term search keep every token.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .store import CorpusSnapshot

TREEMAP_FACETS = ("venue-type", "unigram", "bigram", "language")

# Separates venue from paper type in venue-type treemap labels.
VENUE_TYPE_SEP = " · "

DEFAULT_PALETTE_SIZE = 20
DEFAULT_TREEMAP_TOP_N = 40
DEFAULT_TOP_PAPERS_N = 30
DEFAULT_TOP_AUTHORS_N = 30


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Load the treemap stopword list (the packaged default, or a file)."""
    if path is None:
        text = resources.files("litscape").joinpath("data/stopwords.txt").read_text(
            encoding="utf-8"
        )
    else:
        text = Path(path).read_text(encoding="utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


@dataclass(frozen=True)
class YearSegments:
    """One year's citation bar: per-paper segments, tallest first."""

    year: int
    segments: tuple[tuple[str, int, int], ...]  # (nlps_id, n_citations, color_index)
    year_total: int

    def to_dict(self) -> dict:
        return {
            "year": self.year,
            "year_total": self.year_total,
            "segments": [
                {"nlps_id": s[0], "n_citations": s[1], "color_index": s[2]}
                for s in self.segments
            ],
        }


@dataclass(frozen=True)
class TreemapEntry:
    label: str
    paper_count: int
    facet: str

    def to_dict(self) -> dict:
        return {"label": self.label, "paper_count": self.paper_count, "facet": self.facet}


@dataclass(frozen=True)
class AggregateBundle:
    """All numbers one dashboard render needs, for one filter result."""

    papers_total: int
    papers_by_year: dict[int, int]
    citations_total: int
    citations_by_year: tuple[YearSegments, ...]
    top_papers: tuple[tuple[str, str, int, str, int | None], ...]
    top_authors: tuple[tuple[str, int, int], ...]
    treemap: tuple[TreemapEntry, ...]

    def to_dict(self) -> dict:
        return {
            "papers_total": self.papers_total,
            "papers_by_year": {str(y): n for y, n in self.papers_by_year.items()},
            "citations_total": self.citations_total,
            "citations_by_year": [ys.to_dict() for ys in self.citations_by_year],
            "top_papers": [
                {
                    "nlps_id": nlps_id,
                    "title": title,
                    "year": year,
                    "venue": venue,
                    "n_citations": n_citations,
                }
                for nlps_id, title, year, venue, n_citations in self.top_papers
            ],
            "top_authors": [
                {"name": name, "citations": citations, "papers": papers}
                for name, citations, papers in self.top_authors
            ],
            "treemap": [entry.to_dict() for entry in self.treemap],
        }


def canonical_json(obj) -> str:
    """The one JSON rendering used by both the CLI and the HTTP service."""
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def color_for_paper(nlps_id: str, palette_size: int) -> int:
    """Content-addressed palette index: stable across runs and processes.

    Visually "random" per paper, but reproducible, so the same corpus
    always renders the same way. Adjacent segments may repeat a color;
    with palettes much smaller than paper counts that is unavoidable.
    """
    if palette_size < 1:
        raise ValueError("palette_size must be >= 1")
    digest = hashlib.blake2b(nlps_id.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") % palette_size


def papers_by_year(snapshot: CorpusSnapshot, ids: set[str]) -> dict[int, int]:
    """Paper counts per publication year; zero-count years omitted."""
    counts: dict[int, int] = {}
    for nlps_id in ids:
        year = snapshot.papers[nlps_id].year
        counts[year] = counts.get(year, 0) + 1
    return dict(sorted(counts.items()))


def citations_by_year_segments(
    snapshot: CorpusSnapshot, ids: set[str], palette_size: int = DEFAULT_PALETTE_SIZE
) -> list[YearSegments]:
    """Per-year citation bars partitioned into per-paper segments.

    Only aligned papers contribute segments; a year whose filtered papers
    are all unaligned still appears, with an empty bar. Segments are
    sorted by citations descending, ties by paper id.
    """
    by_year: dict[int, list[tuple[str, int, int]]] = {}
    for nlps_id in ids:
        record = snapshot.papers[nlps_id]
        by_year.setdefault(record.year, [])
        if record.n_citations is not None:
            by_year[record.year].append(
                (nlps_id, record.n_citations, color_for_paper(nlps_id, palette_size))
            )
    result = []
    for year in sorted(by_year):
        segments = sorted(by_year[year], key=lambda s: (-s[1], s[0]))
        result.append(
            YearSegments(
                year=year,
                segments=tuple(segments),
                year_total=sum(s[1] for s in segments),
            )
        )
    return result


def top_papers(
    snapshot: CorpusSnapshot, ids: set[str], k: int
) -> list[tuple[str, str, int, str, int | None]]:
    """Most-cited papers: (nlps_id, title, year, venue, n_citations).

    Unaligned papers sort as zero citations. Ties break by year (newest
    first), then by paper id.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    records = [snapshot.papers[nlps_id] for nlps_id in ids]
    records.sort(key=lambda r: (-(r.n_citations or 0), -r.year, r.nlps_id))
    return [
        (r.nlps_id, r.title, r.year, r.venue, r.n_citations) for r in records[:k]
    ]


def top_authors(
    snapshot: CorpusSnapshot, ids: set[str], k: int
) -> list[tuple[str, int, int]]:
    """Most-cited authors: (canonical name, citation sum, paper count).

    Every coauthor is credited the paper's full citation count. Ties break
    by name.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    citations: dict[str, int] = {}
    paper_counts: dict[str, int] = {}
    for nlps_id in ids:
        record = snapshot.papers[nlps_id]
        for author in record.authors:
            citations[author.canonical] = (
                citations.get(author.canonical, 0) + (record.n_citations or 0)
            )
            paper_counts[author.canonical] = paper_counts.get(author.canonical, 0) + 1
    ranked = sorted(citations.items(), key=lambda item: (-item[1], item[0]))
    return [(name, total, paper_counts[name]) for name, total in ranked[:k]]


def treemap(
    snapshot: CorpusSnapshot,
    ids: set[str],
    facet: str,
    top_n: int,
    stopwords: frozenset[str] = frozenset(),
) -> list[TreemapEntry]:
    """Most common labels of one facet among the filtered papers.

    Counts are distinct papers per label. For the unigram and bigram
    facets, labels whose every token is a stopword are suppressed (display
    only -- search still finds them). Ties break by label.
    """
    if facet not in TREEMAP_FACETS:
        raise ValueError(f"unknown treemap facet {facet!r}")
    if top_n < 1:
        raise ValueError("top_n must be >= 1")

    counts: dict[str, int] = {}

    def bump(label: str) -> None:
        counts[label] = counts.get(label, 0) + 1

    if facet == "venue-type":
        for nlps_id in ids:
            record = snapshot.papers[nlps_id]
            bump(f"{record.venue}{VENUE_TYPE_SEP}{record.paper_type}")
    elif facet == "unigram":
        for nlps_id in ids:
            for token in snapshot.unigram_set(nlps_id):
                if token not in stopwords:
                    bump(token)
    elif facet == "bigram":
        for nlps_id in ids:
            for bigram in snapshot.bigram_set(nlps_id):
                first, _, second = bigram.partition(" ")
                if first in stopwords and second in stopwords:
                    continue
                bump(bigram)
    else:
        for nlps_id in ids:
            for language in snapshot.language_set(nlps_id):
                bump(language)

    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return [
        TreemapEntry(label=label, paper_count=count, facet=facet)
        for label, count in ranked[:top_n]
    ]


def compute_bundle(
    snapshot: CorpusSnapshot,
    ids: set[str],
    treemap_facet: str = "venue-type",
    palette_size: int = DEFAULT_PALETTE_SIZE,
    treemap_top_n: int = DEFAULT_TREEMAP_TOP_N,
    top_papers_n: int = DEFAULT_TOP_PAPERS_N,
    top_authors_n: int = DEFAULT_TOP_AUTHORS_N,
    stopwords: frozenset[str] = frozenset(),
) -> AggregateBundle:
    """Assemble the full bundle the dashboard renders for one filter result."""
    segments = citations_by_year_segments(snapshot, ids, palette_size)
    return AggregateBundle(
        papers_total=len(ids),
        papers_by_year=papers_by_year(snapshot, ids),
        citations_total=sum(ys.year_total for ys in segments),
        citations_by_year=tuple(segments),
        top_papers=tuple(top_papers(snapshot, ids, top_papers_n)) if ids else (),
        top_authors=tuple(top_authors(snapshot, ids, top_authors_n)) if ids else (),
        treemap=tuple(treemap(snapshot, ids, treemap_facet, treemap_top_n, stopwords)),
    )
