"""End-to-end composition: raw export files in, query-ready snapshot out.

The CLI and the HTTP service both run builds and answer queries through
this module, so a query against the same snapshot yields the same bytes
no matter which front door it came through.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .aggregate import (
    DEFAULT_PALETTE_SIZE,
    DEFAULT_TOP_AUTHORS_N,
    DEFAULT_TOP_PAPERS_N,
    DEFAULT_TREEMAP_TOP_N,
    compute_bundle,
    load_stopwords,
)
from .align import AlignmentStats, align, read_citations_file
from .ingest import (
    IngestError,
    IngestReport,
    filter_non_papers,
    format_authors,
    load_aliases,
    read_papers_file,
)
from .query import FilterSpec, apply_filter
from .store import CorpusSnapshot, build_tables, load_language_lexicon

PAPERS_FILE = "papers.tsv"
CITATIONS_FILE = "citations.tsv"
ALIASES_FILE = "aliases.tsv"


@dataclass(frozen=True)
class EngineConfig:
    """Tunables shared by the CLI and the service."""

    palette_size: int = DEFAULT_PALETTE_SIZE
    treemap_top_n: int = DEFAULT_TREEMAP_TOP_N
    top_papers_n: int = DEFAULT_TOP_PAPERS_N
    top_authors_n: int = DEFAULT_TOP_AUTHORS_N
    stopwords: frozenset[str] = field(default_factory=load_stopwords)
    lexicon: frozenset[str] = field(default_factory=load_language_lexicon)

    @classmethod
    def from_files(
        cls,
        palette_size: int = DEFAULT_PALETTE_SIZE,
        treemap_top_n: int = DEFAULT_TREEMAP_TOP_N,
        top_papers_n: int = DEFAULT_TOP_PAPERS_N,
        top_authors_n: int = DEFAULT_TOP_AUTHORS_N,
        stopword_file: str | Path | None = None,
        lexicon_file: str | Path | None = None,
    ) -> "EngineConfig":
        if palette_size < 1:
            raise ValueError("palette_size must be >= 1")
        for name, value in (
            ("treemap_top_n", treemap_top_n),
            ("top_papers_n", top_papers_n),
            ("top_authors_n", top_authors_n),
        ):
            if value < 1:
                raise ValueError(f"{name} must be >= 1")
        return cls(
            palette_size=palette_size,
            treemap_top_n=treemap_top_n,
            top_papers_n=top_papers_n,
            top_authors_n=top_authors_n,
            stopwords=load_stopwords(stopword_file),
            lexicon=load_language_lexicon(lexicon_file),
        )


@dataclass(frozen=True)
class BuildResult:
    snapshot: CorpusSnapshot
    report: IngestReport
    stats: AlignmentStats


def build_corpus(
    papers_path: str | Path,
    citations_path: str | Path,
    aliases_path: str | Path | None = None,
    config: EngineConfig | None = None,
) -> BuildResult:
    """Run the whole ingest-align-build pipeline from explicit file paths."""
    config = config or EngineConfig()
    aliases = load_aliases(aliases_path) if aliases_path is not None else {}
    records, report = read_papers_file(papers_path, aliases)
    records, discarded = filter_non_papers(records)
    report.kept -= discarded
    report.discarded_non_papers += discarded
    citations = read_citations_file(citations_path)
    records, stats = align(records, citations)
    snapshot = build_tables(records, config.lexicon, stats=stats)
    return BuildResult(snapshot=snapshot, report=report, stats=stats)


def build_from_dir(
    data_dir: str | Path, config: EngineConfig | None = None
) -> BuildResult:
    """Build from a directory holding papers.tsv, citations.tsv, and
    optionally aliases.tsv."""
    data_dir = Path(data_dir)
    papers_path = data_dir / PAPERS_FILE
    citations_path = data_dir / CITATIONS_FILE
    for path in (papers_path, citations_path):
        if not path.is_file():
            raise IngestError(f"missing input file: {path}")
    aliases_path = data_dir / ALIASES_FILE
    return build_corpus(
        papers_path,
        citations_path,
        aliases_path if aliases_path.is_file() else None,
        config,
    )


def run_query(
    snapshot: CorpusSnapshot,
    spec: FilterSpec,
    config: EngineConfig | None = None,
    facet: str = "venue-type",
) -> dict:
    """Evaluate one filter and aggregate the result.

    The envelope echoes the canonicalized spec so callers can confirm
    what was actually evaluated (and match async responses to requests).
    """
    config = config or EngineConfig()
    ids = apply_filter(snapshot, spec)
    bundle = compute_bundle(
        snapshot,
        ids,
        treemap_facet=facet,
        palette_size=config.palette_size,
        treemap_top_n=config.treemap_top_n,
        top_papers_n=config.top_papers_n,
        top_authors_n=config.top_authors_n,
        stopwords=config.stopwords,
    )
    return {"spec": spec.to_dict(), "facet": facet, "bundle": bundle.to_dict()}


def paper_payload(snapshot: CorpusSnapshot, nlps_id: str) -> dict | None:
    """The hover-box payload for one paper; None when the id is unknown.

    Papers without a citation record report the literal string
    "unaligned" rather than a count of zero; the dashboard shows it
    verbatim, and zero stays distinguishable from unknown.
    """
    record = snapshot.papers.get(nlps_id)
    if record is None:
        return None
    return {
        "nlps_id": record.nlps_id,
        "aa_id": record.aa_id,
        "title": record.title,
        "year": record.year,
        "venue": record.venue,
        "paper_type": record.paper_type,
        "authors": format_authors(record.authors),
        "n_citations": "unaligned" if record.n_citations is None else record.n_citations,
    }
