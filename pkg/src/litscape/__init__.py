"""Anthology citation analytics: ingest, align, query, aggregate, serve."""

from .aggregate import (
    AggregateBundle,
    TreemapEntry,
    YearSegments,
    canonical_json,
    color_for_paper,
    compute_bundle,
    load_stopwords,
)
from .align import (
    AlignmentStats,
    CitationRecord,
    align,
    alignment_report,
    read_citations_file,
)
from .ingest import (
    AuthorName,
    IngestError,
    IngestReport,
    PaperRecord,
    canonicalize_author,
    filter_non_papers,
    is_non_paper,
    load_aliases,
    parse_anthology_export,
    read_papers_file,
)
from .pipeline import (
    BuildResult,
    EngineConfig,
    build_corpus,
    build_from_dir,
    paper_payload,
    run_query,
)
from .query import FilterSpec, SpecError, apply_filter
from .store import (
    BuildError,
    CorpusSnapshot,
    build_tables,
    detect_language_mentions,
    extract_title_bigrams,
    extract_title_unigrams,
    inner_join,
    load_language_lexicon,
    load_snapshot,
    write_snapshot,
)
from .textnorm import build_alignment_key, normalize_title, tokenize_title

__version__ = "0.1.0"

__all__ = [
    "AggregateBundle",
    "AlignmentStats",
    "AuthorName",
    "BuildError",
    "BuildResult",
    "CitationRecord",
    "CorpusSnapshot",
    "EngineConfig",
    "FilterSpec",
    "IngestError",
    "IngestReport",
    "PaperRecord",
    "SpecError",
    "TreemapEntry",
    "YearSegments",
    "align",
    "alignment_report",
    "apply_filter",
    "build_alignment_key",
    "build_corpus",
    "build_from_dir",
    "build_tables",
    "canonical_json",
    "canonicalize_author",
    "color_for_paper",
    "compute_bundle",
    "detect_language_mentions",
    "extract_title_bigrams",
    "extract_title_unigrams",
    "filter_non_papers",
    "inner_join",
    "is_non_paper",
    "load_aliases",
    "load_language_lexicon",
    "load_snapshot",
    "load_stopwords",
    "normalize_title",
    "paper_payload",
    "parse_anthology_export",
    "read_citations_file",
    "read_papers_file",
    "run_query",
    "tokenize_title",
    "write_snapshot",
]
