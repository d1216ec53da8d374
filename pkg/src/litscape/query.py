"""Filter evaluation: one semantics behind every dashboard interaction.

A :class:`FilterSpec` describes the user's current selection. Facets
combine conjunctively (a paper must satisfy every present facet) while the
title-term set is disjunctive inside its own facet (any shared token
matches). Term matching is exact token equality -- no stemming, so
"emotion" and "emotions" are different searches on purpose.

Evaluation is pure and read-only over an immutable snapshot, so any number
of concurrent evaluations are safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ingest import PaperRecord
from .store import CorpusSnapshot
from .textnorm import tokenize_title


class SpecError(ValueError):
    """A filter spec failed validation; the message names the field."""


@dataclass(frozen=True)
class FilterSpec:
    """Declarative description of a facet/term/year/exclusion selection.

    Absent facets (None) do not constrain; the all-absent spec selects
    every paper. ``excluded_ids`` applies last and always wins.
    """

    year_range: tuple[int, int] | None = None
    years_clicked: frozenset[int] | None = None
    venues: frozenset[str] | None = None
    paper_types: frozenset[str] | None = None
    author_query: tuple[str, str | None] | None = None
    title_terms: frozenset[str] | None = None
    title_bigram: str | None = None
    language: str | None = None
    excluded_ids: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.year_range is not None:
            lo, hi = self.year_range
            if lo > hi:
                raise SpecError(f"year_range: lo {lo} > hi {hi}")
        if self.author_query is not None and not self.author_query[0]:
            raise SpecError("author_query: last name must be non-empty")

    def is_empty(self) -> bool:
        return self == FilterSpec()

    def to_dict(self) -> dict:
        """Canonical JSON form: absent facets omitted, sets as sorted lists."""
        out: dict = {}
        if self.year_range is not None:
            out["year_range"] = list(self.year_range)
        if self.years_clicked is not None:
            out["years_clicked"] = sorted(self.years_clicked)
        if self.venues is not None:
            out["venues"] = sorted(self.venues)
        if self.paper_types is not None:
            out["paper_types"] = sorted(self.paper_types)
        if self.author_query is not None:
            last, first = self.author_query
            out["author_query"] = {"last": last}
            if first is not None:
                out["author_query"]["first"] = first
        if self.title_terms is not None:
            out["title_terms"] = sorted(self.title_terms)
        if self.title_bigram is not None:
            out["title_bigram"] = self.title_bigram
        if self.language is not None:
            out["language"] = self.language
        if self.excluded_ids:
            out["excluded_ids"] = sorted(self.excluded_ids)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "FilterSpec":
        """Parse the canonical JSON form, normalizing terms on the way in.

        Raises :class:`SpecError` naming the offending field. Free-text
        terms are run through the title tokenizer so a query like
        "Sentiment, Emotion" becomes the token set {sentiment, emotion};
        multi-token entries spread into several disjunctive terms.
        """
        if not isinstance(data, dict):
            raise SpecError("spec must be a JSON object")
        unknown = set(data) - {
            "year_range", "years_clicked", "venues", "paper_types",
            "author_query", "title_terms", "title_bigram", "language",
            "excluded_ids",
        }
        if unknown:
            raise SpecError(f"unknown fields: {sorted(unknown)}")

        kwargs: dict = {}
        if "year_range" in data:
            pair = data["year_range"]
            if (
                not isinstance(pair, (list, tuple))
                or len(pair) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in pair)
            ):
                raise SpecError("year_range: expected [lo, hi] integers")
            kwargs["year_range"] = (pair[0], pair[1])
        if "years_clicked" in data:
            years = data["years_clicked"]
            if not isinstance(years, (list, tuple)) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in years
            ):
                raise SpecError("years_clicked: expected a list of integers")
            kwargs["years_clicked"] = frozenset(years)
        if "venues" in data:
            kwargs["venues"] = frozenset(_string_list(data["venues"], "venues"))
        if "paper_types" in data:
            kwargs["paper_types"] = frozenset(
                _string_list(data["paper_types"], "paper_types")
            )
        if "author_query" in data:
            author = data["author_query"]
            if not isinstance(author, dict) or "last" not in author:
                raise SpecError("author_query: expected {last, first?}")
            last = author["last"]
            first = author.get("first")
            if not isinstance(last, str) or not last.strip():
                raise SpecError("author_query: last name must be a non-empty string")
            if first is not None and not isinstance(first, str):
                raise SpecError("author_query: first name must be a string")
            kwargs["author_query"] = (last.strip(), first.strip() if first else first)
        if "title_terms" in data:
            terms = set()
            for entry in _string_list(data["title_terms"], "title_terms"):
                terms.update(tokenize_title(entry))
            if not terms:
                raise SpecError("title_terms: no usable tokens")
            kwargs["title_terms"] = frozenset(terms)
        if "title_bigram" in data:
            raw = data["title_bigram"]
            if not isinstance(raw, str):
                raise SpecError("title_bigram: expected a string")
            tokens = tokenize_title(raw)
            if len(tokens) != 2:
                raise SpecError(
                    f"title_bigram: expected exactly two tokens, got {len(tokens)}"
                )
            kwargs["title_bigram"] = " ".join(tokens)
        if "language" in data:
            raw = data["language"]
            if not isinstance(raw, str) or not raw.strip():
                raise SpecError("language: expected a non-empty string")
            kwargs["language"] = raw.strip().lower()
        if "excluded_ids" in data:
            kwargs["excluded_ids"] = frozenset(
                _string_list(data["excluded_ids"], "excluded_ids")
            )
        return cls(**kwargs)


def _string_list(value, fieldname: str) -> list[str]:
    if not isinstance(value, (list, tuple)) or not all(
        isinstance(v, str) for v in value
    ):
        raise SpecError(f"{fieldname}: expected a list of strings")
    return [v for v in (s.strip() for s in value) if v]


def terms_match(title_unigram_set: frozenset[str] | set[str], terms: frozenset[str] | set[str]) -> bool:
    """True iff the title shares at least one token with the term set."""
    return not title_unigram_set.isdisjoint(terms)


def author_match(paper: PaperRecord, query: tuple[str, str | None]) -> bool:
    """True iff some author matches the (last, optional first) query.

    Matching is case-insensitive and exact; no prefix matching, because
    author clicks come from the canonical authors list which supplies full
    names.
    """
    last, first = query
    for author in paper.authors:
        if author.last.lower() != last.lower():
            continue
        if first is None or author.first.lower() == first.lower():
            return True
    return False


def apply_filter(snapshot: CorpusSnapshot, spec: FilterSpec) -> set[str]:
    """Ids of papers satisfying every present facet, minus exclusions.

    Works on the snapshot's inverted indexes: each facet contributes a
    candidate id set and the result is their intersection. The test suite
    checks this against a brute-force per-paper scan.
    """
    facet_sets: list[set[str]] = []

    if spec.year_range is not None:
        lo, hi = spec.year_range
        ids: set[str] = set()
        for year, bucket in snapshot.ids_by_year.items():
            if lo <= year <= hi:
                ids |= bucket
        facet_sets.append(ids)
    if spec.years_clicked is not None:
        ids = set()
        for year in spec.years_clicked:
            ids |= snapshot.ids_by_year.get(year, set())
        facet_sets.append(ids)
    if spec.venues is not None:
        ids = set()
        for venue in spec.venues:
            ids |= snapshot.ids_by_venue.get(venue, set())
        facet_sets.append(ids)
    if spec.paper_types is not None:
        ids = set()
        for paper_type in spec.paper_types:
            ids |= snapshot.ids_by_type.get(paper_type, set())
        facet_sets.append(ids)
    if spec.author_query is not None:
        last, first = spec.author_query
        if first is None:
            ids = set(snapshot.ids_by_author_last.get(last.lower(), set()))
        else:
            ids = set(snapshot.ids_by_author.get((last.lower(), first.lower()), set()))
        facet_sets.append(ids)
    if spec.title_terms is not None:
        ids = set()
        for term in spec.title_terms:
            ids |= snapshot.ids_by_unigram.get(term, set())
        facet_sets.append(ids)
    if spec.title_bigram is not None:
        facet_sets.append(set(snapshot.ids_by_bigram.get(spec.title_bigram, set())))
    if spec.language is not None:
        facet_sets.append(set(snapshot.ids_by_language.get(spec.language, set())))

    if facet_sets:
        result = set.intersection(*facet_sets)
    else:
        result = set(snapshot.all_ids)
    return result - spec.excluded_ids
