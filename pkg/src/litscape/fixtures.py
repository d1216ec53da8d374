"""Seeded synthetic corpora with known ground truth.

The generator builds a papers/citations file pair plus a manifest stating
exactly what a correct pipeline must produce: which papers align, every
paper's citation count, and the cardinality of every derived table. The
manifest is computed by the generator's own arithmetic over the ASCII
word lists below, not by calling the ingest or alignment code, so tests
comparing engine output against it are comparing two independent
implementations.

All generated text is lowercase ASCII (plus internal hyphens), which
keeps the generator's notion of a normalized title -- hyphens to spaces,
nothing else -- trivially correct. Unicode handling is exercised by unit
tests, not by fixtures.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

# Title vocabulary. None of these words may name a language (or appear as
# a token of a multi-word lexicon entry), or the manifest's language
# counts would drift from the engine's.
CORE_WORDS = (
    "neural", "parsing", "translation", "sentiment", "analysis", "machine",
    "learning", "deep", "attention", "embedding", "multi-task",
    "cross-lingual", "low-resource", "sequence", "labeling", "dialogue",
    "summarization", "question", "answering", "speech", "recognition",
    "morphology", "syntax", "semantics", "discourse", "coreference",
    "entity", "relation", "extraction", "classification", "generation",
    "model", "models", "corpus", "corpora", "annotation", "treebank",
    "grammar", "tagging", "lexicon", "knowledge", "graph", "retrieval",
    "evaluation", "metrics", "emotion", "emotions", "word", "sense",
    "disambiguation", "transfer", "zero-shot", "pretraining",
    "fine-tuning", "study", "survey", "approach", "framework",
)

# Single-token entries of the packaged language lexicon.
LANGUAGE_WORDS = (
    "english", "chinese", "swahili", "hindi", "arabic", "french", "german",
    "japanese", "korean", "turkish", "finnish", "basque",
)

LAST_NAMES = (
    "smith", "lee", "chen", "kumar", "garcia", "novak", "tanaka", "okafor",
    "jensen", "moreau", "silva", "kowalski", "haddad", "berg", "rossi",
)

FIRST_NAMES = (
    "anna", "boris", "carla", "david", "elena", "frank", "grace", "henry",
    "irene", "jun", "kavya", "liang", "maria", "noor", "omar", "priya",
    "quinn", "rosa", "sven", "tara",
)

VENUES = (
    ("ACL", "main-conference"),
    ("EMNLP", "main-conference"),
    ("NAACL", "main-conference"),
    ("COLING", "main-conference"),
    ("CL", "journal"),
    ("TACL", "journal"),
    ("WMT", "workshop"),
    ("BEA", "workshop"),
    ("SemEval", "shared-task"),
    ("CoNLL", "shared-task"),
    ("ACL-demo", "demo"),
    ("EMNLP-tutorial", "tutorial"),
)

PAPERS_HEADER_LINE = "aa_id\ttitle\tyear\tvenue\tpaper_type\tauthors"
CITATIONS_HEADER_LINE = "title\tyear\tfirst_author_last\tn_citations"


@dataclass(frozen=True)
class SyntheticCorpus:
    papers_tsv: str
    citations_tsv: str
    manifest: dict


def _round_half_up(x: float) -> int:
    return int(x + 0.5)


def _norm_title(words: list[str]) -> str:
    # Hyphenated words split into their parts; everything else is already
    # lowercase single-space ASCII.
    return " ".join(part for w in words for part in w.split("-"))


def _display_title(words: list[str]) -> str:
    raw = " ".join(words)
    return raw[0].upper() + raw[1:]


def _case_variant(rng: random.Random, text: str) -> str:
    """A string that normalizes to the same thing as ``text``."""
    roll = rng.random()
    if roll < 0.25:
        text = text.lower()
    elif roll < 0.5:
        text = text.upper()
    if rng.random() < 0.2:
        text = text + "."
    return text


def generate_corpus(
    seed: int,
    n_papers: int,
    alignment_rate: float = 0.7,
    collision_rate: float = 0.0,
    year_range: tuple[int, int] = (1990, 2021),
    vocabulary: tuple[str, ...] | None = None,
    n_non_papers: int = 0,
    stray_rate: float = 0.1,
) -> SyntheticCorpus:
    """Generate a corpus where exactly round(alignment_rate * n_papers)
    papers align and round(collision_rate * n_papers) have ambiguous keys.

    Collision papers get two citation records sharing their key, so a
    correct aligner must leave them unaligned and report one ambiguous
    key each. Some unaligned papers get a near-miss citation record (year
    off by one); strays match no paper at all.

    A custom ``vocabulary`` must stick to lowercase ASCII words (internal
    hyphens allowed) that are not language names, or the manifest's
    language counts will not match the engine's.
    """
    if n_papers < 1:
        raise ValueError("n_papers must be >= 1")
    if not 0.0 <= alignment_rate <= 1.0:
        raise ValueError("alignment_rate must be in [0, 1]")
    if not 0.0 <= collision_rate <= 1.0:
        raise ValueError("collision_rate must be in [0, 1]")
    n_aligned = _round_half_up(alignment_rate * n_papers)
    n_collisions = _round_half_up(collision_rate * n_papers)
    if n_aligned + n_collisions > n_papers:
        raise ValueError("alignment_rate + collision_rate exceed the corpus")

    rng = random.Random(seed)
    pool = tuple(vocabulary) if vocabulary else CORE_WORDS + LANGUAGE_WORDS
    lang_set = set(LANGUAGE_WORDS) & set(pool)

    used_norm_titles: set[str] = set()

    def fresh_title() -> list[str]:
        for _ in range(1000):
            words = [rng.choice(pool) for _ in range(rng.randint(3, 8))]
            if _norm_title(words) not in used_norm_titles:
                used_norm_titles.add(_norm_title(words))
                return words
        raise RuntimeError("vocabulary exhausted; lower n_papers")

    papers = []
    for i in range(n_papers):
        words = fresh_title()
        year = rng.randint(*year_range)
        venue, paper_type = rng.choice(VENUES)
        k_authors = rng.randint(1, 4)
        authors = [
            (rng.choice(LAST_NAMES).capitalize(), rng.choice(FIRST_NAMES).capitalize())
            for _ in range(k_authors)
        ]
        papers.append(
            {
                "aa_id": f"G{seed % 90 + 10:02d}-{2001 + 2 * i}",
                "words": words,
                "title": _display_title(words),
                "year": year,
                "venue": venue,
                "paper_type": paper_type,
                "authors": authors,
            }
        )

    order = list(range(n_papers))
    rng.shuffle(order)
    aligned_idx = set(order[:n_aligned])
    collision_idx = set(order[n_aligned : n_aligned + n_collisions])

    citation_rows = []
    for i, paper in enumerate(papers):
        last = paper["authors"][0][0]
        if i in aligned_idx:
            paper["n_citations"] = rng.randint(0, 400)
            citation_rows.append(
                (
                    _case_variant(rng, paper["title"]),
                    paper["year"],
                    _case_variant(rng, last),
                    paper["n_citations"],
                )
            )
        elif i in collision_idx:
            paper["n_citations"] = None
            for _ in range(2):
                citation_rows.append(
                    (
                        _case_variant(rng, paper["title"]),
                        paper["year"],
                        _case_variant(rng, last),
                        rng.randint(0, 400),
                    )
                )
        else:
            paper["n_citations"] = None
            if rng.random() < 0.4:
                citation_rows.append(
                    (paper["title"], paper["year"] + 1, last, rng.randint(0, 400))
                )

    for _ in range(_round_half_up(stray_rate * n_papers)):
        words = fresh_title()
        citation_rows.append(
            (
                _display_title(words),
                rng.randint(*year_range),
                rng.choice(LAST_NAMES).capitalize(),
                rng.randint(0, 400),
            )
        )
    rng.shuffle(citation_rows)

    non_paper_lines = []
    for j in range(n_non_papers):
        topic = rng.choice(CORE_WORDS).capitalize()
        non_paper_lines.append(
            "\t".join(
                (
                    f"G{seed % 90 + 10:02d}-{2001 + 2 * (n_papers + j)}",
                    f"Proceedings of the Workshop on {topic}",
                    str(rng.randint(*year_range)),
                    "WS",
                    "workshop",
                    "Editor, Some",
                )
            )
        )

    paper_lines = []
    for paper in papers:
        authors_str = "; ".join(f"{last}, {first}" for last, first in paper["authors"])
        paper_lines.append(
            "\t".join(
                (
                    paper["aa_id"],
                    paper["title"],
                    str(paper["year"]),
                    paper["venue"],
                    paper["paper_type"],
                    authors_str,
                )
            )
        )
    body = paper_lines + non_paper_lines
    rng.shuffle(body)
    papers_tsv = "\n".join([PAPERS_HEADER_LINE] + body) + "\n"
    citations_tsv = (
        "\n".join(
            [CITATIONS_HEADER_LINE]
            + ["\t".join((t, str(y), l, str(n))) for t, y, l, n in citation_rows]
        )
        + "\n"
    )

    manifest_papers = {}
    table_rows = {"papers": n_papers, "authors": 0, "unigrams": 0, "bigrams": 0,
                  "languages": 0}
    for i, paper in enumerate(papers):
        words = paper["words"]
        unigrams = sorted(set(words))
        bigrams = sorted({f"{a} {b}" for a, b in zip(words, words[1:])})
        languages = sorted(set(words) & lang_set)
        table_rows["authors"] += len(paper["authors"])
        table_rows["unigrams"] += len(unigrams)
        table_rows["bigrams"] += len(bigrams)
        table_rows["languages"] += len(languages)
        manifest_papers[paper["aa_id"]] = {
            "aligned": i in aligned_idx,
            "n_citations": paper["n_citations"],
            "year": paper["year"],
            "venue": paper["venue"],
            "paper_type": paper["paper_type"],
            "authors": [f"{last}, {first}" for last, first in paper["authors"]],
            "unigrams": unigrams,
            "bigrams": bigrams,
            "languages": languages,
        }

    manifest = {
        "seed": seed,
        "n_papers": n_papers,
        "expected": {
            "total_rows": n_papers + n_non_papers,
            "kept": n_papers,
            "discarded_non_papers": n_non_papers,
            "n_citation_records": len(citation_rows),
            "n_aligned": n_aligned,
            "collisions": n_collisions,
            "coverage": n_aligned / n_papers,
            "citations_total": sum(
                p["n_citations"] for p in papers if p["n_citations"] is not None
            ),
            "table_rows": table_rows,
        },
        "papers": manifest_papers,
    }
    return SyntheticCorpus(
        papers_tsv=papers_tsv, citations_tsv=citations_tsv, manifest=manifest
    )


def write_corpus(corpus: SyntheticCorpus, data_dir: str | Path) -> None:
    """Write papers.tsv, citations.tsv, and manifest.json into data_dir."""
    data_dir = Path(data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    (data_dir / "papers.tsv").write_text(corpus.papers_tsv, encoding="utf-8")
    (data_dir / "citations.tsv").write_text(corpus.citations_tsv, encoding="utf-8")
    (data_dir / "manifest.json").write_text(
        json.dumps(corpus.manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
