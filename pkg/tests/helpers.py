"""Shared oracles and samplers for the test suite.

Everything here re-derives expectations with deliberately naive code:
linear scans, nested loops, literal dict arithmetic. None of it calls the
engine's query, join, or aggregation paths, so agreement between the two
is evidence, not tautology.
"""

from __future__ import annotations

import random

from litscape.fixtures import LANGUAGE_WORDS, LAST_NAMES, VENUES, CORE_WORDS


def oracle_papers(manifest: dict, snapshot) -> list[dict]:
    """Flatten the generator manifest into per-paper dicts the brute-force
    filter understands, with the engine's id attached for comparison."""
    by_aa = {record.aa_id: record.nlps_id for record in snapshot.papers.values()}
    rows = []
    for aa_id, truth in manifest["papers"].items():
        rows.append(
            {
                "aa_id": aa_id,
                "nlps_id": by_aa[aa_id],
                "year": truth["year"],
                "venue": truth["venue"],
                "paper_type": truth["paper_type"],
                "authors": truth["authors"],
                "unigrams": set(truth["unigrams"]),
                "bigrams": set(truth["bigrams"]),
                "languages": set(truth["languages"]),
            }
        )
    return rows


def brute_force_filter(papers: list[dict], spec_data: dict) -> set[str]:
    """Linear-scan evaluation of a raw spec dict; returns nlps_ids.

    Term strings are lowercased directly (samplers only emit clean ASCII
    tokens), so no engine tokenizer is involved.
    """
    excluded = set(spec_data.get("excluded_ids", []))
    result = set()
    for paper in papers:
        if paper["nlps_id"] in excluded:
            continue
        if "year_range" in spec_data:
            lo, hi = spec_data["year_range"]
            if not lo <= paper["year"] <= hi:
                continue
        if "years_clicked" in spec_data:
            if paper["year"] not in set(spec_data["years_clicked"]):
                continue
        if "venues" in spec_data:
            if paper["venue"] not in set(spec_data["venues"]):
                continue
        if "paper_types" in spec_data:
            if paper["paper_type"] not in set(spec_data["paper_types"]):
                continue
        if "author_query" in spec_data:
            q_last = spec_data["author_query"]["last"].lower()
            q_first = spec_data["author_query"].get("first")
            hit = False
            for display in paper["authors"]:
                last, _, first = display.partition(",")
                if last.strip().lower() != q_last:
                    continue
                if q_first is None or first.strip().lower() == q_first.lower():
                    hit = True
                    break
            if not hit:
                continue
        if "title_terms" in spec_data:
            terms = {t.lower() for t in spec_data["title_terms"]}
            if not terms & paper["unigrams"]:
                continue
        if "title_bigram" in spec_data:
            if spec_data["title_bigram"].lower() not in paper["bigrams"]:
                continue
        if "language" in spec_data:
            if spec_data["language"].lower() not in paper["languages"]:
                continue
        result.add(paper["nlps_id"])
    return result


def random_spec_data(rng: random.Random, papers: list[dict]) -> dict:
    """One random spec dict, biased so most facets sometimes match."""
    spec: dict = {}
    pool = CORE_WORDS + LANGUAGE_WORDS
    years = sorted({p["year"] for p in papers})
    if rng.random() < 0.4:
        lo = rng.choice(years)
        hi = rng.choice([y for y in years if y >= lo])
        spec["year_range"] = [lo, hi]
    if rng.random() < 0.2:
        spec["years_clicked"] = rng.sample(years, k=min(len(years), rng.randint(1, 3)))
    if rng.random() < 0.25:
        spec["venues"] = [v for v, _ in rng.sample(VENUES, k=rng.randint(1, 3))]
    if rng.random() < 0.2:
        spec["paper_types"] = rng.sample(
            ["journal", "main-conference", "workshop", "demo", "shared-task"],
            k=rng.randint(1, 2),
        )
    if rng.random() < 0.25:
        entry = {"last": rng.choice(LAST_NAMES).capitalize()}
        if rng.random() < 0.3:
            first = rng.choice(papers)["authors"][0].partition(",")[2].strip()
            entry["first"] = first
        spec["author_query"] = entry
    if rng.random() < 0.5:
        terms = [rng.choice(pool) for _ in range(rng.randint(1, 3))]
        if rng.random() < 0.3:
            terms = [t.upper() for t in terms]
        spec["title_terms"] = terms
    if rng.random() < 0.2:
        if rng.random() < 0.7:
            donor = rng.choice(papers)
            if donor["bigrams"]:
                spec["title_bigram"] = rng.choice(sorted(donor["bigrams"]))
        else:
            spec["title_bigram"] = f"{rng.choice(pool)} {rng.choice(pool)}"
    if rng.random() < 0.25:
        spec["language"] = rng.choice(LANGUAGE_WORDS)
    if rng.random() < 0.3:
        spec["excluded_ids"] = [
            p["nlps_id"] for p in rng.sample(papers, k=rng.randint(1, 3))
        ]
    return spec


def nested_loop_join(left: list[dict], right: list[dict], key: str) -> list[dict]:
    """O(n*m) reference join."""
    out = []
    for lrow in left:
        for rrow in right:
            if lrow[key] == rrow[key]:
                out.append({**lrow, **rrow})
    return out


def as_multiset(rows: list[dict]) -> list[tuple]:
    """Order-independent canonical form for row-list comparison."""
    return sorted(tuple(sorted(row.items())) for row in rows)
