"""End-to-end acceptance checks, one test per promised behavior.

Each test here restates one external guarantee of the engine and proves
it against an independent oracle: the fixture generator's own ground
truth, a nested-loop reference join, a brute-force filter scan, or the
service bypassed through direct library calls. Nothing in this file
reuses engine internals to compute an expected value.
"""

from __future__ import annotations

import json
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor

import pytest
from starlette.testclient import TestClient

from litscape.aggregate import canonical_json, compute_bundle
from litscape.cli import main
from litscape.fixtures import generate_corpus, write_corpus
from litscape.pipeline import BuildResult, EngineConfig, build_from_dir, run_query
from litscape.query import FilterSpec, apply_filter
from litscape.service import create_app
from litscape.store import SNAPSHOT_FILES, build_tables, inner_join

from helpers import (
    as_multiset,
    brute_force_filter,
    nested_loop_join,
    oracle_papers,
    random_spec_data,
)

N_FILTER_SAMPLES = 1000


@pytest.fixture(scope="module")
def sampled_specs(snapshot500, corpus500):
    """The shared random workload: spec dicts plus their oracle answers."""
    papers = oracle_papers(corpus500.manifest, snapshot500)
    rng = random.Random(2026)
    samples = []
    for _ in range(N_FILTER_SAMPLES):
        data = random_spec_data(rng, papers)
        samples.append((data, brute_force_filter(papers, data)))
    return samples


def test_pipeline_reproduces_generator_ground_truth(tmp_path):
    start = time.perf_counter()
    corpus = generate_corpus(seed=7, n_papers=200, alignment_rate=0.74, collision_rate=0.05)
    write_corpus(corpus, tmp_path)
    result = build_from_dir(tmp_path)
    elapsed = time.perf_counter() - start

    expected = corpus.manifest["expected"]
    snapshot = result.snapshot

    aligned_by_generator = {
        aa_id for aa_id, row in corpus.manifest["papers"].items() if row["aligned"]
    }
    aligned_by_engine = {
        p.aa_id for p in snapshot.papers.values() if p.n_citations is not None
    }
    assert aligned_by_engine == aligned_by_generator
    assert result.stats.n_aligned == expected["n_aligned"]
    assert result.stats.collisions == expected["collisions"]

    assert len(snapshot.papers_table) == expected["table_rows"]["papers"]
    assert len(snapshot.authors_table) == expected["table_rows"]["authors"]
    assert len(snapshot.unigrams_table) == expected["table_rows"]["unigrams"]
    assert len(snapshot.bigrams_table) == expected["table_rows"]["bigrams"]
    assert len(snapshot.languages_table) == expected["table_rows"]["languages"]

    per_paper = {p.aa_id: p.n_citations for p in snapshot.papers.values()}
    for aa_id, row in corpus.manifest["papers"].items():
        assert per_paper[aa_id] == (row["n_citations"] if row["aligned"] else None)

    assert elapsed < 5.0


def test_join_matches_nested_loop_reference(tmp_path):
    rng = random.Random(404)
    for round_no in range(50):
        n = rng.randint(10, 300)
        corpus = generate_corpus(
            seed=1000 + round_no,
            n_papers=n,
            alignment_rate=rng.uniform(0.3, 0.9),
            collision_rate=rng.uniform(0.0, 0.1),
        )
        target = tmp_path / f"round{round_no}"
        target.mkdir()
        write_corpus(corpus, target)
        snapshot = build_from_dir(target).snapshot
        satellite = rng.choice([
            snapshot.authors_table,
            snapshot.unigrams_table,
            snapshot.bigrams_table,
            snapshot.languages_table,
        ])
        got = inner_join(snapshot.papers_table, satellite)
        want = nested_loop_join(snapshot.papers_table, satellite, "nlps_id")
        assert as_multiset(got) == as_multiset(want), f"round {round_no}, n={n}"


def test_filter_matches_brute_force_oracle(snapshot500, sampled_specs):
    for data, expected in sampled_specs:
        spec = FilterSpec.from_dict(data)
        got = apply_filter(snapshot500, spec)
        assert got == expected, data

        # monotonicity: removing any one facet can only widen the result
        for fieldname in data:
            if fieldname == "excluded_ids":
                continue
            relaxed = {k: v for k, v in data.items() if k != fieldname}
            wider = apply_filter(snapshot500, FilterSpec.from_dict(relaxed))
            assert got <= wider, (fieldname, data)

        # exclusion soundness: excluded ids never appear
        assert got.isdisjoint(data.get("excluded_ids", ()))


def test_aggregation_conserves_totals(snapshot500, sampled_specs):
    for data, _ in sampled_specs:
        ids = apply_filter(snapshot500, FilterSpec.from_dict(data))
        bundle = compute_bundle(snapshot500, ids)
        assert bundle.papers_total == sum(bundle.papers_by_year.values()), data
        assert bundle.citations_total == sum(
            bar.year_total for bar in bundle.citations_by_year
        ), data


def test_morphological_variants_stay_separate():
    rows = [
        ("E01-1001", "Emotion Detection in Dialogue", 2001, "ACL", [("Lee", "Ana")]),
        ("E02-1001", "Lexicons for Emotion Analysis", 2002, "ACL", [("Chen", "Bo")]),
        ("E03-1001", "Modeling Emotion and Mood", 2003, "EMNLP", [("Kumar", "Raj")]),
        ("E04-1001", "Classifying Emotions in Text", 2004, "ACL", [("Silva", "Rui")]),
        ("E05-1001", "Emotions Across Languages", 2005, "EMNLP", [("Novak", "Eva")]),
        ("E06-1001", "Neural Parsing Baselines", 2006, "ACL", [("Okafor", "Ngozi")]),
    ]
    from litscape.ingest import AuthorName, PaperRecord
    from litscape.textnorm import build_alignment_key

    records = [
        PaperRecord(
            nlps_id=build_alignment_key(title, year, authors[0][0]),
            aa_id=aa_id,
            title=title,
            year=year,
            venue=venue,
            paper_type="main-conference",
            authors=tuple(
                AuthorName(first=f, last=l, canonical=f"{l}, {f}") for l, f in authors
            ),
        )
        for aa_id, title, year, venue, authors in rows
    ]
    snapshot = build_tables(records, frozenset())

    singular = apply_filter(snapshot, FilterSpec.from_dict({"title_terms": ["emotion"]}))
    plural = apply_filter(snapshot, FilterSpec.from_dict({"title_terms": ["emotions"]}))
    assert len(singular) == 3
    assert len(plural) == 2
    assert singular.isdisjoint(plural)

    union = apply_filter(
        snapshot, FilterSpec.from_dict({"title_terms": ["emotion", "emotions"]})
    )
    assert union == singular | plural


def test_builds_and_queries_are_deterministic(tmp_path, data_dir200, capsys):
    first = tmp_path / "first"
    second = tmp_path / "second"
    assert main(["build", "--data-dir", str(data_dir200), "--out", str(first)]) == 0
    assert main(["build", "--data-dir", str(data_dir200), "--out", str(second)]) == 0
    capsys.readouterr()
    for name in SNAPSHOT_FILES:
        assert (first / name).read_bytes() == (second / name).read_bytes(), name

    argv = [
        "query", "--snapshot", str(first),
        "--terms", "neural,corpus", "--facet", "unigram",
    ]
    assert main(argv) == 0
    first_run = capsys.readouterr().out
    assert main(argv) == 0
    second_run = capsys.readouterr().out
    assert first_run == second_run
    json.loads(first_run)  # stays parseable, not accidentally empty


def test_service_equivalence_and_atomic_swap(tmp_path, snapshot200, corpus200):
    # half one: HTTP answers are byte-identical to library answers
    papers = oracle_papers(corpus200.manifest, snapshot200)
    rng = random.Random(77)
    config = EngineConfig()
    app = create_app(snapshot=snapshot200, config=config)
    with TestClient(app) as client:
        for _ in range(100):
            data = random_spec_data(rng, papers)
            facet = rng.choice(["venue-type", "unigram", "bigram", "language"])
            response = client.post(f"/api/query?facet={facet}", json=data)
            assert response.status_code == 200
            direct = run_query(snapshot200, FilterSpec.from_dict(data), config, facet)
            assert response.content == canonical_json(direct).encode("utf-8")

    # half two: a reload never lets a response mix two snapshots. Two
    # corpora with disjoint year ranges and sizes make any mixture
    # detectable; byte-level comparison against the two legitimate
    # answers makes it airtight.
    old_dir = tmp_path / "old"
    new_dir = tmp_path / "new"
    old_dir.mkdir()
    new_dir.mkdir()
    write_corpus(
        generate_corpus(seed=101, n_papers=80, alignment_rate=0.8,
                        year_range=(1990, 2000)),
        old_dir,
    )
    write_corpus(
        generate_corpus(seed=102, n_papers=120, alignment_rate=0.8,
                        year_range=(2005, 2015)),
        new_dir,
    )
    old_result = build_from_dir(old_dir, config)
    new_result = build_from_dir(new_dir, config)
    old_bytes = canonical_json(
        run_query(old_result.snapshot, FilterSpec(), config)
    ).encode("utf-8")
    new_bytes = canonical_json(
        run_query(new_result.snapshot, FilterSpec(), config)
    ).encode("utf-8")
    assert old_bytes != new_bytes

    build_started = threading.Event()
    release_build = threading.Event()

    def slow_builder(override) -> BuildResult:
        build_started.set()
        assert release_build.wait(timeout=60), "test never released the build"
        return new_result

    app = create_app(snapshot=old_result.snapshot, config=config, builder=slow_builder)
    with TestClient(app) as client:
        reload_response = {}

        def do_reload():
            reload_response["r"] = client.post("/api/reload")

        reload_thread = threading.Thread(target=do_reload)
        reload_thread.start()
        assert build_started.wait(timeout=30)

        def one_query(_):
            return client.get("/api/summary").content

        with ThreadPoolExecutor(max_workers=8) as pool:
            futures = [pool.submit(one_query, i) for i in range(100)]
            done = 0
            bodies = []
            for future in futures:
                bodies.append(future.result(timeout=30))
                done += 1
                if done == 30:
                    release_build.set()  # swap lands mid-stream
        reload_thread.join(timeout=30)

        assert reload_response["r"].status_code == 200
        seen_old = sum(1 for b in bodies if b == old_bytes)
        seen_new = sum(1 for b in bodies if b == new_bytes)
        assert seen_old + seen_new == len(bodies), "a response matched neither snapshot"
        assert seen_old >= 30  # queries before the release saw the old corpus
        assert client.get("/api/summary").content == new_bytes
