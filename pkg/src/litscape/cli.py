"""Command line front door: build, query, serve, report.

Exit codes: 0 success, 1 bad query or filter spec, 2 unreadable input or
failed build. Query output is the same canonical JSON the HTTP service
emits, so scripted output is stable no matter which entry point ran.

Defaults come from LITSCAPE_* environment variables where noted; flags
always win over the environment.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .aggregate import (
    DEFAULT_PALETTE_SIZE,
    DEFAULT_TOP_AUTHORS_N,
    DEFAULT_TOP_PAPERS_N,
    DEFAULT_TREEMAP_TOP_N,
    TREEMAP_FACETS,
    canonical_json,
)
from .align import alignment_report
from .ingest import IngestError
from .pipeline import EngineConfig, build_corpus, build_from_dir, run_query
from .query import FilterSpec, SpecError
from .store import BuildError, load_snapshot, write_snapshot

EXIT_OK = 0
EXIT_QUERY = 1
EXIT_IO = 2


def _env(name: str, default: str | None = None) -> str | None:
    return os.environ.get(f"LITSCAPE_{name}", default)


def _env_int(name: str, default: int) -> int:
    raw = _env(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"LITSCAPE_{name} must be an integer, got {raw!r}")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("engine tuning")
    group.add_argument(
        "--palette-size", type=int, default=_env_int("PALETTE_SIZE", DEFAULT_PALETTE_SIZE),
        help="number of segment colors (env LITSCAPE_PALETTE_SIZE)",
    )
    group.add_argument(
        "--treemap-top-n", type=int,
        default=_env_int("TREEMAP_TOP_N", DEFAULT_TREEMAP_TOP_N),
        help="treemap cells per view (env LITSCAPE_TREEMAP_TOP_N)",
    )
    group.add_argument(
        "--top-papers-n", type=int,
        default=_env_int("TOP_PAPERS_N", DEFAULT_TOP_PAPERS_N),
        help="rows in the most-cited papers list (env LITSCAPE_TOP_PAPERS_N)",
    )
    group.add_argument(
        "--top-authors-n", type=int,
        default=_env_int("TOP_AUTHORS_N", DEFAULT_TOP_AUTHORS_N),
        help="rows in the most-cited authors list (env LITSCAPE_TOP_AUTHORS_N)",
    )
    group.add_argument(
        "--stopword-file", default=_env("STOPWORD_FILE"),
        help="replace the packaged treemap stopword list (env LITSCAPE_STOPWORD_FILE)",
    )
    group.add_argument(
        "--lexicon-file", default=_env("LEXICON_FILE"),
        help="replace the packaged language lexicon (env LITSCAPE_LEXICON_FILE)",
    )


def _config_from(args: argparse.Namespace) -> EngineConfig:
    return EngineConfig.from_files(
        palette_size=args.palette_size,
        treemap_top_n=args.treemap_top_n,
        top_papers_n=args.top_papers_n,
        top_authors_n=args.top_authors_n,
        stopword_file=args.stopword_file,
        lexicon_file=args.lexicon_file,
    )


def _add_filter_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("filter facets")
    group.add_argument(
        "--spec-file", help="JSON file holding a filter spec; flags override its fields"
    )
    group.add_argument(
        "--terms", action="append", default=[],
        help="search terms, comma separated (repeatable); any match selects",
    )
    group.add_argument("--years", help="inclusive year range lo:hi")
    group.add_argument(
        "--years-clicked", action="append", default=[],
        help="individual years, comma separated (repeatable)",
    )
    group.add_argument(
        "--venues", action="append", default=[],
        help="venues, comma separated (repeatable)",
    )
    group.add_argument(
        "--paper-types", action="append", default=[],
        help="paper types, comma separated (repeatable)",
    )
    group.add_argument("--author", help='author, "Last" or "Last, First"')
    group.add_argument("--bigram", help="exact title bigram, two words")
    group.add_argument("--language", help="language mentioned in the title")
    group.add_argument(
        "--exclude", action="append", default=[],
        help="paper id to exclude from results (repeatable)",
    )


def _split_all(chunks: list[str]) -> list[str]:
    return [part.strip() for chunk in chunks for part in chunk.split(",") if part.strip()]


def _spec_from(args: argparse.Namespace) -> FilterSpec:
    if args.spec_file:
        try:
            data = json.loads(Path(args.spec_file).read_text(encoding="utf-8"))
        except OSError as err:
            raise IngestError(f"cannot read spec file: {err}") from err
        except ValueError as err:
            raise SpecError(f"spec file is not valid JSON: {err}") from err
        if not isinstance(data, dict):
            raise SpecError("spec file must hold a JSON object")
    else:
        data = {}
    if args.terms:
        data["title_terms"] = _split_all(args.terms)
    if args.years:
        lo, sep, hi = args.years.partition(":")
        if not sep:
            raise SpecError("--years takes an inclusive range, lo:hi")
        try:
            data["year_range"] = [int(lo), int(hi)]
        except ValueError:
            raise SpecError(f"--years bounds must be integers, got {args.years!r}")
    if args.years_clicked:
        try:
            data["years_clicked"] = [int(y) for y in _split_all(args.years_clicked)]
        except ValueError:
            raise SpecError("--years-clicked takes integers")
    if args.venues:
        data["venues"] = _split_all(args.venues)
    if args.paper_types:
        data["paper_types"] = _split_all(args.paper_types)
    if args.author:
        last, _, first = args.author.partition(",")
        entry = {"last": last.strip()}
        if first.strip():
            entry["first"] = first.strip()
        data["author_query"] = entry
    if args.bigram:
        data["title_bigram"] = args.bigram
    if args.language:
        data["language"] = args.language
    if args.exclude:
        data["excluded_ids"] = [e for e in args.exclude if e.strip()]
    return FilterSpec.from_dict(data)


def _print_build_summary(report, stats) -> None:
    print(report.summary())
    print(alignment_report(stats))


def cmd_build(args: argparse.Namespace) -> int:
    config = _config_from(args)
    if args.data_dir:
        result = build_from_dir(args.data_dir, config)
    else:
        if not args.papers or not args.citations:
            raise IngestError("build needs --data-dir, or --papers and --citations")
        result = build_corpus(args.papers, args.citations, args.aliases, config)
    # Build completed in memory before anything is written, so a bad
    # input never leaves a half-written output directory.
    write_snapshot(result.snapshot, args.out)
    _print_build_summary(result.report, result.stats)
    print(f"snapshot written to {args.out}")
    return EXIT_OK


def cmd_query(args: argparse.Namespace) -> int:
    config = _config_from(args)
    if args.facet not in TREEMAP_FACETS:
        raise SpecError(
            f"unknown facet {args.facet!r}; expected one of {', '.join(TREEMAP_FACETS)}"
        )
    spec = _spec_from(args)
    snapshot = load_snapshot(args.snapshot)
    envelope = run_query(snapshot, spec, config, args.facet)
    if args.pretty:
        print(json.dumps(envelope, indent=2, ensure_ascii=False))
    else:
        print(canonical_json(envelope))
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import socket

    import uvicorn

    from .service import create_app

    if not args.data_dir:
        raise IngestError("serve needs --data-dir (or LITSCAPE_DATA_DIR)")
    # Fail on an occupied port before building anything; uvicorn's own
    # bind error surfaces only after startup work.
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((args.host, args.port))
    except OSError as err:
        raise OSError(f"cannot listen on {args.host}:{args.port}: {err}") from err
    finally:
        probe.close()
    app = create_app(
        data_dir=args.data_dir,
        config=_config_from(args),
        frontend_dir=args.frontend_dir,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    config = _config_from(args)
    if args.data_dir:
        result = build_from_dir(args.data_dir, config)
    else:
        if not args.papers or not args.citations:
            raise IngestError("report needs --data-dir, or --papers and --citations")
        result = build_corpus(args.papers, args.citations, args.aliases, config)
    _print_build_summary(result.report, result.stats)
    snap = result.snapshot
    print(
        "table rows: "
        f"papers={len(snap.papers_table)} authors={len(snap.authors_table)} "
        f"unigrams={len(snap.unigrams_table)} bigrams={len(snap.bigrams_table)} "
        f"languages={len(snap.languages_table)}"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="litscape",
        description="Build, query, and serve an anthology citation corpus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="ingest, align, and write a snapshot")
    p_build.add_argument("--data-dir", default=_env("DATA_DIR"),
                         help="directory with papers.tsv, citations.tsv, aliases.tsv")
    p_build.add_argument("--papers", help="papers.tsv path (alternative to --data-dir)")
    p_build.add_argument("--citations", help="citations.tsv path")
    p_build.add_argument("--aliases", help="optional aliases.tsv path")
    p_build.add_argument("--out", required=True, help="output snapshot directory")
    _add_config_flags(p_build)
    p_build.set_defaults(func=cmd_build)

    p_query = sub.add_parser("query", help="evaluate a filter over a built snapshot")
    p_query.add_argument("--snapshot", required=True, help="built snapshot directory")
    p_query.add_argument("--facet", default="venue-type",
                         help=f"treemap facet: {', '.join(TREEMAP_FACETS)}")
    p_query.add_argument("--pretty", action="store_true",
                         help="indent the JSON output for reading")
    _add_filter_flags(p_query)
    _add_config_flags(p_query)
    p_query.set_defaults(func=cmd_query)

    p_serve = sub.add_parser("serve", help="run the HTTP API")
    p_serve.add_argument("--data-dir", default=_env("DATA_DIR"),
                         help="directory with papers.tsv and citations.tsv "
                              "(env LITSCAPE_DATA_DIR)")
    p_serve.add_argument("--host", default=_env("HOST", "127.0.0.1"),
                         help="listen address (env LITSCAPE_HOST)")
    p_serve.add_argument("--port", type=int, default=_env_int("PORT", 8040),
                         help="listen port (env LITSCAPE_PORT)")
    p_serve.add_argument("--frontend-dir", default=_env("FRONTEND_DIR"),
                         help="directory of dashboard static files to serve at / "
                              "(env LITSCAPE_FRONTEND_DIR)")
    _add_config_flags(p_serve)
    p_serve.set_defaults(func=cmd_serve)

    p_report = sub.add_parser(
        "report", help="run the pipeline and print statistics without writing"
    )
    p_report.add_argument("--data-dir", default=_env("DATA_DIR"))
    p_report.add_argument("--papers")
    p_report.add_argument("--citations")
    p_report.add_argument("--aliases")
    _add_config_flags(p_report)
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_QUERY
    except (IngestError, BuildError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_QUERY


if __name__ == "__main__":
    sys.exit(main())
