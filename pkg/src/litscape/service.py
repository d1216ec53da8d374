"""HTTP JSON API over a corpus snapshot.

One process holds exactly one current snapshot. Queries read the holder
reference once and compute everything from that object, so a reload can
never produce an answer mixing two corpora: requests in flight keep the
snapshot they started with, and the swap itself is a single reference
assignment. Reload failures keep the old snapshot serving.

Query responses are rendered through the same canonical JSON writer the
CLI uses, so the two front doors emit identical bytes for identical
questions.
"""

from __future__ import annotations

import json
import threading
from contextlib import asynccontextmanager
from pathlib import Path
from typing import Callable

from fastapi import FastAPI, Request, Response
from fastapi.staticfiles import StaticFiles
from starlette.concurrency import run_in_threadpool

from .aggregate import TREEMAP_FACETS, canonical_json
from .align import alignment_report
from .ingest import IngestError
from .pipeline import (
    BuildResult,
    EngineConfig,
    build_from_dir,
    paper_payload,
    run_query,
)
from .query import FilterSpec, SpecError
from .store import BuildError, CorpusSnapshot


class SnapshotHolder:
    """Single-writer, many-reader handle on the current snapshot.

    Readers grab ``.snapshot`` (one attribute read, atomic in CPython)
    and work off that object. Writers serialize on ``swap_lock`` and
    publish with one assignment.
    """

    def __init__(self, snapshot: CorpusSnapshot | None = None):
        self.snapshot = snapshot
        self.swap_lock = threading.Lock()

    def swap(self, snapshot: CorpusSnapshot) -> None:
        self.snapshot = snapshot


def _json_bytes(payload: dict, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(payload),
        status_code=status_code,
        media_type="application/json",
    )


def _error(message: str, status_code: int) -> Response:
    return _json_bytes({"error": message}, status_code)


def create_app(
    data_dir: str | Path | None = None,
    config: EngineConfig | None = None,
    snapshot: CorpusSnapshot | None = None,
    builder: Callable[[Path | None], BuildResult] | None = None,
    frontend_dir: str | Path | None = None,
) -> FastAPI:
    """Build the service.

    ``builder`` produces a fresh build on reload, given an optional
    override directory from the request body; the default rebuilds from
    ``data_dir``. Passing ``snapshot`` starts the app pre-loaded (tests
    do this); otherwise the first build runs at startup when a data_dir
    is configured. ``frontend_dir``, if given, is served as static files
    under ``/`` so the dashboard and its API share an origin.
    """
    if frontend_dir is not None and not Path(frontend_dir).is_dir():
        raise BuildError(f"frontend directory not found: {frontend_dir}")
    config = config or EngineConfig()
    if builder is None:
        def builder(override: Path | None) -> BuildResult:
            target = override if override is not None else data_dir
            if target is None:
                raise BuildError("no data directory configured")
            return build_from_dir(target, config)

    holder = SnapshotHolder(snapshot)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if holder.snapshot is None and data_dir is not None:
            holder.swap(builder(None).snapshot)
        yield

    app = FastAPI(title="litscape", docs_url=None, redoc_url=None, lifespan=lifespan)
    app.state.holder = holder
    app.state.config = config

    def current() -> CorpusSnapshot | None:
        return holder.snapshot

    def facet_param(request: Request) -> str:
        facet = request.query_params.get("facet", "venue-type")
        if facet not in TREEMAP_FACETS:
            raise SpecError(
                f"unknown facet {facet!r}; expected one of {', '.join(TREEMAP_FACETS)}"
            )
        return facet

    @app.get("/api/health")
    def health() -> Response:
        snap = current()
        return _json_bytes(
            {
                "status": "ok",
                "snapshot_build": None if snap is None else snap.built_at,
            }
        )

    @app.get("/api/summary")
    def summary(request: Request) -> Response:
        snap = current()
        if snap is None:
            return _error("no snapshot loaded", 503)
        try:
            facet = facet_param(request)
        except SpecError as err:
            return _error(str(err), 400)
        return _json_bytes(run_query(snap, FilterSpec(), config, facet))

    @app.post("/api/query")
    async def query(request: Request) -> Response:
        snap = current()
        if snap is None:
            return _error("no snapshot loaded", 503)
        try:
            facet = facet_param(request)
            body = await request.json()
            spec = FilterSpec.from_dict(body)
        except SpecError as err:
            return _error(str(err), 400)
        except ValueError:
            return _error("request body is not valid JSON", 400)
        return _json_bytes(run_query(snap, spec, config, facet))

    @app.get("/api/paper/{nlps_id:path}")
    def paper(nlps_id: str) -> Response:
        snap = current()
        if snap is None:
            return _error("no snapshot loaded", 503)
        payload = paper_payload(snap, nlps_id)
        if payload is None:
            return _error(f"unknown paper id {nlps_id!r}", 404)
        return _json_bytes(payload)

    @app.post("/api/reload")
    async def reload(request: Request) -> Response:
        override: Path | None = None
        body = await request.body()
        if body:
            try:
                parsed = json.loads(body)
            except ValueError:
                return _error("reload body must be JSON", 400)
            if isinstance(parsed, dict) and "data_dir" in parsed:
                override = Path(str(parsed["data_dir"]))
            elif isinstance(parsed, str):
                override = Path(parsed)
            elif parsed is not None and parsed != {}:
                return _error('reload body must be {"data_dir": <path>}', 400)
        def locked_rebuild() -> BuildResult:
            with holder.swap_lock:
                result = builder(override)
                holder.swap(result.snapshot)
                return result

        # The build runs on a worker thread so the event loop keeps
        # serving queries off the old snapshot until the swap lands.
        try:
            result = await run_in_threadpool(locked_rebuild)
        except (IngestError, BuildError, OSError) as err:
            return _error(f"reload failed, keeping current snapshot: {err}", 422)
        return _json_bytes(
            {
                "status": "reloaded",
                "snapshot_build": result.snapshot.built_at,
                "report": result.report.to_dict(),
                "alignment": result.stats.to_dict(),
            }
        )

    @app.get("/api/stats")
    def stats() -> Response:
        snap = current()
        if snap is None:
            return _error("no snapshot loaded", 503)
        return _json_bytes(
            {
                "alignment": snap.stats.to_dict(),
                "report": alignment_report(snap.stats),
            }
        )

    # Mounted last, so the /api routes above always win the match.
    if frontend_dir is not None:
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="frontend")

    return app
