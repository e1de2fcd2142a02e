"""HTTP API over the analytics snapshot, consumed by the dashboard and CLI.

Every endpoint is a pure function of the files under the storage root; the
only in-process state is a cached vector index keyed by its manifest, so
concurrent readers never block the pipeline.
"""

from __future__ import annotations

import json
import logging
from datetime import date
from pathlib import Path
from typing import Any

from fastapi import APIRouter, FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware

from ..scheduling import parse_schedule
from ..trends import rolling_average, state_lead
from ..vectorstore import RagEngine, VectorIndex
from . import analytics
from .config import EngineConfig
from .journal import Journal
from .pipeline import EngineClients, build_clients

logger = logging.getLogger(__name__)

API_VERSION = "v1"


def _bad_request(field: str, message: str) -> HTTPException:
    return HTTPException(status_code=400, detail=[{"field": field, "message": message}])


def _parse_date(value: str | None, field: str) -> date | None:
    if value is None or value == "":
        return None
    try:
        return date.fromisoformat(value)
    except ValueError:
        raise _bad_request(field, f"expected YYYY-MM-DD, got {value!r}") from None


def _parse_int(value: str | None, field: str, default: int, minimum: int = 1) -> int:
    if value is None or value == "":
        return default
    try:
        parsed = int(value)
    except ValueError:
        raise _bad_request(field, f"expected an integer, got {value!r}") from None
    if parsed < minimum:
        raise _bad_request(field, f"must be >= {minimum}")
    return parsed


class ApiState:
    """Config plus lazily-loaded, manifest-keyed index and clients."""

    def __init__(self, config: EngineConfig, clients: EngineClients | None = None):
        self.config = config
        self.clients = clients or build_clients(config)
        self._index: VectorIndex | None = None
        self._index_key: tuple | None = None

    def index(self) -> VectorIndex | None:
        manifest = self.config.layout.index / "manifest.json"
        if not manifest.exists():
            return None
        key = (manifest.stat().st_mtime_ns, manifest.stat().st_size)
        if self._index is None or key != self._index_key:
            self._index = VectorIndex.load(self.config.layout.index)
            self._index_key = key
        return self._index

    def summary_text(self, chunk: str) -> str:
        path = self.config.layout.summaries / f"{chunk}.txt"
        try:
            return path.read_text(encoding="utf-8")
        except FileNotFoundError:
            return ""


def build_router(state: ApiState) -> APIRouter:
    router = APIRouter()
    config = state.config
    analytics_dir = config.layout.analytics

    @router.get("/stations")
    def stations() -> dict:
        roster: dict[str, dict[str, Any]] = {}
        if config.schedule_path and Path(config.schedule_path).exists():
            for entry in parse_schedule(Path(config.schedule_path).read_text(encoding="utf-8")):
                roster[entry.radio_name] = {
                    "call_sign": entry.radio_name,
                    "state": entry.state,
                    "url": entry.url,
                    "format": None,
                    "lat": None,
                    "lon": None,
                }
        if config.stations_path and Path(config.stations_path).exists():
            extra = json.loads(Path(config.stations_path).read_text(encoding="utf-8"))
            for record in extra:
                call = record["call_sign"]
                base = roster.setdefault(
                    call,
                    {"call_sign": call, "state": record.get("state"), "url": None,
                     "format": None, "lat": None, "lon": None},
                )
                for key in ("state", "format", "lat", "lon"):
                    if record.get(key) is not None:
                        base[key] = record[key]
        return {"stations": sorted(roster.values(), key=lambda r: r["call_sign"])}

    @router.get("/trends")
    def trends(request: Request) -> dict:
        params = request.query_params
        entity = params.get("entity")
        scope = params.get("scope", "national")
        date_from = _parse_date(params.get("from"), "from")
        date_to = _parse_date(params.get("to"), "to")
        window = _parse_int(params.get("window"), "window", default=1)

        rows = analytics.load_trends(analytics_dir)
        if scope == "national":
            rows = [r for r in rows if r["scope"] == "national"]
        elif scope == "state":
            rows = [r for r in rows if r["scope"] != "national"]
        elif len(scope) == 2 and scope.isalpha():
            rows = [r for r in rows if r["scope"] == scope.upper()]
        else:
            raise _bad_request("scope", f"expected national|state|<code>, got {scope!r}")
        if entity:
            rows = [r for r in rows if r["entity"] == entity]
        if date_from:
            rows = [r for r in rows if r["day"] >= date_from]
        if date_to:
            rows = [r for r in rows if r["day"] <= date_to]

        smoothed: dict[tuple[str, str, date], float] = {}
        series_keys = {(r["entity"], r["scope"]) for r in rows}
        for ent, sc in series_keys:
            series = [
                (r["day"], r["score"])
                for r in sorted(rows, key=lambda r: r["day"])
                if r["entity"] == ent and r["scope"] == sc
            ]
            for day, value in rolling_average(series, window):
                smoothed[(ent, sc, day)] = value

        points = [
            {
                "entity": r["entity"],
                "scope": r["scope"],
                "day": r["day"].isoformat(),
                "pos": r["pos"],
                "neu": r["neu"],
                "neg": r["neg"],
                "score": r["score"],
                "smoothed": smoothed[(r["entity"], r["scope"], r["day"])],
            }
            for r in sorted(rows, key=lambda r: (r["entity"], r["scope"], r["day"]))
        ]
        return {"window": window, "points": points}

    @router.get("/leads")
    def leads(request: Request) -> dict:
        params = request.query_params
        date_from = _parse_date(params.get("from"), "from")
        date_to = _parse_date(params.get("to"), "to")
        rows = [r for r in analytics.load_trends(analytics_dir) if r["scope"] != "national"]
        if date_from:
            rows = [r for r in rows if r["day"] >= date_from]
        if date_to:
            rows = [r for r in rows if r["day"] <= date_to]

        dem = config.party_entities.get("D")
        rep = config.party_entities.get("R")
        labels = []
        for state_code in sorted({r["scope"] for r in rows}):
            dem_series = [
                (r["day"], r["score"])
                for r in sorted(rows, key=lambda r: r["day"])
                if r["scope"] == state_code and r["entity"] == dem
            ]
            rep_series = [
                (r["day"], r["score"])
                for r in sorted(rows, key=lambda r: r["day"])
                if r["scope"] == state_code and r["entity"] == rep
            ]
            labels.append(
                {
                    "state": state_code,
                    "label": state_lead(dem_series, rep_series, config.lead_window_days),
                }
            )
        return {"leads": labels}

    @router.get("/network")
    def network() -> dict:
        edges = analytics.load_edges(analytics_dir)
        communities = analytics.load_communities(analytics_dir)
        degrees: dict[str, int] = {station: 0 for station in communities}
        for a, b in edges:
            degrees[a] = degrees.get(a, 0) + 1
            degrees[b] = degrees.get(b, 0) + 1
        return {
            "edges": [[a, b] for a, b in edges],
            "degrees": degrees,
            "communities": communities,
        }

    @router.get("/narrative")
    def narrative(request: Request) -> dict:
        params = request.query_params
        name = params.get("name") or next(iter(config.narratives), None)
        if name is not None and name not in config.narratives:
            raise _bad_request("name", f"unknown narrative {name!r}")
        date_from = _parse_date(params.get("from"), "from")
        date_to = _parse_date(params.get("to"), "to")

        states: dict[str, dict[str, int]] = {}
        for record in analytics.load_narrative_detail(analytics_dir):
            if record["name"] != name:
                continue
            day = date.fromisoformat(record["day"])
            if date_from and day < date_from:
                continue
            if date_to and day > date_to:
                continue
            bucket = states.setdefault(record["state"], {})
            bucket[record["stance"]] = bucket.get(record["stance"], 0) + record["mentions"]
        return {"name": name, "states": states}

    @router.post("/query")
    def query(body: dict) -> dict:
        question = body.get("question", "")
        if not isinstance(question, str) or not question.strip():
            raise _bad_request("question", "must be a non-empty string")
        k = body.get("k", 8)
        if not isinstance(k, int) or k < 1:
            raise _bad_request("k", "must be a positive integer")
        flt = body.get("filter")
        if flt is not None and not isinstance(flt, dict):
            raise _bad_request("filter", "must be an object of metadata equalities")

        index = state.index()
        if index is None or len(index) == 0:
            return {"answer": "no matching content", "sources": []}
        engine = RagEngine(
            index, state.clients.embedder, state.clients.generator, state.summary_text
        )
        result = engine.answer_query(question, k=k, flt=flt)
        return {
            "answer": result["answer"],
            "sources": [
                {
                    "id": hit.id,
                    "distance": hit.distance,
                    "similarity": hit.similarity,
                    "metadata": hit.metadata,
                }
                for hit in result["sources"]
            ],
        }

    @router.get("/health")
    def health() -> dict:
        journal = Journal(config.layout.journal_path)
        return {"stages": journal.stage_counters()}

    return router


def create_app(config: EngineConfig, clients: EngineClients | None = None) -> FastAPI:
    state = ApiState(config, clients)
    app = FastAPI(title="wavepulse", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )
    router = build_router(state)
    app.include_router(router, prefix=f"/api/{API_VERSION}")
    app.include_router(build_router(state), prefix="/api")
    return app
