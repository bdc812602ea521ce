"""REST surface of the hub.

Endpoints (all JSON, timestamps in integer ms since the Unix epoch,
ranges half-open [from, to)):

    GET  /groups
    GET  /groups/{id}/volumes?from&to
    GET  /groups/{id}/events?from&to
    GET  /groups/{id}/proximity?from&to
    GET  /groups/{id}/stats?from&to | window_ms
    GET  /groups/{id}/mediator?from&to | window_ms
    POST /groups/{id}/ingest
    POST /registry
"""

from __future__ import annotations

import time
from typing import Callable, Optional

from fastapi import FastAPI, HTTPException, Query, Request

from ..config import AppConfig
from ..jsonl import event_from_dict, observation_from_dict
from ..metrics import TimeWindow, mediator_state, window_stats
from ..proximity import build_graph
from ..simulator import SampleChunk
from .registry import GroupRegistry, RegistryError
from .service import Hub
from .store import Store


def _resolve_window(
    from_ts: Optional[int],
    to_ts: Optional[int],
    window_ms: Optional[int],
    now_ms: int,
) -> TimeWindow:
    if from_ts is None and to_ts is None:
        span = window_ms if window_ms is not None else 60_000
        from_ts, to_ts = now_ms - span, now_ms
    if from_ts is None or to_ts is None:
        raise HTTPException(status_code=400, detail="both from and to are required")
    if from_ts >= to_ts:
        raise HTTPException(status_code=400, detail="invalid range: from >= to")
    return TimeWindow(from_ts, to_ts)


def create_app(
    store: Store,
    registry: GroupRegistry,
    config: AppConfig = AppConfig(),
    now_fn: Optional[Callable[[], int]] = None,
) -> FastAPI:
    """Build the API app. ``now_fn`` makes the default window injectable in tests."""
    app = FastAPI(title="badgekit hub")
    hub = Hub(store, registry, config.pipeline())
    now_fn = now_fn or (lambda: int(time.time() * 1000))
    app.state.hub = hub
    app.state.registry = registry

    def _require_group(group_id: str) -> None:
        if group_id not in app.state.registry.groups:
            raise HTTPException(status_code=404, detail=f"unknown group {group_id!r}")

    @app.get("/groups")
    def list_groups():
        reg: GroupRegistry = app.state.registry
        return [
            {
                "group_id": gid,
                "participants": [
                    {
                        "participant_id": p.participant_id,
                        "badge_id": p.badge_id,
                        "beacon_id": p.beacon_id,
                        "display_name": p.display_name,
                    }
                    for p in reg.participants(gid)
                ],
            }
            for gid in reg.group_ids()
        ]

    @app.get("/groups/{group_id}/volumes")
    def volumes(
        group_id: str,
        from_ts: Optional[int] = Query(None, alias="from"),
        to_ts: Optional[int] = Query(None, alias="to"),
        window_ms: Optional[int] = None,
    ):
        _require_group(group_id)
        win = _resolve_window(from_ts, to_ts, window_ms, now_fn())
        return store.query_points(group_id, "volumes", win.start_ts, win.end_ts)

    @app.get("/groups/{group_id}/events")
    def events(
        group_id: str,
        from_ts: Optional[int] = Query(None, alias="from"),
        to_ts: Optional[int] = Query(None, alias="to"),
        window_ms: Optional[int] = None,
    ):
        _require_group(group_id)
        win = _resolve_window(from_ts, to_ts, window_ms, now_fn())
        return store.query_events(group_id, win.start_ts, win.end_ts)

    @app.get("/groups/{group_id}/proximity")
    def proximity(
        group_id: str,
        from_ts: Optional[int] = Query(None, alias="from"),
        to_ts: Optional[int] = Query(None, alias="to"),
        window_ms: Optional[int] = None,
    ):
        _require_group(group_id)
        win = _resolve_window(from_ts, to_ts, window_ms, now_fn())
        scans = [
            observation_from_dict(r)
            for r in store.query_points(group_id, "scans", win.start_ts, win.end_ts)
        ]
        graph = build_graph(scans, win, config.path_loss(), config.min_obs)
        doc = graph.as_dict()
        reg: GroupRegistry = app.state.registry
        to_participant = lambda dev: (
            reg.participant_for(dev).participant_id if reg.participant_for(dev) else dev
        )
        doc["nodes"] = sorted({to_participant(n) for n in doc["nodes"]})
        for edge in doc["edges"]:
            edge["a"], edge["b"] = sorted(
                (to_participant(edge["a"]), to_participant(edge["b"]))
            )
        return doc

    def _stats(group_id: str, win: TimeWindow):
        reg: GroupRegistry = app.state.registry
        participants = [p.participant_id for p in reg.participants(group_id)]
        evs = [
            event_from_dict(r)
            for r in store.query_events(group_id, win.start_ts, win.end_ts)
        ]
        return window_stats(evs, win, config.metrics(), participants)

    @app.get("/groups/{group_id}/stats")
    def stats(
        group_id: str,
        from_ts: Optional[int] = Query(None, alias="from"),
        to_ts: Optional[int] = Query(None, alias="to"),
        window_ms: Optional[int] = None,
    ):
        _require_group(group_id)
        win = _resolve_window(from_ts, to_ts, window_ms, now_fn())
        return _stats(group_id, win).as_dict()

    @app.get("/groups/{group_id}/mediator")
    def mediator(
        group_id: str,
        from_ts: Optional[int] = Query(None, alias="from"),
        to_ts: Optional[int] = Query(None, alias="to"),
        window_ms: Optional[int] = None,
    ):
        _require_group(group_id)
        win = _resolve_window(from_ts, to_ts, window_ms, now_fn())
        state = mediator_state(_stats(group_id, win), config.rate_max_per_min)
        return state.as_dict()

    @app.post("/groups/{group_id}/ingest")
    async def ingest(group_id: str, request: Request):
        _require_group(group_id)
        body = await request.json()
        report = None
        if body.get("chunks"):
            chunks = []
            for doc in body["chunks"]:
                chunks.append(SampleChunk.from_dict(doc))
            report = hub.ingest_chunks(chunks)
        if body.get("scans"):
            scans = [observation_from_dict(doc) for doc in body["scans"]]
            scan_report = hub.ingest_scans(scans)
            if report is None:
                report = scan_report
            else:
                for key, value in scan_report.as_dict().items():
                    setattr(report, key, getattr(report, key) + value)
        return report.as_dict() if report else {}

    @app.post("/registry")
    async def set_registry(request: Request):
        body = await request.json()
        try:
            new_registry = GroupRegistry.from_dict(body)
        except (RegistryError, KeyError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        app.state.registry = new_registry
        hub.registry = new_registry
        new_registry.save(store.data_dir / "registry.json")
        return {"groups": new_registry.group_ids()}

    return app
