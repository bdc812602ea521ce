"""Operator command line: simulate | ingest | analyze | serve | export.

stdout carries only result JSON; diagnostics and errors go to stderr as
one-line JSON. Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from .config import AppConfig, load_config
from .errors import BadgekitError, ConfigurationError
from .hub.registry import GroupRegistry, RegistryError
from .hub.service import Hub
from .hub.store import Store, resolve_data_dir
from .jsonl import (
    dumps_canonical,
    observation_from_dict,
    read_jsonl,
    write_jsonl,
)
from .metrics import TimeWindow, mediator_state, response_matrix, window_stats
from .proximity import build_graph
from .simulator import BadgeConfig, ConversationScript, SampleChunk, simulate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


def _err(message: str, code: str) -> None:
    sys.stderr.write(dumps_canonical({"error": code, "message": message}) + "\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="badgekit", add_help=True)
    parser.add_argument("--config", type=Path, default=None)
    parser.add_argument("--data-dir", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a conversation script into a trace dir")
    p_sim.add_argument("script", type=Path)
    p_sim.add_argument("--out", type=Path, required=True)
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--mode", choices=("hardware", "phone"), default="hardware")

    p_ing = sub.add_parser("ingest", help="load a trace directory into the store")
    p_ing.add_argument("trace_dir", type=Path)
    p_ing.add_argument("--registry", type=Path, required=True)

    p_an = sub.add_parser("analyze", help="window statistics from the store")
    p_an.add_argument("--group", required=True)
    p_an.add_argument("--from", dest="from_ts", type=int, required=True)
    p_an.add_argument("--to", dest="to_ts", type=int, required=True)
    p_an.add_argument("--window-ms", type=int, default=None)

    p_srv = sub.add_parser("serve", help="start the hub REST server")
    p_srv.add_argument("--port", type=int, default=None)

    p_exp = sub.add_parser("export", help="dump a time range as a JSONL bundle")
    p_exp.add_argument("--group", required=True)
    p_exp.add_argument("--from", dest="from_ts", type=int, required=True)
    p_exp.add_argument("--to", dest="to_ts", type=int, required=True)
    p_exp.add_argument("--out", type=Path, required=True)
    return parser


def _load_app_config(args: argparse.Namespace) -> AppConfig:
    overrides = {}
    if getattr(args, "data_dir", None):
        overrides["data_dir"] = args.data_dir
    if getattr(args, "port", None):
        overrides["port"] = args.port
    return load_config(args.config, overrides)


def _cmd_simulate(args: argparse.Namespace, cfg: AppConfig) -> int:
    doc = json.loads(args.script.read_text())
    if args.seed is not None:
        doc["rng_seed"] = args.seed
    script = ConversationScript.from_dict(doc)
    configs = {p.id: BadgeConfig(mode=args.mode) for p in script.participants}
    result = simulate(script, configs, cfg.path_loss())
    for badge_id, chunks in result.chunks.items():
        write_jsonl(args.out / badge_id / "chunks.jsonl", (c.as_dict() for c in chunks))
    for badge_id, obs in result.observations.items():
        write_jsonl(
            args.out / badge_id / "scans.jsonl",
            (
                {
                    "scanner_id": o.scanner_id,
                    "beacon_id": o.beacon_id,
                    "rssi_dbm": o.rssi_dbm,
                    "ts": o.ts,
                }
                for o in obs
            ),
        )
    print(
        dumps_canonical(
            {
                "badges": sorted(result.chunks),
                "chunks": sum(len(c) for c in result.chunks.values()),
                "scans": sum(len(o) for o in result.observations.values()),
                "out": str(args.out),
            }
        )
    )
    return EXIT_OK


def _cmd_ingest(args: argparse.Namespace, cfg: AppConfig) -> int:
    registry = GroupRegistry.load(args.registry)
    store = Store(resolve_data_dir(cfg.data_dir))
    registry.save(store.data_dir / "registry.json")
    hub = Hub(store, registry, cfg.pipeline())
    chunks: list[SampleChunk] = []
    scans = []
    for badge_dir in sorted(p for p in args.trace_dir.iterdir() if p.is_dir()):
        chunk_path = badge_dir / "chunks.jsonl"
        scan_path = badge_dir / "scans.jsonl"
        if chunk_path.exists():
            chunks.extend(SampleChunk.from_dict(d) for d in read_jsonl(chunk_path))
        if scan_path.exists():
            scans.extend(observation_from_dict(d) for d in read_jsonl(scan_path))
    report = hub.ingest_chunks(chunks)
    scan_report = hub.ingest_scans(scans)
    merged = {
        k: v + getattr(scan_report, k) for k, v in report.as_dict().items()
    }
    print(dumps_canonical(merged))
    return EXIT_OK


def _registry_from_store(store: Store) -> GroupRegistry:
    path = store.data_dir / "registry.json"
    if path.exists():
        return GroupRegistry.load(path)
    return GroupRegistry()


def _cmd_analyze(args: argparse.Namespace, cfg: AppConfig) -> int:
    store = Store(resolve_data_dir(cfg.data_dir))
    registry = _registry_from_store(store)
    window = TimeWindow(args.from_ts, args.to_ts)
    participants = [p.participant_id for p in registry.participants(args.group)]
    from .jsonl import event_from_dict

    events = [
        event_from_dict(r)
        for r in store.query_events(args.group, window.start_ts, window.end_ts)
    ]
    stats = window_stats(events, window, cfg.metrics(), participants or None)
    matrix = response_matrix(
        events, window, cfg.turn_gap_ms, cfg.response_window_ms, participants or None
    )
    scans = [
        observation_from_dict(r)
        for r in store.query_points(args.group, "scans", window.start_ts, window.end_ts)
    ]
    graph = build_graph(scans, window, cfg.path_loss(), cfg.min_obs)
    result = {
        "stats": stats.as_dict(),
        "response_matrix": matrix.as_dict(),
        "proximity": graph.as_dict(),
    }
    if len(stats.turns) >= 2:
        result["mediator"] = mediator_state(stats, cfg.rate_max_per_min).as_dict()
    print(dumps_canonical(result))
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace, cfg: AppConfig) -> int:
    import uvicorn

    from .hub.api import create_app

    store = Store(resolve_data_dir(cfg.data_dir))
    registry = _registry_from_store(store)
    app = create_app(store, registry, cfg)
    uvicorn.run(app, host="127.0.0.1", port=args.port or cfg.port, log_level="warning")
    return EXIT_OK


def _cmd_export(args: argparse.Namespace, cfg: AppConfig) -> int:
    store = Store(resolve_data_dir(cfg.data_dir))
    window = TimeWindow(args.from_ts, args.to_ts)
    bundle = []
    for record in store.query_points(args.group, "volumes", window.start_ts, window.end_ts):
        bundle.append({"kind": "volume", **record})
    for record in store.query_events(args.group, window.start_ts, window.end_ts):
        bundle.append({"kind": "event", **record})
    for record in store.query_points(args.group, "scans", window.start_ts, window.end_ts):
        bundle.append({"kind": "scan", **record})
    write_jsonl(args.out, bundle)
    print(dumps_canonical({"records": len(bundle), "out": str(args.out)}))
    return EXIT_OK


_COMMANDS = {
    "simulate": _cmd_simulate,
    "ingest": _cmd_ingest,
    "analyze": _cmd_analyze,
    "serve": _cmd_serve,
    "export": _cmd_export,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = _load_app_config(args)
        return _COMMANDS[args.command](args, cfg)
    except ConfigurationError as exc:
        _err(str(exc), "configuration")
        return EXIT_USAGE
    except (FileNotFoundError, json.JSONDecodeError, KeyError, ValueError,
            RegistryError, BadgekitError) as exc:
        _err(str(exc), "data")
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
