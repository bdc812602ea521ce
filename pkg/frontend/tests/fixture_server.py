"""Serve a small three-person meeting over the hub REST API for UI tests.

Usage: python3 fixture_server.py PORT DATA_DIR
"""

import sys
from pathlib import Path

import uvicorn

from badgekit.config import AppConfig
from badgekit.hub.api import create_app
from badgekit.hub.registry import GroupRegistry, Participant
from badgekit.hub.store import Store

EVENTS = [
    {"participant_id": "alice", "start_ts": 0, "end_ts": 60_000},
    {"participant_id": "bob", "start_ts": 61_000, "end_ts": 120_000},
    {"participant_id": "alice", "start_ts": 121_500, "end_ts": 180_000},
    {"participant_id": "carol", "start_ts": 181_000, "end_ts": 240_000},
    {"participant_id": "alice", "start_ts": 300_000, "end_ts": 330_000},
    {"participant_id": "carol", "start_ts": 400_000, "end_ts": 460_000},
]


def main() -> None:
    port = int(sys.argv[1])
    data_dir = Path(sys.argv[2])
    registry = GroupRegistry()
    for name in ("alice", "bob", "carol"):
        registry.add(
            "g1",
            Participant(
                participant_id=name,
                badge_id=f"badge-{name}",
                beacon_id=f"beacon-{name}",
                display_name=name.capitalize(),
            ),
        )
    store = Store(data_dir)
    store.append("g1", "events", EVENTS)
    app = create_app(store, registry, AppConfig())
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")


if __name__ == "__main__":
    main()
