from .registry import GroupRegistry, Participant
from .service import Hub, IngestReport, PullCursor, ack, pull, sync_time
from .store import Store, resolve_data_dir

__all__ = [
    "GroupRegistry",
    "Participant",
    "Hub",
    "IngestReport",
    "PullCursor",
    "ack",
    "pull",
    "sync_time",
    "Store",
    "resolve_data_dir",
]
