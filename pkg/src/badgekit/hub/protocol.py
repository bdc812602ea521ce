"""Hub <-> badge wire protocol.

Length-delimited JSON messages (4-byte big-endian length prefix, UTF-8
payload) over any socket-like stream. Message types: hello, time_sync,
pull, chunks, ack, error. Works over a TCP socket or an in-process
socketpair; the framing is the same either way.
"""

from __future__ import annotations

import json
import socket
import struct
import threading
from typing import Optional

from ..errors import ProtocolError
from ..simulator import SampleChunk, SimulatedBadge

_LEN = struct.Struct(">I")
MAX_FRAME_BYTES = 64 * 1024 * 1024


def send_frame(sock: socket.socket, message: dict) -> None:
    payload = json.dumps(message, sort_keys=True, separators=(",", ":")).encode()
    sock.sendall(_LEN.pack(len(payload)) + payload)


def recv_frame(sock: socket.socket) -> Optional[dict]:
    header = _recv_exact(sock, _LEN.size)
    if header is None:
        return None
    (length,) = _LEN.unpack(header)
    if length > MAX_FRAME_BYTES:
        raise ProtocolError(f"frame of {length} bytes exceeds limit")
    payload = _recv_exact(sock, length)
    if payload is None:
        raise ProtocolError("stream closed mid-frame")
    return json.loads(payload.decode())


def _recv_exact(sock: socket.socket, n: int) -> Optional[bytes]:
    buf = b""
    while len(buf) < n:
        part = sock.recv(n - len(buf))
        if not part:
            return None if not buf else None
        buf += part
    return buf


def serve_badge(badge: SimulatedBadge, sock: socket.socket, hub_now_ms: int = 0) -> None:
    """Answer protocol requests for one badge until the peer disconnects.

    ``hub_now_ms`` stands in for true wall time when serving simulated badges.
    """
    while True:
        try:
            msg = recv_frame(sock)
        except (OSError, ProtocolError):
            break
        if msg is None:
            break
        kind = msg.get("type")
        if kind == "hello":
            send_frame(sock, {"type": "hello", "badge_id": badge.badge_id})
        elif kind == "time_sync":
            send_frame(
                sock,
                {"type": "time_sync", "badge_ts": badge.clock(msg["hub_ts"])},
            )
            if "offset_ms" in msg:
                badge.adopt_offset(msg["offset_ms"])
        elif kind == "set_offset":
            badge.adopt_offset(msg["offset_ms"])
            send_frame(sock, {"type": "ok"})
        elif kind == "pull":
            chunks = badge.pull(msg["after_seq"])
            send_frame(
                sock,
                {"type": "chunks", "chunks": [c.as_dict() for c in chunks]},
            )
        elif kind == "ack":
            badge.ack(msg["seq"])
            send_frame(sock, {"type": "ok"})
        else:
            send_frame(sock, {"type": "error", "reason": f"unknown type {kind!r}"})


class BadgeClient:
    """Hub-side proxy speaking the wire protocol; satisfies the BadgePeer contract."""

    def __init__(self, sock: socket.socket):
        self._sock = sock
        reply = self._call({"type": "hello"})
        self.badge_id = reply["badge_id"]
        self._max_seq_cache = -1

    def _call(self, message: dict) -> dict:
        send_frame(self._sock, message)
        reply = recv_frame(self._sock)
        if reply is None:
            raise ConnectionError("badge connection closed")
        if reply.get("type") == "error":
            raise ProtocolError(reply.get("reason", "unknown protocol error"))
        return reply

    def clock(self, hub_true_ts: int) -> int:
        return self._call({"type": "time_sync", "hub_ts": hub_true_ts})["badge_ts"]

    def adopt_offset(self, offset_ms: int) -> None:
        self._call({"type": "set_offset", "offset_ms": offset_ms})

    def pull(self, after_seq: int) -> list[SampleChunk]:
        reply = self._call({"type": "pull", "after_seq": after_seq})
        chunks = [SampleChunk.from_dict(c) for c in reply["chunks"]]
        if chunks:
            self._max_seq_cache = max(self._max_seq_cache, chunks[-1].seq)
        return chunks

    def ack(self, seq: int) -> None:
        self._call({"type": "ack", "seq": seq})

    @property
    def max_seq(self) -> int:
        return self._max_seq_cache

    def close(self) -> None:
        self._sock.close()


def connect_in_process(badge: SimulatedBadge, hub_now_ms: int = 0) -> BadgeClient:
    """Spin up a badge server on a socketpair and return a connected client."""
    hub_sock, badge_sock = socket.socketpair()
    thread = threading.Thread(
        target=serve_badge, args=(badge, badge_sock, hub_now_ms), daemon=True
    )
    thread.start()
    return BadgeClient(hub_sock)
