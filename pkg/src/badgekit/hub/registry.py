"""Group registry: which participant/badge/beacon belongs to which group."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional


class RegistryError(ValueError):
    pass


@dataclass(frozen=True)
class Participant:
    participant_id: str
    badge_id: str
    beacon_id: str
    display_name: str


class GroupRegistry:
    """Maps group_id -> participants; badge/beacon ids are unique across groups."""

    def __init__(self, groups: Optional[dict] = None):
        self.groups: dict[str, list[Participant]] = {}
        self._device_group: dict[str, str] = {}
        self._badge_participant: dict[str, Participant] = {}
        if groups:
            for gid, members in groups.items():
                for m in members:
                    self.add(gid, m)

    def add(self, group_id: str, participant: Participant) -> None:
        # badge_id == beacon_id is allowed (one device plays both roles)
        for device in {participant.badge_id, participant.beacon_id}:
            if device in self._device_group:
                raise RegistryError(f"device id {device!r} already registered")
        if any(
            p.participant_id == participant.participant_id
            for members in self.groups.values()
            for p in members
        ):
            raise RegistryError(
                f"participant {participant.participant_id!r} already registered"
            )
        self.groups.setdefault(group_id, []).append(participant)
        self._device_group[participant.badge_id] = group_id
        self._device_group[participant.beacon_id] = group_id
        self._badge_participant[participant.badge_id] = participant
        self._badge_participant[participant.beacon_id] = participant

    def group_of(self, device_id: str) -> Optional[str]:
        return self._device_group.get(device_id)

    def participant_for(self, device_id: str) -> Optional[Participant]:
        return self._badge_participant.get(device_id)

    def group_ids(self) -> list[str]:
        return sorted(self.groups)

    def participants(self, group_id: str) -> list[Participant]:
        return list(self.groups.get(group_id, []))

    def as_dict(self) -> dict:
        return {
            "groups": {
                gid: {
                    "participants": [
                        {
                            "participant_id": p.participant_id,
                            "badge_id": p.badge_id,
                            "beacon_id": p.beacon_id,
                            "display_name": p.display_name,
                        }
                        for p in members
                    ]
                }
                for gid, members in self.groups.items()
            }
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "GroupRegistry":
        reg = cls()
        for gid, body in doc.get("groups", {}).items():
            for p in body.get("participants", []):
                reg.add(
                    gid,
                    Participant(
                        participant_id=p["participant_id"],
                        badge_id=p["badge_id"],
                        beacon_id=p["beacon_id"],
                        display_name=p.get("display_name", p["participant_id"]),
                    ),
                )
        return reg

    def save(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.as_dict(), indent=2, sort_keys=True))

    @classmethod
    def load(cls, path: Path) -> "GroupRegistry":
        return cls.from_dict(json.loads(path.read_text()))
