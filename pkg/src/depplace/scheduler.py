"""Capacity-aware Round-Robin deployment."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import ApplicationSpec, Placement, PlacementError, Resources, ZoneSpec


class Unschedulable(PlacementError):
    """No zone can host `app`. Earlier assignments are kept on the exception."""

    def __init__(self, app: str, placement: Placement | None = None, log: Sequence[Assignment] = ()):
        self.app = app
        self.placement = placement
        self.log = list(log)
        super().__init__(f"no zone can host application {app!r}")


@dataclass(frozen=True)
class Assignment:
    app: str
    zone: str
    container: int


def sort_zones_ascending(zones: Iterable[ZoneSpec]) -> list[ZoneSpec]:
    # cpu + ram + disk summed as-is; ties go to the lexicographically smaller name
    return sorted(zones, key=lambda z: (z.cpu_cap + z.ram_cap + z.disk_cap, z.name))


def can_host(residual: Resources, app: ApplicationSpec, occupancy: int, container_count: int) -> bool:
    return occupancy < container_count and residual.covers(app.requirements)


def deploy_round_robin(
    apps: Iterable[ApplicationSpec],
    zones: Sequence[ZoneSpec],
    p: Placement,
) -> tuple[Placement, list[Assignment]]:
    """Deal `apps` out over `zones` (already sorted) in queue order.

    A cursor walks the zones cyclically. Each app goes to the first zone at or
    after the cursor that can host it, in that zone's lowest free container,
    and the cursor moves one past the chosen zone. `p` is mutated and returned.
    """
    log: list[Assignment] = []
    n = len(zones)
    cursor = 0
    for app in apps:
        for step in range(n):
            idx = (cursor + step) % n
            zone = zones[idx]
            if can_host(p.residual[zone.name], app, p.occupancy[zone.name], zone.container_count):
                container = p.place(app, zone.name)
                log.append(Assignment(app.name, zone.name, container))
                cursor = (idx + 1) % n
                break
        else:
            raise Unschedulable(app.name, p, log)
    return p, log
