"""Three-tier Fat-Tree (pod / aggregation / core) and shortest-path pricing.

Containers 2k and 2k+1 of a zone hang off pod switch k. Every pod switch in a
zone is wired to every aggregation switch of that zone, and every aggregation
switch is wired to every core switch, so the shortest path between two
containers only depends on whether they share a zone and a pod switch:

    same pod switch     container-pod-container                      2 edges
    same zone           container-pod-agg-pod-container              4 edges
    different zones     container-pod-agg-core-agg-pod-container     6 edges, 2 touching a core switch

Edges incident to a core switch are priced at `core_edge_cost`, all others at
`intra_edge_cost`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .model import CostParams, Placement, ZoneSpec


class PathClass(enum.Enum):
    SAME_SWITCH = "SameSwitch"
    SAME_ZONE_CROSS_SWITCH = "SameZoneCrossSwitch"
    CROSS_ZONE = "CrossZone"


@dataclass(frozen=True)
class PathProfile:
    path_class: PathClass
    intra_edges: int
    core_edges: int


SAME_SWITCH = PathProfile(PathClass.SAME_SWITCH, 2, 0)
SAME_ZONE_CROSS_SWITCH = PathProfile(PathClass.SAME_ZONE_CROSS_SWITCH, 4, 0)
CROSS_ZONE = PathProfile(PathClass.CROSS_ZONE, 4, 2)


@dataclass(frozen=True)
class Topology:
    pod_switches: dict[str, int]
    aggregation_switches: dict[str, int]
    core_switches: int

    def pod_switch(self, zone: str, container: int) -> int:
        if not 0 <= container < 2 * self.pod_switches[zone]:
            raise IndexError(f"container {container} out of range for zone {zone}")
        return container // 2

    def shortest_path_count(self, a: tuple[str, int], b: tuple[str, int]) -> int:
        """Number of distinct equal-length shortest paths between two containers.

        Informational only; traffic is always priced on a single shortest path.
        """
        (za, ca), (zb, cb) = a, b
        if za == zb and self.pod_switch(za, ca) == self.pod_switch(zb, cb):
            return 1
        if za == zb:
            return self.aggregation_switches[za]
        return self.aggregation_switches[za] * self.core_switches * self.aggregation_switches[zb]


def build_topology(zones: Sequence[ZoneSpec]) -> Topology:
    pods = {z.name: z.container_count // 2 for z in zones}
    return Topology(pod_switches=pods, aggregation_switches=dict(pods), core_switches=len(zones))


def profile_between(a: tuple[str, int], b: tuple[str, int], t: Topology) -> PathProfile:
    (za, ca), (zb, cb) = a, b
    if za != zb:
        return CROSS_ZONE
    if t.pod_switch(za, ca) == t.pod_switch(zb, cb):
        return SAME_SWITCH
    return SAME_ZONE_CROSS_SWITCH


def classify_path(a: str, b: str, p: Placement, t: Topology) -> PathProfile:
    """Shortest-path profile between two placed applications.

    Raises UnplacedApplication if either one is not placed.
    """
    if a == b:
        raise ValueError("classify_path needs two distinct applications")
    return profile_between(p.location(a), p.location(b), t)


def path_cost(profile: PathProfile, cp: CostParams) -> float:
    return profile.intra_edges * cp.intra_edge_cost + profile.core_edges * cp.core_edge_cost


def move_cost(cp: CostParams) -> float:
    """One-time charge for relocating an application between zones."""
    return cp.move_multiplier * path_cost(CROSS_ZONE, cp)
