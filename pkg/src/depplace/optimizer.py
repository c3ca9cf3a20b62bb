"""Cross-zone dependency reduction and independent-application rebalancing.

The dependency stage is a local search on the max-cut formulation: an
application with neighbours in other zones is tentatively moved next to its
most expensive remote neighbour and the move is kept only if the number of
external dependencies strictly drops. The rebalancing stage then moves
applications without any dependency from overloaded to underloaded zones,
which cannot change the dependency cut.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from .metrics import MetricsReport, PerformanceParams, build_report, count_dependencies, edge_cost
from .model import CostParams, DependencyGraph, Placement, PlacementError
from .scheduler import can_host
from .topology import Topology, move_cost

__all__ = [
    "CutResult",
    "CutSchedule",
    "MoveReason",
    "MoveRecord",
    "NoExternalNeighbor",
    "RebalanceResult",
    "count_dependencies",
    "external_degree",
    "heaviest_neighbor",
    "local_search_cut",
    "rebalance_independent",
    "try_move",
]


class NoExternalNeighbor(PlacementError):
    def __init__(self, app: str):
        self.app = app
        super().__init__(f"application {app!r} has no dependency in another zone")


class MoveReason(enum.Enum):
    DEPENDENCY_CUT = "DependencyCut"
    REBALANCE = "Rebalance"


@dataclass(frozen=True)
class MoveRecord:
    app: str
    from_zone: str
    to_zone: str
    reason: MoveReason
    cost: float


@dataclass(frozen=True)
class CutSchedule:
    """Ascending cut percentages at which progress snapshots are taken."""

    fractions: tuple[float, ...] = (20, 40, 60, 80, 100)

    def __post_init__(self) -> None:
        fr = tuple(self.fractions)
        object.__setattr__(self, "fractions", fr)
        for f in fr:
            if not 0 < f <= 100:
                raise ValueError(f"cut fraction {f} outside (0, 100]")
        if any(b <= a for a, b in zip(fr, fr[1:])):
            raise ValueError(f"cut fractions must be strictly ascending: {fr}")

    @classmethod
    def parse(cls, text: str) -> CutSchedule:
        return cls(tuple(float(x) if "." in x else int(x) for x in text.split(",") if x.strip()))

    def threshold(self, fraction: float, initial_external: int) -> int:
        """Reduction in external edges needed to reach `fraction` percent."""
        return math.ceil(Fraction(str(fraction)) * initial_external / 100)


def external_degree(app: str, p: Placement, deps: DependencyGraph) -> int:
    zone = p.zone_of(app)
    return sum(1 for n in deps.neighbors(app) if p.zone_of(n) != zone)


def external_count(p: Placement, deps: DependencyGraph) -> int:
    return count_dependencies(p, deps)[1]


def heaviest_neighbor(app: str, p: Placement, deps: DependencyGraph, t: Topology, cp: CostParams) -> str:
    """Remote neighbour reached over the most expensive path (name breaks ties)."""
    zone = p.zone_of(app)
    best: tuple[float, str] | None = None
    for n in deps.neighbors(app):
        if p.zone_of(n) == zone:
            continue
        cost = edge_cost(app, n, p, t, cp)
        if best is None or cost > best[0] or (cost == best[0] and n < best[1]):
            best = (cost, n)
    if best is None:
        raise NoExternalNeighbor(app)
    return best[1]


def try_move(
    app: str,
    target: str,
    p: Placement,
    deps: DependencyGraph,
    t: Topology,
    cp: CostParams,
) -> tuple[bool, MoveRecord | None]:
    """Move `app` into `target` and keep it only if the external count drops.

    A rejected move leaves `p` exactly as it was, container index included.
    """
    source = p.zone_of(app)
    if target == source:
        raise ValueError(f"{app} is already in {target}")
    zone = p.zones[target]
    if not can_host(p.residual[target], p.apps[app], p.occupancy[target], zone.container_count):
        return False, None
    before = external_count(p, deps)
    old_zone, old_container = p.relocate(app, target)
    if external_count(p, deps) < before:
        return True, MoveRecord(app, source, target, MoveReason.DEPENDENCY_CUT, move_cost(cp))
    p.relocate(app, old_zone, old_container)
    return False, None


@dataclass
class CutResult:
    placement: Placement
    initial_external: int
    final_external: int
    moves: list[MoveRecord] = field(default_factory=list)
    snapshots: list[MetricsReport] = field(default_factory=list)
    final: MetricsReport | None = None

    @property
    def move_cost(self) -> float:
        return sum(m.cost for m in self.moves)


def local_search_cut(
    p: Placement,
    deps: DependencyGraph,
    t: Topology,
    cp: CostParams,
    schedule: CutSchedule = CutSchedule(),
    *,
    prefix: str = "",
    moves_before: int = 0,
    cost_before: float = 0,
    perf: PerformanceParams = PerformanceParams(),
) -> CutResult:
    """Sweep until no application can be moved closer to its dependencies.

    Each sweep visits applications with remote neighbours in descending
    order of external degree (name order within ties) and tries to move each
    one into its heaviest remote neighbour's zone. A snapshot is taken the
    first time the cumulative reduction reaches each schedule fraction of the
    initial external count, and once more at the end.
    """
    initial = external_count(p, deps)
    result = CutResult(p, initial, initial)
    pending = [(f, schedule.threshold(f, initial)) for f in schedule.fractions] if initial else []

    def report(label: str) -> MetricsReport:
        return build_report(
            label, p, deps, t, cp,
            moves=moves_before + len(result.moves),
            move_cost=cost_before + result.move_cost,
            perf=perf,
        )

    current = initial
    while True:
        degrees = {a: external_degree(a, p, deps) for a in p.assignment if deps.degree(a)}
        order = sorted((a for a, d in degrees.items() if d > 0), key=lambda a: (-degrees[a], a))
        committed = False
        for app in order:
            if external_degree(app, p, deps) == 0:
                continue
            target = p.zone_of(heaviest_neighbor(app, p, deps, t, cp))
            accepted, record = try_move(app, target, p, deps, t, cp)
            if not accepted:
                continue
            committed = True
            result.moves.append(record)
            current = external_count(p, deps)
            while pending and initial - current >= pending[0][1]:
                fraction, _ = pending.pop(0)
                result.snapshots.append(report(f"{prefix}cut{fraction:g}"))
        if not committed:
            break

    result.final_external = current
    result.final = report(f"{prefix}maxcut")
    return result


@dataclass
class RebalanceResult:
    placement: Placement
    moves: list[MoveRecord] = field(default_factory=list)

    @property
    def move_cost(self) -> float:
        return sum(m.cost for m in self.moves)


def _balanced(p: Placement) -> bool:
    occ = p.occupancy_vector()
    return max(occ) == min(occ)


def rebalance_independent(
    p: Placement,
    deps: DependencyGraph,
    t: Topology,
    cp: CostParams,
) -> RebalanceResult:
    """Move dependency-free applications from overloaded to underloaded zones.

    Overloaded and underloaded are relative to the mean occupancy. Source
    zones are tried most-loaded first, their independent applications in
    name order, and each candidate goes to the least-loaded underloaded zone
    that can host it. A move is committed only when it strictly improves the
    load balance, i.e. the source holds at least two more applications than
    the target. Stops at perfect balance or when nothing movable is left.
    """
    result = RebalanceResult(p)
    names = p.zone_names
    while not _balanced(p):
        occ = p.occupancy
        mean = Fraction(sum(occ.values()), len(occ))
        sources = sorted((z for z in names if occ[z] > mean), key=lambda z: (-occ[z], z))
        targets = sorted((z for z in names if occ[z] < mean), key=lambda z: (occ[z], z))
        record = None
        for src in sources:
            for app in sorted(a for a in p.apps_in(src) if deps.degree(a) == 0):
                spec = p.apps[app]
                dest = next(
                    (z for z in targets
                     if can_host(p.residual[z], spec, occ[z], p.zones[z].container_count)),
                    None,
                )
                if dest is None or occ[src] <= occ[dest] + 1:
                    continue
                p.relocate(app, dest)
                record = MoveRecord(app, src, dest, MoveReason.REBALANCE, move_cost(cp))
                break
            if record:
                break
        if record is None:
            break
        result.moves.append(record)
    return result

