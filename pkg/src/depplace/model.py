"""Domain types shared by every stage of the placement pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence


class Resources(NamedTuple):
    """A cpu/ram/disk triple in whole units (cores, GiB, GiB)."""

    cpu: int
    ram: int
    disk: int

    def __add__(self, other: Resources) -> Resources:  # type: ignore[override]
        return Resources(self.cpu + other.cpu, self.ram + other.ram, self.disk + other.disk)

    def __sub__(self, other: Resources) -> Resources:
        return Resources(self.cpu - other.cpu, self.ram - other.ram, self.disk - other.disk)

    def covers(self, other: Resources) -> bool:
        return self.cpu >= other.cpu and self.ram >= other.ram and self.disk >= other.disk

    def nonnegative(self) -> bool:
        return self.cpu >= 0 and self.ram >= 0 and self.disk >= 0


@dataclass(frozen=True)
class ApplicationSpec:
    name: str
    cpu_req: int
    ram_req: int
    disk_req: int
    arrival_batch: int = 0

    @property
    def requirements(self) -> Resources:
        return Resources(self.cpu_req, self.ram_req, self.disk_req)


@dataclass(frozen=True)
class ZoneSpec:
    name: str
    cpu_cap: int
    ram_cap: int
    disk_cap: int
    container_count: int

    @property
    def capacity(self) -> Resources:
        return Resources(self.cpu_cap, self.ram_cap, self.disk_cap)


Edge = tuple[str, str]


def _norm(a: str, b: str) -> Edge:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class DependencyGraph:
    """Undirected, unweighted application dependencies.

    Edges are stored normalized (lexicographically ordered endpoints) in input
    order. Construction does not reject bad input; `validate_scenario` reports
    self-loops, duplicates and unknown endpoints all at once.
    """

    vertices: tuple[str, ...] = ()
    edges: tuple[Edge, ...] = ()
    _adj: dict[str, tuple[str, ...]] = field(default=None, init=False, repr=False, compare=False)  # type: ignore[assignment]

    @classmethod
    def from_pairs(cls, vertices: Iterable[str], pairs: Iterable[Sequence[str]]) -> DependencyGraph:
        return cls(tuple(vertices), tuple(_norm(a, b) for a, b in pairs))

    def __post_init__(self) -> None:
        adj: dict[str, list[str]] = {v: [] for v in self.vertices}
        for a, b in self.edges:
            if a == b:
                continue
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        object.__setattr__(self, "_adj", {v: tuple(sorted(set(ns))) for v, ns in adj.items()})

    def neighbors(self, app: str) -> tuple[str, ...]:
        return self._adj.get(app, ())

    def degree(self, app: str) -> int:
        return len(self.neighbors(app))

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)

    def extended(self, vertices: Iterable[str], pairs: Iterable[Sequence[str]]) -> DependencyGraph:
        """Return a new graph with extra vertices and edges appended."""
        new_vertices = list(self.vertices)
        seen = set(new_vertices)
        for v in vertices:
            if v not in seen:
                seen.add(v)
                new_vertices.append(v)
        return DependencyGraph(tuple(new_vertices), self.edges + tuple(_norm(a, b) for a, b in pairs))


@dataclass(frozen=True)
class CostParams:
    intra_edge_cost: float = 10
    core_edge_cost: float = 100
    move_multiplier: float = 10
    repetitions: int = 10
    bandwidth_unit: float = 1000

    def __post_init__(self) -> None:
        for name in ("intra_edge_cost", "core_edge_cost", "move_multiplier", "repetitions", "bandwidth_unit"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)!r}")


# --------------------------------------------------------------------------
# errors


class PlacementError(Exception):
    """Base class for everything raised by this package."""


@dataclass(frozen=True)
class Violation:
    kind: str
    entity: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}({self.entity}): {self.message}"


# violation kinds
DUPLICATE_NAME = "DuplicateName"
UNKNOWN_ENDPOINT = "UnknownDependencyEndpoint"
NEGATIVE_REQUIREMENT = "NegativeRequirement"
EMPTY_REQUIREMENT = "EmptyRequirement"
NEGATIVE_CAPACITY = "NegativeCapacity"
ODD_CONTAINER_COUNT = "OddContainerCount"
SELF_LOOP = "SelfLoop"
DUPLICATE_EDGE = "DuplicateEdge"


class ValidationError(PlacementError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))

    @property
    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


class UnplacedApplication(PlacementError, KeyError):
    def __init__(self, app: str):
        self.app = app
        super().__init__(f"application {app!r} is not placed")

    def __str__(self) -> str:
        return self.args[0]


# --------------------------------------------------------------------------
# validation


def scenario_violations(
    apps: Sequence[ApplicationSpec],
    zones: Sequence[ZoneSpec],
    deps: DependencyGraph,
) -> list[Violation]:
    out: list[Violation] = []

    seen: set[str] = set()
    for app in apps:
        if app.name in seen:
            out.append(Violation(DUPLICATE_NAME, app.name, "application name used more than once"))
        seen.add(app.name)
        req = app.requirements
        if not req.nonnegative():
            out.append(Violation(NEGATIVE_REQUIREMENT, app.name, f"requirements {tuple(req)} contain a negative value"))
        elif not any(req):
            out.append(Violation(EMPTY_REQUIREMENT, app.name, "at least one requirement must be > 0"))
        if app.arrival_batch < 0:
            out.append(Violation(NEGATIVE_REQUIREMENT, app.name, "arrival_batch must be >= 0"))

    zone_names: set[str] = set()
    for zone in zones:
        if zone.name in zone_names:
            out.append(Violation(DUPLICATE_NAME, zone.name, "zone name used more than once"))
        zone_names.add(zone.name)
        if not zone.capacity.nonnegative():
            out.append(Violation(NEGATIVE_CAPACITY, zone.name, f"capacity {tuple(zone.capacity)} contains a negative value"))
        if zone.container_count < 2 or zone.container_count % 2:
            out.append(Violation(ODD_CONTAINER_COUNT, zone.name,
                                 f"container_count must be a positive even number, got {zone.container_count}"))

    edges_seen: set[Edge] = set()
    for a, b in deps.edges:
        label = f"{a}-{b}"
        for end in (a, b):
            if end not in seen:
                out.append(Violation(UNKNOWN_ENDPOINT, end, f"dependency {label} names an unknown application"))
        if a == b:
            out.append(Violation(SELF_LOOP, label, "an application cannot depend on itself"))
        elif (a, b) in edges_seen:
            out.append(Violation(DUPLICATE_EDGE, label, "dependency listed more than once"))
        edges_seen.add((a, b))
    return out


def validate_scenario(
    apps: Sequence[ApplicationSpec],
    zones: Sequence[ZoneSpec],
    deps: DependencyGraph,
) -> tuple[Sequence[ApplicationSpec], Sequence[ZoneSpec], DependencyGraph]:
    """Check every type invariant and return the inputs unchanged.

    All violations are collected before raising, so one ValidationError
    describes everything wrong with the scenario.
    """
    violations = scenario_violations(apps, zones, deps)
    if violations:
        raise ValidationError(violations)
    return apps, zones, deps


# --------------------------------------------------------------------------
# placement


class Placement:
    """Mutable mapping of applications onto (zone, container) slots.

    Residual capacity and occupancy are maintained incrementally; the
    invariants can be re-derived from scratch with `check_invariants`.
    """

    def __init__(self, zones: Sequence[ZoneSpec]):
        self.zones: dict[str, ZoneSpec] = {z.name: z for z in zones}
        self.apps: dict[str, ApplicationSpec] = {}
        self.assignment: dict[str, tuple[str, int]] = {}
        self.slots: dict[str, list[str | None]] = {z.name: [None] * z.container_count for z in zones}
        self.residual: dict[str, Resources] = {z.name: z.capacity for z in zones}
        self.occupancy: dict[str, int] = {z.name: 0 for z in zones}

    @property
    def zone_names(self) -> list[str]:
        return list(self.zones)

    def __contains__(self, app: str) -> bool:
        return app in self.assignment

    def __len__(self) -> int:
        return len(self.assignment)

    def zone_of(self, app: str) -> str:
        try:
            return self.assignment[app][0]
        except KeyError:
            raise UnplacedApplication(app) from None

    def location(self, app: str) -> tuple[str, int]:
        try:
            return self.assignment[app]
        except KeyError:
            raise UnplacedApplication(app) from None

    def apps_in(self, zone: str) -> list[str]:
        return [a for a in self.slots[zone] if a is not None]

    def occupancy_vector(self) -> list[int]:
        return [self.occupancy[z] for z in self.zones]

    def free_container(self, zone: str) -> int | None:
        for i, slot in enumerate(self.slots[zone]):
            if slot is None:
                return i
        return None

    def place(self, app: ApplicationSpec, zone: str, container: int | None = None) -> int:
        """Put an unplaced app into `zone` (lowest free container unless given)."""
        if app.name in self.assignment:
            raise ValueError(f"{app.name} is already placed")
        if container is None:
            container = self.free_container(zone)
            if container is None:
                raise ValueError(f"zone {zone} has no free container")
        elif self.slots[zone][container] is not None:
            raise ValueError(f"container {zone}[{container}] is occupied")
        residual = self.residual[zone] - app.requirements
        if not residual.nonnegative():
            raise ValueError(f"zone {zone} cannot host {app.name}")
        self.apps[app.name] = app
        self.assignment[app.name] = (zone, container)
        self.slots[zone][container] = app.name
        self.residual[zone] = residual
        self.occupancy[zone] += 1
        return container

    def relocate(self, name: str, zone: str, container: int | None = None) -> tuple[str, int]:
        """Move a placed app; returns its previous location.

        The assignment entry is updated in place so dict ordering survives a
        move followed by the reverse move.
        """
        old_zone, old_container = self.location(name)
        app = self.apps[name]
        if container is None:
            container = self.free_container(zone)
            if container is None:
                raise ValueError(f"zone {zone} has no free container")
        elif self.slots[zone][container] is not None:
            raise ValueError(f"container {zone}[{container}] is occupied")
        if zone != old_zone and not self.residual[zone].covers(app.requirements):
            raise ValueError(f"zone {zone} cannot host {name}")
        self.slots[old_zone][old_container] = None
        self.residual[old_zone] = self.residual[old_zone] + app.requirements
        self.occupancy[old_zone] -= 1
        self.slots[zone][container] = name
        self.residual[zone] = self.residual[zone] - app.requirements
        self.occupancy[zone] += 1
        self.assignment[name] = (zone, container)
        return old_zone, old_container

    def copy(self) -> Placement:
        other = Placement.__new__(Placement)
        other.zones = dict(self.zones)
        other.apps = dict(self.apps)
        other.assignment = dict(self.assignment)
        other.slots = {z: list(s) for z, s in self.slots.items()}
        other.residual = dict(self.residual)
        other.occupancy = dict(self.occupancy)
        return other

    def state(self) -> tuple:
        """Hashable snapshot of every mutable field, ordering included."""
        return (
            tuple(self.assignment.items()),
            tuple((z, tuple(s)) for z, s in self.slots.items()),
            tuple(self.residual.items()),
            tuple(self.occupancy.items()),
        )

    def check_invariants(self) -> None:
        """Raise AssertionError if any bookkeeping disagrees with a recount."""
        seen: set[str] = set()
        for zone, spec in self.zones.items():
            hosted = self.apps_in(zone)
            assert len(self.slots[zone]) == spec.container_count
            assert self.occupancy[zone] == len(hosted) <= spec.container_count, zone
            used = Resources(0, 0, 0)
            for i, name in enumerate(self.slots[zone]):
                if name is None:
                    continue
                assert name not in seen, f"{name} placed twice"
                seen.add(name)
                assert self.assignment[name] == (zone, i), name
                used = used + self.apps[name].requirements
            assert self.residual[zone] == spec.capacity - used, zone
            assert self.residual[zone].nonnegative(), zone
        assert seen == set(self.assignment)
