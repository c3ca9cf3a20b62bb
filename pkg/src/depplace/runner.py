"""Scenario files, the end-to-end pipeline, and report rendering.

Scenario documents are JSON objects::

    {
      "seed": 1,
      "cost_params": {"intra_edge_cost": 10, "core_edge_cost": 100, "move_multiplier": 10,
                      "repetitions": 10, "bandwidth_unit": 1000},
      "cut_schedule": [20, 40, 60, 80, 100],
      "performance": {"alpha": 50, "beta": 50, "epsilon": 1},
      "zones": [{"name": "zone0", "cpu_cap": 16, "ram_cap": 32, "disk_cap": 200, "container_count": 16}],
      "applications": [{"name": "A0", "cpu_req": 1, "ram_req": 2, "disk_req": 10}],
      "dependencies": [["A0", "A14"]],
      "arrivals": [{"applications": [...], "dependencies": [...]}]
    }

Only "zones" and "applications" are mandatory. "dependencies" may also be
``{"synthesize": {"edges": M}}``, which draws M random edges using "seed".
The queue order of the Round-Robin deployment is the order of "applications".
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import random
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .metrics import MetricsReport, PerformanceParams, build_report
from .model import (
    UNKNOWN_ENDPOINT,
    ApplicationSpec,
    CostParams,
    DependencyGraph,
    Placement,
    PlacementError,
    ValidationError,
    Violation,
    ZoneSpec,
    scenario_violations,
)
from .optimizer import CutSchedule, MoveRecord, local_search_cut, rebalance_independent
from .scheduler import Unschedulable, deploy_round_robin, sort_zones_ascending
from .topology import build_topology

CSV_COLUMNS = (
    "stage", "occupancy", "mu", "sigma", "cv", "load_balance_pct", "internal_deps", "external_deps",
    "intra_edges", "core_edges", "traffic_cost", "traffic_pct", "traffic_pct_repeated", "moves",
    "move_cost", "performance_index",
)

ARRIVAL_NOTE = "arrival batches re-optimize the whole system; previously deployed applications may move"


class ParseError(PlacementError):
    def __init__(self, message: str, context: str = ""):
        self.context = context
        super().__init__(f"{context}: {message}" if context else message)


class InfeasibleProfile(PlacementError):
    pass


@dataclass(frozen=True)
class ArrivalBatch:
    apps: tuple[ApplicationSpec, ...]
    edges: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class Scenario:
    apps: tuple[ApplicationSpec, ...]
    zones: tuple[ZoneSpec, ...]
    deps: DependencyGraph
    cost_params: CostParams = CostParams()
    cut_schedule: CutSchedule = CutSchedule()
    arrivals: tuple[ArrivalBatch, ...] = ()
    seed: int | None = None
    performance: PerformanceParams = PerformanceParams()


@dataclass
class RunReport:
    stages: list[MetricsReport] = field(default_factory=list)
    moves: list[MoveRecord] = field(default_factory=list)
    placement: Placement | None = None
    notes: list[str] = field(default_factory=list)

    def stage(self, label: str) -> MetricsReport:
        for r in self.stages:
            if r.stage == label:
                return r
        raise KeyError(label)

    @property
    def final(self) -> MetricsReport:
        return self.stages[-1]


# --------------------------------------------------------------------------
# dependency synthesis


def synthesize_dependencies(
    apps: int | Sequence[str],
    edges: int,
    seed: int,
    *,
    zone_of: Mapping[str, str] | None = None,
    internal: int | None = None,
) -> DependencyGraph:
    """Draw `edges` distinct random dependencies, reproducibly for `seed`.

    With `zone_of` and `internal`, exactly `internal` of them join two apps
    in the same zone and the rest cross zones.
    """
    names = [f"A{i}" for i in range(apps)] if isinstance(apps, int) else list(apps)
    rng = random.Random(seed)
    pairs = list(itertools.combinations(names, 2))
    if edges < 0 or edges > len(pairs):
        raise InfeasibleProfile(f"{len(names)} applications admit at most {len(pairs)} dependencies, asked for {edges}")
    if internal is None:
        chosen = rng.sample(pairs, edges)
    else:
        if zone_of is None:
            raise ValueError("an internal/external profile needs zone_of")
        same = [pr for pr in pairs if zone_of[pr[0]] == zone_of[pr[1]]]
        cross = [pr for pr in pairs if zone_of[pr[0]] != zone_of[pr[1]]]
        external = edges - internal
        if not 0 <= internal <= len(same) or not 0 <= external <= len(cross):
            raise InfeasibleProfile(
                f"cannot draw {internal} internal / {external} external dependencies "
                f"({len(same)} same-zone and {len(cross)} cross-zone pairs available)"
            )
        chosen = rng.sample(same, internal) + rng.sample(cross, external)
        rng.shuffle(chosen)
    return DependencyGraph.from_pairs(names, chosen)


# --------------------------------------------------------------------------
# parsing


def _get(obj: Mapping[str, Any], key: str, ctx: str, kind: type | tuple = int, default: Any = ...) -> Any:
    if key not in obj:
        if default is ...:
            raise ParseError(f"missing key {key!r}", ctx)
        return default
    value = obj[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise ParseError(f"{key!r} must be an integer, got {value!r}", ctx)
    if not isinstance(value, kind):
        raise ParseError(f"{key!r} has wrong type {type(value).__name__}", ctx)
    return value


def _parse_app(obj: Any, ctx: str, batch: int | None = None) -> ApplicationSpec:
    if not isinstance(obj, dict):
        raise ParseError("application entry must be an object", ctx)
    arrival = _get(obj, "arrival_batch", ctx, default=0)
    if batch is not None:
        if "arrival_batch" in obj and arrival != batch:
            raise ParseError(f"arrival_batch {arrival} contradicts enclosing batch {batch}", ctx)
        arrival = batch
    return ApplicationSpec(
        name=_get(obj, "name", ctx, str),
        cpu_req=_get(obj, "cpu_req", ctx, default=0),
        ram_req=_get(obj, "ram_req", ctx, default=0),
        disk_req=_get(obj, "disk_req", ctx, default=0),
        arrival_batch=arrival,
    )


def _parse_zone(obj: Any, ctx: str) -> ZoneSpec:
    if not isinstance(obj, dict):
        raise ParseError("zone entry must be an object", ctx)
    return ZoneSpec(
        name=_get(obj, "name", ctx, str),
        cpu_cap=_get(obj, "cpu_cap", ctx),
        ram_cap=_get(obj, "ram_cap", ctx),
        disk_cap=_get(obj, "disk_cap", ctx),
        container_count=_get(obj, "container_count", ctx),
    )


def _parse_pairs(value: Any, ctx: str) -> list[tuple[str, str]]:
    if not isinstance(value, list):
        raise ParseError("dependencies must be a list of [app, app] pairs", ctx)
    out = []
    for i, pair in enumerate(value):
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, str) for x in pair)):
            raise ParseError(f"expected a pair of application names, got {pair!r}", f"{ctx}[{i}]")
        out.append((pair[0], pair[1]))
    return out


def scenario_from_dict(doc: Any, *, seed: int | None = None) -> Scenario:
    """Build and validate a Scenario from an already-decoded JSON object."""
    if not isinstance(doc, dict):
        raise ParseError("scenario must be a JSON object")
    zones_raw = _get(doc, "zones", "scenario", list)
    apps_raw = _get(doc, "applications", "scenario", list)
    zones = tuple(_parse_zone(z, f"zones[{i}]") for i, z in enumerate(zones_raw))
    all_apps = [_parse_app(a, f"applications[{i}]") for i, a in enumerate(apps_raw)]
    if seed is None:
        seed = _get(doc, "seed", "scenario", default=None)

    batches: dict[int, list[ApplicationSpec]] = {}
    for app in all_apps:
        batches.setdefault(app.arrival_batch, []).append(app)
    initial = batches.pop(0, [])
    arrival_edges: dict[int, list[tuple[str, str]]] = {}
    for k, batch in enumerate(_get(doc, "arrivals", "scenario", list, default=[]), start=1):
        ctx = f"arrivals[{k - 1}]"
        if not isinstance(batch, dict):
            raise ParseError("arrival batch must be an object", ctx)
        for i, a in enumerate(_get(batch, "applications", ctx, list, default=[])):
            batches.setdefault(k, []).append(_parse_app(a, f"{ctx}.applications[{i}]", batch=k))
        arrival_edges[k] = _parse_pairs(batch.get("dependencies", []), f"{ctx}.dependencies")

    deps_raw = doc.get("dependencies", [])
    if isinstance(deps_raw, dict):
        spec = deps_raw.get("synthesize")
        if not isinstance(spec, dict):
            raise ParseError("dependency object must contain 'synthesize'", "dependencies")
        if seed is None:
            raise ParseError("synthesized dependencies need a 'seed'", "dependencies")
        edges = _get(spec, "edges", "dependencies.synthesize")
        deps = synthesize_dependencies([a.name for a in initial], edges, seed)
    else:
        deps = DependencyGraph.from_pairs((a.name for a in initial), _parse_pairs(deps_raw, "dependencies"))

    cp_raw = _get(doc, "cost_params", "scenario", dict, default={})
    unknown = set(cp_raw) - set(CostParams.__dataclass_fields__)
    if unknown:
        raise ParseError(f"unknown cost parameter(s) {sorted(unknown)}", "cost_params")
    perf_raw = _get(doc, "performance", "scenario", dict, default={})
    try:
        cost_params = CostParams(**cp_raw)
        performance = PerformanceParams(**perf_raw)
        schedule = CutSchedule(tuple(_get(doc, "cut_schedule", "scenario", list, default=[20, 40, 60, 80, 100])))
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc), "scenario") from exc

    arrivals = tuple(
        ArrivalBatch(tuple(batches.get(k, [])), tuple(arrival_edges.get(k, [])))
        for k in range(1, max([*batches, *arrival_edges], default=0) + 1)
    )
    scenario = Scenario(
        apps=tuple(initial),
        zones=zones,
        deps=deps,
        cost_params=cost_params,
        cut_schedule=schedule,
        arrivals=arrivals,
        seed=seed,
        performance=performance,
    )
    return validate(scenario)


def validate(s: Scenario) -> Scenario:
    """Run core-model validation over the whole scenario, arrivals included."""
    everything = list(s.apps) + [a for b in s.arrivals for a in b.apps]
    full = s.deps.extended((), (e for b in s.arrivals for e in b.edges))
    violations = scenario_violations(everything, s.zones, full)
    known = {a.name for a in everything}
    present = {a.name for a in s.apps}
    for a, b in s.deps:
        for end in (a, b):
            if end in known and end not in present:
                violations.append(Violation(UNKNOWN_ENDPOINT, end, "initial dependency names an application that has not arrived"))
    for k, batch in enumerate(s.arrivals, start=1):
        present |= {a.name for a in batch.apps}
        for a, b in batch.edges:
            for end in (a, b):
                if end in known and end not in present:
                    violations.append(Violation(UNKNOWN_ENDPOINT, end, f"arrival batch {k} names an application from a later batch"))
    if violations:
        raise ValidationError(violations)
    return s


def parse_scenario(document: str, *, seed: int | None = None) -> Scenario:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    return scenario_from_dict(doc, seed=seed)


def bundled_scenarios() -> list[str]:
    root = resources.files("depplace") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def bundled_scenario_text(name: str) -> str:
    name = name[:-5] if name.endswith(".json") else name
    return (resources.files("depplace") / "scenarios" / f"{name}.json").read_text()


def load_scenario(path: str | Path, *, seed: int | None = None) -> Scenario:
    """Read a scenario file; bare names of bundled scenarios (``tc1``) also work."""
    path = Path(path)
    if not path.exists() and path.stem in bundled_scenarios() and path.parent == Path("."):
        return parse_scenario(bundled_scenario_text(path.stem), seed=seed)
    return parse_scenario(path.read_text(), seed=seed)


def scenario_to_dict(s: Scenario) -> dict[str, Any]:
    def app(a: ApplicationSpec) -> dict[str, Any]:
        return {"name": a.name, "cpu_req": a.cpu_req, "ram_req": a.ram_req, "disk_req": a.disk_req}

    doc: dict[str, Any] = {}
    if s.seed is not None:
        doc["seed"] = s.seed
    doc["cost_params"] = {k: getattr(s.cost_params, k) for k in CostParams.__dataclass_fields__}
    doc["cut_schedule"] = list(s.cut_schedule.fractions)
    doc["zones"] = [
        {"name": z.name, "cpu_cap": z.cpu_cap, "ram_cap": z.ram_cap, "disk_cap": z.disk_cap,
         "container_count": z.container_count}
        for z in s.zones
    ]
    doc["applications"] = [app(a) for a in s.apps]
    doc["dependencies"] = [list(e) for e in s.deps]
    if s.arrivals:
        doc["arrivals"] = [
            {"applications": [app(a) for a in b.apps], "dependencies": [list(e) for e in b.edges]}
            for b in s.arrivals
        ]
    return doc


# --------------------------------------------------------------------------
# pipeline


def run_pipeline(s: Scenario) -> RunReport:
    """Deploy, cut dependencies, rebalance; then the same for each arrival batch.

    If a deployment fails, the Unschedulable exception carries the partial
    RunReport in its `report` attribute.
    """
    report = RunReport()
    if s.arrivals:
        report.notes.append(ARRIVAL_NOTE)
    zones = sort_zones_ascending(s.zones)
    topo = build_topology(s.zones)
    cp = s.cost_params
    p = Placement(s.zones)
    report.placement = p
    deps = s.deps

    def snapshot(label: str) -> None:
        report.stages.append(build_report(
            label, p, deps, topo, cp,
            moves=len(report.moves),
            move_cost=sum(m.cost for m in report.moves),
            perf=s.performance,
        ))

    def optimize(prefix: str) -> None:
        cut = local_search_cut(
            p, deps, topo, cp, s.cut_schedule,
            prefix=prefix,
            moves_before=len(report.moves),
            cost_before=sum(m.cost for m in report.moves),
            perf=s.performance,
        )
        report.moves.extend(cut.moves)
        report.stages.extend(cut.snapshots)
        report.stages.append(cut.final)
        report.moves.extend(rebalance_independent(p, deps, topo, cp).moves)
        snapshot(f"{prefix}rebalance")

    try:
        deploy_round_robin(s.apps, zones, p)
        snapshot("deploy")
        optimize("")
        for k, batch in enumerate(s.arrivals, start=1):
            deps = deps.extended((a.name for a in batch.apps), batch.edges)
            deploy_round_robin(batch.apps, zones, p)
            snapshot(f"arrival{k}-deploy")
            optimize(f"arrival{k}-")
    except Unschedulable as exc:
        exc.report = report
        raise
    return report


# --------------------------------------------------------------------------
# output


def _csv_row(r: MetricsReport) -> list[str]:
    values = (
        r.stage, " ".join(map(str, r.occupancy)), r.mu, r.sigma, r.cv, r.load_balance_pct,
        r.internal_deps, r.external_deps, r.intra_cost_edges, r.core_edges, r.traffic_cost,
        r.traffic_proportion_pct, r.traffic_proportion_pct_repeated, r.moves, r.cumulative_move_cost,
        r.performance_index,
    )
    return [repr(v) if isinstance(v, float) else str(v) for v in values]


def render_csv(r: RunReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for stage in r.stages:
        writer.writerow(_csv_row(stage))
    return buf.getvalue()


def occupancy_bars(stage: MetricsReport) -> list[str]:
    width = max((len(z) for z in stage.zones), default=0)
    return [f"{z.ljust(width)}   :{'+' * n}" for z, n in zip(stage.zones, stage.occupancy)]


def render_text(r: RunReport) -> str:
    lines = [f"# {note}" for note in r.notes]
    done = 0
    for stage in r.stages:
        moved = r.moves[done:stage.moves]
        done = stage.moves
        lines.append(f"== {stage.stage} ==")
        lines.extend(occupancy_bars(stage))
        lines.append("map[" + " ".join(f"{z}:{n}" for z, n in zip(stage.zones, stage.occupancy)) + "]")
        if moved:
            lines.append("moved: " + " ".join(f"{m.app}({m.from_zone}->{m.to_zone})" for m in moved))
        lines += [
            f"number of moving application = {len(moved)}",
            f"dependencies in the same zone = {stage.internal_deps}",
            f"dependencies in different zones = {stage.external_deps}",
            f"edges in the same zone = {stage.intra_cost_edges}",
            f"edges between zones = {stage.core_edges}",
            f"total traffic cost = {stage.traffic_cost}",
            f"traffic proportion = {stage.traffic_proportion_pct}",
            f"traffic proportion repeated = {stage.traffic_proportion_pct_repeated}",
            f"moving applications cost = {stage.cumulative_move_cost}",
            f"cv = {stage.cv}",
            f"load balancing = {stage.load_balance_pct}",
            f"performance index = {stage.performance_index}",
            "",
        ]
    return "\n".join(lines)


def emit_report(r: RunReport, format: str = "csv") -> str:
    if format == "csv":
        return render_csv(r)
    if format == "text":
        return render_text(r)
    raise ValueError(f"unknown report format {format!r}")


def with_overrides(
    s: Scenario,
    *,
    cut_schedule: CutSchedule | None = None,
    repetitions: int | None = None,
) -> Scenario:
    if cut_schedule is not None:
        s = replace(s, cut_schedule=cut_schedule)
    if repetitions is not None:
        s = replace(s, cost_params=replace(s.cost_params, repetitions=repetitions))
    return s


def uniform_scenario(
    n_apps: int,
    n_zones: int,
    containers: int,
    deps: DependencyGraph | Iterable[tuple[str, str]] = (),
    *,
    seed: int | None = None,
) -> Scenario:
    """N identical one-unit apps over K identical zones sized for `containers` each."""
    apps = tuple(ApplicationSpec(f"A{i}", 1, 1, 1) for i in range(n_apps))
    zones = tuple(ZoneSpec(f"zone{k}", containers, containers, containers, containers) for k in range(n_zones))
    if not isinstance(deps, DependencyGraph):
        deps = DependencyGraph.from_pairs((a.name for a in apps), deps)
    return validate(Scenario(apps=apps, zones=zones, deps=deps, seed=seed))
