"""Dependency-aware container placement over a Fat-Tree cost model.

Pipeline: balanced Round-Robin deployment, local-search reduction of
cross-zone dependencies, then rebalancing with dependency-free applications.
"""

from .metrics import (
    MetricsReport,
    PerformanceParams,
    count_dependencies,
    cv,
    load_balance_pct,
    performance_index,
    traffic_from_edges,
    traffic_metrics,
)
from .model import (
    ApplicationSpec,
    CostParams,
    DependencyGraph,
    Placement,
    PlacementError,
    Resources,
    UnplacedApplication,
    ValidationError,
    ZoneSpec,
    validate_scenario,
)
from .optimizer import (
    CutSchedule,
    MoveReason,
    MoveRecord,
    NoExternalNeighbor,
    heaviest_neighbor,
    local_search_cut,
    rebalance_independent,
    try_move,
)
from .runner import (
    InfeasibleProfile,
    ParseError,
    RunReport,
    Scenario,
    emit_report,
    load_scenario,
    parse_scenario,
    run_pipeline,
    synthesize_dependencies,
)
from .scheduler import Unschedulable, can_host, deploy_round_robin, sort_zones_ascending
from .topology import PathClass, PathProfile, Topology, build_topology, classify_path, path_cost

__version__ = "0.1.0"

__all__ = [
    "ApplicationSpec",
    "CostParams",
    "CutSchedule",
    "DependencyGraph",
    "InfeasibleProfile",
    "MetricsReport",
    "MoveReason",
    "MoveRecord",
    "NoExternalNeighbor",
    "ParseError",
    "PathClass",
    "PathProfile",
    "PerformanceParams",
    "Placement",
    "PlacementError",
    "Resources",
    "RunReport",
    "Scenario",
    "Topology",
    "UnplacedApplication",
    "Unschedulable",
    "ValidationError",
    "ZoneSpec",
    "build_topology",
    "can_host",
    "classify_path",
    "count_dependencies",
    "cv",
    "deploy_round_robin",
    "emit_report",
    "heaviest_neighbor",
    "load_balance_pct",
    "load_scenario",
    "local_search_cut",
    "parse_scenario",
    "path_cost",
    "performance_index",
    "rebalance_independent",
    "run_pipeline",
    "sort_zones_ascending",
    "synthesize_dependencies",
    "traffic_from_edges",
    "traffic_metrics",
    "try_move",
    "validate_scenario",
]
