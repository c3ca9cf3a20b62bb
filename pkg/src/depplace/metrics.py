"""Load-balance statistics, traffic pricing and the performance index."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .model import CostParams, DependencyGraph, Placement
from .topology import Topology, classify_path, path_cost

DEFAULT_ALPHA = 50.0
DEFAULT_BETA = 50.0
DEFAULT_EPSILON = 1.0


@dataclass(frozen=True)
class PerformanceParams:
    alpha: float = DEFAULT_ALPHA
    beta: float = DEFAULT_BETA
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self) -> None:
        if self.alpha <= 0 or self.beta <= 0 or self.epsilon <= 0:
            raise ValueError("alpha, beta and epsilon must all be > 0")


@dataclass(frozen=True)
class TrafficMetrics:
    intra_edges: int
    core_edges: int
    traffic_cost: float
    traffic_pct: float
    traffic_pct_repeated: float


@dataclass(frozen=True)
class MetricsReport:
    stage: str
    zones: tuple[str, ...]
    occupancy: tuple[int, ...]
    mu: float
    sigma: float
    cv: float
    load_balance_pct: float
    internal_deps: int
    external_deps: int
    intra_cost_edges: int
    core_edges: int
    traffic_cost: float
    traffic_proportion_pct: float
    traffic_proportion_pct_repeated: float
    moves: int
    cumulative_move_cost: float
    performance_index: float


def mean_std(occupancy: Sequence[int]) -> tuple[float, float]:
    """Population mean and standard deviation of per-zone counts."""
    if not occupancy:
        raise ValueError("need at least one zone")
    n = len(occupancy)
    mu = sum(occupancy) / n
    sigma = math.sqrt(sum((c - mu) ** 2 for c in occupancy) / n)
    return mu, sigma


def cv(occupancy: Sequence[int]) -> float:
    mu, sigma = mean_std(occupancy)
    if mu == 0:
        return 0.0
    return sigma / mu


def load_balance_pct(occupancy: Sequence[int]) -> float:
    """100 at perfect balance; falls as the coefficient of variation grows.

    The CV is divided by sqrt(zone count); putting every application in
    one zone gives the lowest score for a given total.
    """
    value = 100 - 100 * cv(occupancy) / math.sqrt(len(occupancy))
    return min(100.0, max(0.0, value))


def traffic_from_edges(intra_edges: int, core_edges: int, cp: CostParams) -> TrafficMetrics:
    cost = intra_edges * cp.intra_edge_cost + core_edges * cp.core_edge_cost
    total = intra_edges + core_edges
    pct = 100 * cost / (cp.bandwidth_unit * total) if total else 0.0
    return TrafficMetrics(intra_edges, core_edges, cost, pct, cp.repetitions * pct)


def traffic_metrics(p: Placement, deps: DependencyGraph, t: Topology, cp: CostParams) -> TrafficMetrics:
    intra = core = 0
    for a, b in deps:
        prof = classify_path(a, b, p, t)
        intra += prof.intra_edges
        core += prof.core_edges
    return traffic_from_edges(intra, core, cp)


def edge_cost(a: str, b: str, p: Placement, t: Topology, cp: CostParams) -> float:
    return path_cost(classify_path(a, b, p, t), cp)


def performance_index(
    traffic_pct_repeated: float,
    load_balance: float,
    alpha: float = DEFAULT_ALPHA,
    beta: float = DEFAULT_BETA,
    epsilon: float = DEFAULT_EPSILON,
) -> float:
    """(alpha + beta) / (traffic + imbalance + epsilon).

    `traffic_pct_repeated` is the repeated-round traffic proportion and the
    imbalance term is 100 - load balance %, so a silent, perfectly balanced
    system scores (alpha + beta) / epsilon.
    """
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be > 0")
    return (alpha + beta) / (traffic_pct_repeated + (100 - load_balance) + epsilon)


def count_dependencies(p: Placement, deps: DependencyGraph) -> tuple[int, int]:
    """(internal, external) dependency counts for the current placement."""
    internal = external = 0
    for a, b in deps:
        if p.zone_of(a) == p.zone_of(b):
            internal += 1
        else:
            external += 1
    return internal, external


def build_report(
    stage: str,
    p: Placement,
    deps: DependencyGraph,
    t: Topology,
    cp: CostParams,
    *,
    moves: int = 0,
    move_cost: float = 0,
    perf: PerformanceParams = PerformanceParams(),
) -> MetricsReport:
    occ = tuple(p.occupancy_vector())
    mu, sigma = mean_std(occ)
    balance = load_balance_pct(occ)
    internal, external = count_dependencies(p, deps)
    tm = traffic_metrics(p, deps, t, cp)
    return MetricsReport(
        stage=stage,
        zones=tuple(p.zone_names),
        occupancy=occ,
        mu=mu,
        sigma=sigma,
        cv=cv(occ),
        load_balance_pct=balance,
        internal_deps=internal,
        external_deps=external,
        intra_cost_edges=tm.intra_edges,
        core_edges=tm.core_edges,
        traffic_cost=tm.traffic_cost,
        traffic_proportion_pct=tm.traffic_pct,
        traffic_proportion_pct_repeated=tm.traffic_pct_repeated,
        moves=moves,
        cumulative_move_cost=move_cost,
        performance_index=performance_index(tm.traffic_pct_repeated, balance, perf.alpha, perf.beta, perf.epsilon),
    )
