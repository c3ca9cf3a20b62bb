from __future__ import annotations

import random

import pytest

from depplace.model import Placement
from depplace.runner import bundled_scenario_text, parse_scenario
from depplace.scheduler import Unschedulable, deploy_round_robin, sort_zones_ascending
from depplace.topology import build_topology

from oracles import random_instance


@pytest.fixture(scope="session")
def tc1():
    return parse_scenario(bundled_scenario_text("tc1"))


@pytest.fixture(scope="session")
def tc2():
    return parse_scenario(bundled_scenario_text("tc2"))


@pytest.fixture(scope="session")
def tc1_arrivals():
    return parse_scenario(bundled_scenario_text("tc1_arrivals"))


def deployed(apps, zones):
    p = Placement(zones)
    deploy_round_robin(apps, sort_zones_ascending(zones), p)
    return p


def deployed_instance(seed: int, **kw):
    """Keep drawing instances from `seed` until one deploys; returns (p, deps, topo)."""
    rng = random.Random(seed)
    while True:
        apps, zones, deps = random_instance(rng, **kw)
        try:
            p = deployed(apps, zones)
        except Unschedulable:
            continue
        return p, deps, build_topology(zones)
