import pytest

from depplace.model import (
    ApplicationSpec,
    CostParams,
    DependencyGraph,
    Placement,
    Resources,
    UnplacedApplication,
    ValidationError,
    ZoneSpec,
    validate_scenario,
)


def apps(*names):
    return [ApplicationSpec(n, 1, 1, 1) for n in names]


ZONES = [ZoneSpec("zone0", 3, 8, 50, 4), ZoneSpec("zone1", 2, 4, 20, 2)]


def test_bundled_scenario_is_valid(tc1):
    assert len(tc1.apps) == 40 and len(tc1.zones) == 4 and len(tc1.deps) == 22
    validate_scenario(tc1.apps, tc1.zones, tc1.deps)


def test_empty_scenario_is_valid():
    out = validate_scenario([], [], DependencyGraph())
    assert out == ([], [], DependencyGraph())


def test_unknown_endpoint():
    deps = DependencyGraph.from_pairs(["A0"], [("A0", "A99")])
    with pytest.raises(ValidationError) as err:
        validate_scenario(apps("A0"), ZONES, deps)
    assert err.value.kinds == {"UnknownDependencyEndpoint"}
    assert "A99" in str(err.value)


def test_all_violations_reported_together():
    bad_apps = apps("A0", "A0") + [ApplicationSpec("A1", -1, 1, 1), ApplicationSpec("A2", 0, 0, 0)]
    bad_zones = [ZoneSpec("z", 1, 1, 1, 3), ZoneSpec("y", -1, 1, 1, 0)]
    deps = DependencyGraph.from_pairs(["A0", "A1"], [("A0", "A0"), ("A0", "A1"), ("A1", "A0"), ("A1", "B")])
    with pytest.raises(ValidationError) as err:
        validate_scenario(bad_apps, bad_zones, deps)
    assert err.value.kinds == {
        "DuplicateName", "NegativeRequirement", "EmptyRequirement", "OddContainerCount",
        "NegativeCapacity", "SelfLoop", "DuplicateEdge", "UnknownDependencyEndpoint",
    }
    names = {v.entity for v in err.value.violations}
    assert {"A0", "A1", "A2", "z", "y", "B"} <= names


def test_validate_is_idempotent(tc1):
    once = validate_scenario(tc1.apps, tc1.zones, tc1.deps)
    assert validate_scenario(*once) == once


def test_graph_is_undirected():
    g = DependencyGraph.from_pairs(["a", "b", "c"], [("b", "a"), ("c", "a")])
    assert g.edges == (("a", "b"), ("a", "c"))
    assert g.neighbors("a") == ("b", "c") and g.neighbors("b") == ("a",)
    assert g.degree("c") == 1 and g.degree("zzz") == 0


def test_cost_params_defaults_and_positivity():
    cp = CostParams()
    assert (cp.intra_edge_cost, cp.core_edge_cost, cp.move_multiplier, cp.repetitions, cp.bandwidth_unit) == (10, 100, 10, 10, 1000)
    assert cp.core_edge_cost == 10 * cp.intra_edge_cost
    with pytest.raises(ValueError):
        CostParams(bandwidth_unit=0)


def test_resources_arithmetic():
    r = Resources(3, 8, 50) - Resources(1, 2, 10)
    assert r == Resources(2, 6, 40) and r.covers(Resources(2, 6, 40)) and not r.covers(Resources(3, 0, 0))
    assert r + Resources(1, 1, 1) == Resources(3, 7, 41)


class TestPlacement:
    def test_place_uses_lowest_free_container(self):
        p = Placement(ZONES)
        a, b, c = apps("a", "b", "c")
        assert p.place(a, "zone0") == 0
        assert p.place(b, "zone0") == 1
        p.relocate("a", "zone1")
        assert p.place(c, "zone0") == 0
        assert p.residual["zone0"] == Resources(1, 6, 48)
        assert p.occupancy_vector() == [2, 1]
        p.check_invariants()

    def test_capacity_and_slot_limits(self):
        p = Placement(ZONES)
        with pytest.raises(ValueError):
            p.place(ApplicationSpec("big", 3, 1, 1), "zone1")
        x, y, z = apps("x", "y", "z")
        p.place(x, "zone1")
        p.place(y, "zone1")
        with pytest.raises(ValueError):
            p.place(z, "zone1")
        with pytest.raises(ValueError):
            p.place(x, "zone0")
        p.check_invariants()

    def test_unplaced_lookup(self):
        with pytest.raises(UnplacedApplication):
            Placement(ZONES).zone_of("ghost")

    def test_relocate_round_trip_is_exact(self):
        p = Placement(ZONES)
        for a in apps("a", "b", "c"):
            p.place(a, "zone0")
        before = p.state()
        old = p.relocate("b", "zone1")
        assert p.state() != before
        p.relocate("b", *old)
        assert p.state() == before
