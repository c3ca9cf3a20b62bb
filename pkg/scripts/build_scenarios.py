"""Regenerate the bundled scenarios under src/depplace/scenarios/.

tc1 is hand-built: the application order makes Round-Robin reproduce the
zone membership of the small published test case, and the 22 dependencies
give 15 cross-zone / 7 same-zone edges (82 intra + 30 core path edges).
tc2 is drawn at random (seeded) until its deployment profile matches the
large test case: 33 same-zone dependencies, all across pod switches, and
281 cross-zone ones.
"""

from __future__ import annotations

import copy
import itertools
import json
import random
import sys
from pathlib import Path

from depplace.runner import parse_scenario

OUT = Path(__file__).resolve().parent.parent / "src" / "depplace" / "scenarios"

TC1_ZONES = {
    "zone0": "A2 A3 A7 A8 A10 A11 A12 A13 A14 A16",
    "zone1": "A0 A1 A5 A17 A19 A20 A21 A25 A26 A27",
    "zone2": "A4 A23 A28 A29 A30 A31 A32 A33 A34 A35",
    "zone3": "A6 A9 A15 A18 A22 A24 A36 A37 A38 A39",
}

TC1_EDGES = [
    # same zone
    ("A2", "A3"), ("A2", "A7"), ("A30", "A31"), ("A36", "A37"),
    ("A19", "A26"), ("A13", "A16"), ("A6", "A38"),
    # across zones
    ("A0", "A14"), ("A3", "A1"), ("A3", "A5"), ("A10", "A19"), ("A11", "A20"),
    ("A21", "A8"), ("A12", "A30"), ("A28", "A19"), ("A15", "A30"), ("A18", "A29"),
    ("A22", "A32"), ("A24", "A33"), ("A23", "A36"), ("A34", "A6"), ("A35", "A9"),
]

UNIFORM = {"cpu_req": 1, "ram_req": 2, "disk_req": 10}
# does not fit the smallest zone once it is down to eight applications
LARGE = {"A17": {"cpu_req": 1, "ram_req": 2, "disk_req": 40}}


def interleave(zones: dict[str, str]) -> list[str]:
    columns = [v.split() for v in zones.values()]
    return [col[i] for i in range(max(map(len, columns))) for col in columns if i < len(col)]


def tc1() -> dict:
    apps = [{"name": n, **LARGE.get(n, UNIFORM)} for n in interleave(TC1_ZONES)]
    zones = [
        {"name": "zone0", "cpu_cap": 16, "ram_cap": 32, "disk_cap": 110, "container_count": 16},
        *({"name": f"zone{k}", "cpu_cap": 16, "ram_cap": 32, "disk_cap": 200, "container_count": 16}
          for k in (1, 2, 3)),
    ]
    return {
        "seed": 1,
        "cost_params": {"intra_edge_cost": 10, "core_edge_cost": 100, "move_multiplier": 10,
                        "repetitions": 10, "bandwidth_unit": 1000},
        "cut_schedule": [20, 40, 60, 80, 100],
        "zones": zones,
        "applications": apps,
        "dependencies": [list(e) for e in TC1_EDGES],
    }


def tc1_arrivals(seed: int = 14, count: int = 20) -> dict:
    """tc1 plus one wave of `count` apps, each depending on one earlier app."""
    doc = copy.deepcopy(tc1())
    for zone in doc["zones"]:
        zone.update(disk_cap=400, container_count=20)
    rng = random.Random(seed)
    old = [a["name"] for a in doc["applications"]]
    new = [f"A{len(old) + i}" for i in range(count)]
    edges = [[rng.choice(old + new[:i]), name] for i, name in enumerate(new)]
    doc["seed"] = seed
    doc["arrivals"] = [{"applications": [{"name": n, **UNIFORM} for n in new], "dependencies": edges}]
    return doc


def tc2(seed: int = 7, containers: int = 30, dependent: int = 170) -> dict:
    names = [f"A{i}" for i in range(200)]
    # Round-Robin over ten identical zones: app i -> zone i % 10, container i // 10
    where = {n: (i % 10, i // 10) for i, n in enumerate(names)}
    pairs = list(itertools.combinations(names[:dependent], 2))
    same = [(a, b) for a, b in pairs if where[a][0] == where[b][0] and where[a][1] // 2 != where[b][1] // 2]
    cross = [(a, b) for a, b in pairs if where[a][0] != where[b][0]]
    rng = random.Random(seed)
    edges = rng.sample(same, 33) + rng.sample(cross, 281)
    rng.shuffle(edges)
    return {
        "seed": seed,
        "cut_schedule": [20, 40, 60, 80, 100],
        "zones": [{"name": f"zone{k}", "cpu_cap": 64, "ram_cap": 128, "disk_cap": 640, "container_count": containers}
                  for k in range(10)],
        "applications": [{"name": n, **UNIFORM} for n in names],
        "dependencies": [list(e) for e in edges],
    }


def main() -> None:
    docs = {"tc1": tc1(), "tc1_arrivals": tc1_arrivals(), "tc2": tc2()}
    for name, doc in docs.items():
        text = json.dumps(doc, indent=1) + "\n"
        parse_scenario(text)
        (OUT / f"{name}.json").write_text(text)
        print(f"wrote {name}.json", file=sys.stderr)


if __name__ == "__main__":
    main()
