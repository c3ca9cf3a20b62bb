"""Command-line entry point: ``depplace run|validate|synth``."""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from .model import ValidationError
from .optimizer import CutSchedule
from .runner import (
    ParseError,
    InfeasibleProfile,
    Scenario,
    emit_report,
    load_scenario,
    run_pipeline,
    scenario_to_dict,
    synthesize_dependencies,
    uniform_scenario,
    with_overrides,
)
from .scheduler import Unschedulable

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_UNSCHEDULABLE = 2
EXIT_IO = 3

log = logging.getLogger("depplace")


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_run(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario, seed=args.seed)
    schedule = CutSchedule.parse(args.cut_schedule) if args.cut_schedule else None
    scenario = with_overrides(scenario, cut_schedule=schedule, repetitions=args.reps)
    report = run_pipeline(scenario)
    _write(emit_report(report, args.format), args.out)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    s = load_scenario(args.scenario)
    n_arrivals = sum(len(b.apps) for b in s.arrivals)
    print(f"ok: {len(s.apps)} applications, {len(s.zones)} zones, {len(s.deps)} dependencies, "
          f"{len(s.arrivals)} arrival batches ({n_arrivals} applications)")
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    containers = args.containers
    if containers is None:
        per_zone = math.ceil(1.5 * args.apps / args.zones)
        containers = max(2, per_zone + per_zone % 2)
    deps = synthesize_dependencies(args.apps, args.edges, args.seed)
    scenario: Scenario = uniform_scenario(args.apps, args.zones, containers, deps, seed=args.seed)
    _write(json.dumps(scenario_to_dict(scenario), indent=1) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="depplace", description="Dependency-aware container placement simulator")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the deploy / cut / rebalance pipeline")
    run.add_argument("scenario", help="scenario JSON file, or the name of a bundled scenario (tc1, tc2, ...)")
    run.add_argument("--cut-schedule", help="comma-separated cut percentages, e.g. 20,40,60,80,100")
    run.add_argument("--reps", type=int, help="request/response rounds for the repeated traffic figure")
    run.add_argument("--format", choices=("csv", "text"), default="csv")
    run.add_argument("--out", help="write the report here instead of stdout")
    run.add_argument("--seed", type=int, help="override the scenario seed")
    run.set_defaults(func=cmd_run)

    val = sub.add_parser("validate", help="parse and validate a scenario")
    val.add_argument("scenario")
    val.set_defaults(func=cmd_validate)

    syn = sub.add_parser("synth", help="write a uniform scenario with random dependencies")
    syn.add_argument("--apps", type=int, required=True)
    syn.add_argument("--edges", type=int, required=True)
    syn.add_argument("--seed", type=int, required=True)
    syn.add_argument("--zones", type=int, default=4)
    syn.add_argument("--containers", type=int, help="containers per zone (default: 1.5x the even share, rounded up to even)")
    syn.add_argument("--out")
    syn.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ValidationError as exc:
        for v in exc.violations:
            print(f"error: {v}", file=sys.stderr)
        return EXIT_INVALID
    except (ParseError, InfeasibleProfile, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Unschedulable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSCHEDULABLE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
