"""Command-line surface: solve, bench, export-cnf, validate, sat.

Exit codes: 0 success, 1 error, 2 resource exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time

from . import cnf, encoder, satcore, solvers, verify
from .instance import (
    CapacityMap,
    Instance,
    generate_random,
    load_capacities,
    parse_map,
    parse_scenario,
    validate_instance,
)
from .pathcalc import UnsolvableInstanceError, cost_lower_bound

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_EXHAUSTED = 2


class UsageError(Exception):
    pass


def _add_instance_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--map", help="movingai .map file")
    p.add_argument("--scen", help="movingai .scen file")
    p.add_argument("--agents", type=int, help="number of agents to take from the scenario")
    p.add_argument("--capacity", type=int, help="uniform vertex capacity")
    p.add_argument("--capacity-file", help="per-vertex capacity file")


def _build_instance(args) -> Instance:
    if not args.map or not args.scen:
        raise UsageError("--map and --scen are required")
    if args.capacity is not None and args.capacity_file:
        raise UsageError("--capacity and --capacity-file are mutually exclusive")
    if args.capacity is not None and args.capacity < 1:
        raise UsageError(f"--capacity must be >= 1, got {args.capacity}")
    with open(args.map, encoding="utf-8") as f:
        graph = parse_map(f.read())
    with open(args.scen, encoding="utf-8") as f:
        agents = parse_scenario(f.read(), graph)
    if args.agents is not None:
        if args.agents > len(agents):
            raise UsageError(f"scenario has only {len(agents)} agents")
        agents = agents[: args.agents]
    if args.capacity_file:
        with open(args.capacity_file, encoding="utf-8") as f:
            caps = load_capacities(f.read(), graph)
    else:
        caps = CapacityMap.uniform(graph, args.capacity if args.capacity is not None else 1)
    instance = Instance(graph, caps, tuple(agents))
    validate_instance(instance)
    return instance


def cmd_solve(args) -> int:
    instance = _build_instance(args)
    limits = solvers.Limits(time_limit_s=args.timeout)
    if args.no_follow and args.solver != solvers.EAGER:
        raise UsageError("--no-follow is only supported with --solver eager")
    report = solvers.solve(instance, args.solver, limits, no_follow=args.no_follow)
    if report.status == solvers.SOLVED:
        sys.stdout.write(solvers.format_plan(report))
        return EXIT_OK
    if report.status == solvers.UNSOLVABLE:
        print("unsolvable: some goal is unreachable", file=sys.stderr)
        return EXIT_ERROR
    print("resource exhausted", file=sys.stderr)
    return EXIT_EXHAUSTED


BENCH_HEADER = ["instance", "solver", "capacity", "k", "outcome",
                "cost", "time_s", "vars", "clauses", "refinements"]


def _bench_cells(args):
    for capacity in args.capacities:
        for k in args.agent_counts:
            for rep in range(args.count):
                yield capacity, k, rep


def run_bench(args) -> list[dict]:
    width, height = args.grid
    rows = []
    for capacity, k, rep in _bench_cells(args):
        seed = args.seed + rep
        instance = generate_random(width, height, k, capacity, seed)
        name = f"g{width}x{height}-k{k}-s{seed}"
        for solver_name in args.solvers:
            limits = solvers.Limits(time_limit_s=args.timeout)
            started = time.monotonic()
            report = solvers.solve(instance, solver_name, limits)
            elapsed = time.monotonic() - started
            last = report.iterations[-1] if report.iterations else None
            if report.status == solvers.SOLVED:
                outcome = "solved"
            elif report.status == solvers.UNSOLVABLE:
                outcome = "unsolvable"
            else:
                outcome = "timeout"
            rows.append({
                "instance": name,
                "solver": solver_name,
                "capacity": capacity,
                "k": k,
                "outcome": outcome,
                "cost": report.optimal_cost if report.optimal_cost is not None else "",
                "time_s": f"{elapsed:.3f}",
                "vars": last.variables if last else 0,
                "clauses": last.clauses if last else 0,
                "refinements": report.total_refinements,
            })
    rows.sort(key=lambda r: (r["instance"], r["solver"], r["capacity"]))
    return rows


def _sorted_table(rows: list[dict]) -> str:
    """Per (solver, capacity) column of ascending runtimes over solved runs."""
    columns: dict[str, list[float]] = {}
    for row in rows:
        if row["outcome"] != "solved":
            continue  # runs beyond the time limit are excluded from the curves
        key = f"{row['solver']}_c{row['capacity']}"
        columns.setdefault(key, []).append(float(row["time_s"]))
    for series in columns.values():
        series.sort()
    names = sorted(columns)
    depth = max((len(columns[n]) for n in names), default=0)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["rank"] + names)
    for r in range(depth):
        writer.writerow(
            [r + 1] + [f"{columns[n][r]:.3f}" if r < len(columns[n]) else "" for n in names]
        )
    return out.getvalue()


def cmd_bench(args) -> int:
    rows = run_bench(args)
    if args.sorted:
        sys.stdout.write(_sorted_table(rows))
        return EXIT_OK
    writer = csv.DictWriter(sys.stdout, fieldnames=BENCH_HEADER, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return EXIT_OK


def cmd_export_cnf(args) -> int:
    instance = _build_instance(args)
    if args.xi == "auto":
        xi = cost_lower_bound(instance)
    else:
        xi = int(args.xi)
    if args.mode == "basic":
        artifacts = encoder.encode_basic(instance, xi)
    else:
        artifacts = encoder.encode_complete(instance, xi, no_follow=args.no_follow)
    text = cnf.to_dimacs(artifacts.formula)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_validate(args) -> int:
    instance = _build_instance(args)
    with open(args.plan, encoding="utf-8") as f:
        plan = solvers.parse_plan(f.read())
    violations = verify.validate_plan(instance, plan)
    for v in violations:
        print(f"{v.kind} at t={v.time} agents={list(v.agents)} where={v.where}")
    if violations:
        return EXIT_ERROR
    print("valid")
    return EXIT_OK


def cmd_sat(args) -> int:
    with open(args.cnf, encoding="utf-8") as f:
        text = f.read()
    solver = satcore.CdclSolver()
    solver.load_dimacs(text)
    result = solver.solve(time_limit=args.timeout)
    if result.outcome == satcore.SAT:
        print("s SATISFIABLE")
        lits = [v if result.model[v] else -v for v in range(1, solver.num_vars + 1)]
        print("v " + " ".join(str(l) for l in lits) + " 0")
        return EXIT_OK
    if result.outcome == satcore.UNSAT:
        print("s UNSATISFIABLE")
        return EXIT_OK
    print("s UNKNOWN")
    return EXIT_EXHAUSTED


def _grid_arg(value: str) -> tuple[int, int]:
    try:
        w, h = value.lower().split("x")
        return int(w), int(h)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected WxH, got {value!r}") from exc


def _int_list(value: str) -> list[int]:
    return [int(tok) for tok in value.split(",") if tok]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capmapf",
        description="Optimal multi-agent path finding with vertex capacities (SAT-based)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance and print the plan")
    _add_instance_flags(p)
    p.add_argument("--solver", choices=[solvers.EAGER, solvers.LAZY], default=solvers.EAGER)
    p.add_argument("--timeout", type=float, default=500.0, help="seconds of wall clock")
    p.add_argument("--no-follow", action="store_true",
                   help="forbid moving into a vertex unless it has spare capacity beforehand")
    p.add_argument("--seed", type=int, default=0, help="reserved; kept for reproducibility")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run the benchmark grid and print CSV")
    p.add_argument("--grid", type=_grid_arg, default=(8, 8), help="open grid WxH")
    p.add_argument("--agent-counts", dest="agent_counts", type=_int_list, default=[5, 10])
    p.add_argument("--capacities", type=_int_list, default=[1, 2, 3])
    p.add_argument("--count", type=int, default=25, help="instances per cell")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--solvers", type=lambda s: s.split(","),
                   default=[solvers.EAGER, solvers.LAZY])
    p.add_argument("--timeout", type=float, default=10.0, help="seconds per run")
    p.add_argument("--sorted", action="store_true",
                   help="emit the sorted-runtime table instead of per-run rows")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("export-cnf", help="write the encoding in DIMACS")
    _add_instance_flags(p)
    p.add_argument("--xi", default="auto", help="cost bound, or 'auto' for the lower bound")
    p.add_argument("--mode", choices=["complete", "basic"], default="complete")
    p.add_argument("--no-follow", action="store_true")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.set_defaults(func=cmd_export_cnf)

    p = sub.add_parser("validate", help="check a plan file against the movement rules")
    _add_instance_flags(p)
    p.add_argument("--plan", required=True, help="plan file in solve output format")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sat", help="run the embedded SAT core on a DIMACS file")
    p.add_argument("cnf", help="DIMACS CNF file")
    p.add_argument("--timeout", type=float, default=None)
    p.set_defaults(func=cmd_sat)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError, UnsolvableInstanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
