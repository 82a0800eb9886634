"""The two optimal solving loops: eager (whole model per cost bound) and lazy
(candidate extraction with conflict refinement)."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations

from . import encoder, satcore
from .instance import Instance
from .pathcalc import UnsolvableInstanceError, cost_lower_bound
from .plans import CAPACITY, SWAP, Conflict, Plan

SOLVED = "solved"
EXHAUSTED = "exhausted"
UNSOLVABLE = "unsolvable"

EAGER = "eager"
LAZY = "lazy"


@dataclass(frozen=True)
class Limits:
    time_limit_s: float = 500.0        # wall clock for the whole solve call
    xi_ceiling: int | None = None      # default: xi_0 + |V| * k
    conflict_limit: int | None = None  # per SAT call


@dataclass
class IterationStat:
    xi: int
    outcome: str          # sat / unsat / unknown
    refinements: int
    variables: int
    clauses: int
    time_s: float


@dataclass
class SolveReport:
    status: str
    plan: Plan | None = None
    optimal_cost: int | None = None
    iterations: list[IterationStat] = field(default_factory=list)

    @property
    def total_refinements(self) -> int:
        return sum(s.refinements for s in self.iterations)


def _ceiling(instance: Instance, limits: Limits, xi0: int) -> int:
    if limits.xi_ceiling is not None:
        return limits.xi_ceiling
    return xi0 + instance.graph.vertex_count * instance.k


def validate_candidate(instance: Instance, plan: Plan) -> list[Conflict]:
    """All capacity and swap conflicts in a candidate plan."""
    conflicts: list[Conflict] = []
    paths = plan.paths
    caps = instance.capacities
    horizon = plan.makespan
    for t in range(horizon + 1):
        occupancy: dict[int, list[int]] = {}
        for i, path in enumerate(paths):
            occupancy.setdefault(path[t], []).append(i)
        for v, occupants in sorted(occupancy.items()):
            if len(occupants) > caps[v]:
                conflicts.append(Conflict(CAPACITY, tuple(occupants), v, t))
    for t in range(horizon):
        moves: dict[tuple[int, int], list[int]] = {}
        for i, path in enumerate(paths):
            u, v = path[t], path[t + 1]
            if u != v:
                moves.setdefault((u, v), []).append(i)
        for (u, v), movers in moves.items():
            if u < v and (v, u) in moves:
                for i in movers:
                    for j in moves[(v, u)]:
                        conflicts.append(Conflict(SWAP, (i, j), (u, v), t))
    return conflicts


def solve_eager(
    instance: Instance, limits: Limits | None = None, no_follow: bool = False
) -> SolveReport:
    """Iterate cost bounds from the lower bound up, consulting the SAT core
    on the complete model; the first satisfiable bound is the optimum."""
    limits = limits or Limits()
    deadline = time.monotonic() + limits.time_limit_s
    try:
        xi0 = cost_lower_bound(instance)
    except UnsolvableInstanceError:
        return SolveReport(UNSOLVABLE)
    report = SolveReport(EXHAUSTED)
    for xi in range(xi0, _ceiling(instance, limits, xi0) + 1):
        started = time.monotonic()
        if started >= deadline:
            return report
        artifacts = encoder.encode_complete(instance, xi, no_follow=no_follow)
        solver = satcore.CdclSolver()
        for clause in artifacts.formula.clauses:
            solver.add_clause(clause)
        result = solver.solve(
            conflict_limit=limits.conflict_limit,
            time_limit=deadline - time.monotonic(),
        )
        stat = IterationStat(
            xi, result.outcome, 0,
            artifacts.formula.variable_count, len(artifacts.formula.clauses),
            time.monotonic() - started,
        )
        report.iterations.append(stat)
        if result.outcome == satcore.SAT:
            plan = encoder.extract_plan(artifacts, result.model)
            report.status = SOLVED
            report.plan = plan
            report.optimal_cost = plan.sum_of_costs
            return report
        if result.outcome == satcore.UNKNOWN:
            return report
    return report


def _strengthened(instance: Instance, conflict: Conflict) -> list[Conflict]:
    """All (c(v)+1)-subsets of a capacity conflict's agent set."""
    if conflict.kind != CAPACITY:
        return [conflict]
    c = instance.capacities[conflict.vertex]
    return [
        Conflict(CAPACITY, sub, conflict.vertex, conflict.time)
        for sub in combinations(conflict.agents, c + 1)
    ]


def solve_lazy(
    instance: Instance, limits: Limits | None = None, strengthen: bool = False
) -> SolveReport:
    """Lazy refinement: solve the relaxed model, validate the candidate, post
    elimination clauses for every detected conflict, repeat.  The conflict
    set persists across cost-bound iterations."""
    limits = limits or Limits()
    deadline = time.monotonic() + limits.time_limit_s
    try:
        xi0 = cost_lower_bound(instance)
    except UnsolvableInstanceError:
        return SolveReport(UNSOLVABLE)
    report = SolveReport(EXHAUSTED)
    conflicts: list[Conflict] = []
    recorded: set[Conflict] = set()
    for xi in range(xi0, _ceiling(instance, limits, xi0) + 1):
        started = time.monotonic()
        if started >= deadline:
            return report
        artifacts = encoder.encode_basic(instance, xi, conflicts)
        solver = satcore.CdclSolver()
        clause_count = len(artifacts.formula.clauses)
        for clause in artifacts.formula.clauses:
            solver.add_clause(clause)
        refinements = 0
        outcome = satcore.UNKNOWN
        while True:
            result = solver.solve(
                conflict_limit=limits.conflict_limit,
                time_limit=deadline - time.monotonic(),
            )
            outcome = result.outcome
            if outcome != satcore.SAT:
                break
            candidate = encoder.extract_plan(artifacts, result.model)
            found = validate_candidate(instance, candidate)
            if not found:
                stat = IterationStat(
                    xi, satcore.SAT, refinements,
                    artifacts.formula.variable_count, clause_count,
                    time.monotonic() - started,
                )
                report.iterations.append(stat)
                report.status = SOLVED
                report.plan = candidate
                report.optimal_cost = candidate.sum_of_costs
                return report
            for conflict in found:
                posted = _strengthened(instance, conflict) if strengthen else [conflict]
                for item in posted:
                    if item in recorded:
                        continue
                    recorded.add(item)
                    conflicts.append(item)
                    clause = encoder.conflict_clause(artifacts.formula, item)
                    if clause is not None:
                        solver.add_clause(clause)
                        clause_count += 1
                        refinements += 1
        report.iterations.append(IterationStat(
            xi, outcome, refinements,
            artifacts.formula.variable_count, clause_count,
            time.monotonic() - started,
        ))
        if outcome == satcore.UNKNOWN:
            return report
    return report


def solve(instance: Instance, solver: str = EAGER, limits: Limits | None = None,
          no_follow: bool = False) -> SolveReport:
    if solver == EAGER:
        return solve_eager(instance, limits, no_follow=no_follow)
    if solver == LAZY:
        return solve_lazy(instance, limits)
    raise ValueError(f"unknown solver {solver!r}")


def format_plan(report: SolveReport) -> str:
    """One line per time step `t: v(a_0) ... v(a_k-1)` plus a summary line."""
    plan = report.plan
    lines = []
    for t in range(plan.makespan + 1):
        lines.append(f"{t}: " + " ".join(str(path[t]) for path in plan.paths))
    lines.append(f"cost={report.optimal_cost} makespan={plan.makespan}")
    return "\n".join(lines) + "\n"


def parse_plan(text: str) -> Plan:
    """Inverse of format_plan; the summary line is checked for consistency."""
    rows: list[list[int]] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("cost="):
            continue
        label, _, rest = line.partition(":")
        int(label)  # raises on malformed step label
        rows.append([int(tok) for tok in rest.split()])
    if not rows:
        raise ValueError("empty plan")
    k = len(rows[0])
    if any(len(r) != k for r in rows):
        raise ValueError("ragged plan rows")
    return Plan(tuple(tuple(row[i] for row in rows) for i in range(k)))
