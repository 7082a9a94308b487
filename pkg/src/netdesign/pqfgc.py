"""General flexible connectivity beyond the two specialized solvers.

Two tools live here.  First, a predicate deciding when the (p,q)
requirement collapses into a single capacitated demand: give unsafe
edges capacity p, safe edges capacity p+q, and ask every cut for
p(p+q); the collapse is faithful exactly when p=1 or q=1.  Second, a
level-raising algorithm for every other (p,q): start from a (1,q)
solution, then repeatedly view the current pick as a capacitated graph,
list the cuts still short of the next level, write one covering row per
short cut, and buy an augmentation from a covering-program solver.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Optional

from ._subset_search import min_cost_subset
from .config import exhaustive_limit
from .cuts import WeightedGraph, enumerate_cuts_below
from .errors import (Infeasible, InstanceTooLarge, InvariantViolated,
                     TooManyEdges)
from .fgc1q import solve_1q
from .instances import EdgeSet, FgcInstance, _cut_masks, feasible_fgc, fgc_cut_ok
from .lp import LpRow, make_row
from .oracle import MAX_EXACT_EDGES
from .rational import ONE, Rat, ZERO, rat


class CapFormulation(NamedTuple):
    unsafe_cap: int
    safe_cap: int
    demand: int


def capkecss_formulation(p: int, q: int) -> Optional[CapFormulation]:
    """Single-demand formulation of the (p,q) requirement, when one exists."""
    if p < 1 or q < 1:
        raise ValueError("require p, q >= 1")
    if p != 1 and q != 1:
        return None
    form = CapFormulation(unsafe_cap=p, safe_cap=p + q, demand=p * (p + q))
    if not (p * form.safe_cap == (p + q) * form.unsafe_cap == form.demand):
        raise InvariantViolated("capacity profile does not balance")
    return form


def check_formulation_inequalities(p: int, q: int) -> bool:
    """Counting test behind the formulation: a cut with p-i safe and
    q+i-1 unsafe edges must fall short of the single demand at every
    intermediate level i (vacuous for p=1)."""
    if p < 1 or q < 1:
        raise ValueError("require p, q >= 1")
    return all(p * q < i * q + p for i in range(1, p))


@dataclass(frozen=True)
class CipProblem:
    """Covering program with row coefficients normalized into [0, 1]."""

    num_vars: int
    costs: tuple[Rat, ...]
    rows: tuple[LpRow, ...]

    def __post_init__(self):
        object.__setattr__(self, "costs", tuple(rat(c) for c in self.costs))
        for c in self.costs:
            if c < 0:
                raise ValueError("costs must be nonnegative")
        for row in self.rows:
            if row.rhs <= 0:
                raise ValueError("rows must demand something positive")
            for j, coeff in row.coeffs:
                if not (0 <= j < self.num_vars):
                    raise ValueError(f"row names unknown variable {j}")
                if not (ZERO < coeff <= ONE):
                    raise ValueError(f"coefficient {coeff} outside (0, 1]")

    def satisfied(self, chosen: EdgeSet) -> bool:
        return all(
            sum((c for j, c in row.coeffs if j in chosen), ZERO) >= row.rhs
            for row in self.rows
        )


CipSolver = Callable[[CipProblem], EdgeSet]


def cip_solve_exact(cip: CipProblem) -> EdgeSet:
    """Minimum-cost selection satisfying every row, by exhaustive search."""
    if cip.num_vars > MAX_EXACT_EDGES:
        raise TooManyEdges(
            f"exact covering search handles at most {MAX_EXACT_EDGES} "
            f"variables, got {cip.num_vars}")
    found = min_cost_subset(
        cip.num_vars, cip.costs,
        lambda mask: cip.satisfied(
            frozenset(j for j in range(cip.num_vars) if (mask >> j) & 1)))
    if found is None:
        raise Infeasible("no selection satisfies every covering row")
    return found[1]

def cip_solve_greedy(cip: CipProblem) -> EdgeSet:
    """Pick the best coverage-per-cost variable until every row holds.

    Free variables with positive coverage go first; ties break toward
    the lowest index, so runs are deterministic.
    """
    residual = [rat(row.rhs) for row in cip.rows]
    touching: list[list[tuple[int, Rat]]] = [[] for _ in range(cip.num_vars)]
    for i, row in enumerate(cip.rows):
        for j, coeff in row.coeffs:
            touching[j].append((i, coeff))
    chosen: set[int] = set()
    while any(r > 0 for r in residual):
        best_j = None
        best_free = False
        best_score = ZERO
        best_gain = ZERO
        for j in range(cip.num_vars):
            if j in chosen:
                continue
            gain = sum((min(coeff, residual[i]) for i, coeff in touching[j]
                        if residual[i] > 0), ZERO)
            if gain <= 0:
                continue
            free = cip.costs[j] == 0
            score = gain / cip.costs[j] if not free else ZERO
            if best_j is None:
                better = True
            elif free != best_free:
                better = free
            elif free:
                better = gain > best_gain
            else:
                better = score > best_score
            if better:
                best_j, best_free = j, free
                best_score, best_gain = score, gain
        if best_j is None:
            raise Infeasible("no remaining variable covers an open row")
        chosen.add(best_j)
        for i, coeff in touching[best_j]:
            residual[i] = max(ZERO, residual[i] - coeff)
    return frozenset(chosen)


def _capacity_profile(level: int, q: int) -> tuple[int, int, int]:
    """Safe capacity, unsafe capacity, and per-cut requirement at a level."""
    return level + q, level, level * (level + q)


def _chosen_counts(inst: FgcInstance, chosen, mask: int) -> tuple[int, int]:
    safe = unsafe = 0
    for e in chosen:
        edge = inst.edges[e]
        if ((mask >> edge.u) ^ (mask >> edge.v)) & 1:
            if edge.safe:
                safe += 1
            else:
                unsafe += 1
    return safe, unsafe


def _augmentation_rows(inst: FgcInstance, chosen, level: int,
                       candidates: list[int]) -> tuple[list[LpRow], list[int]]:
    """Covering rows for every cut short of the next level.

    A short cut either holds exactly level+q edges (any one more edge
    fixes it) or exactly level safe edges with at most q-1 unsafe ones
    (one safe edge fixes it, or enough unsafe ones to survive the
    failures).  Anything else in the capacity window signals a bug.
    """
    q = inst.q
    safe_cap, unsafe_cap, need = _capacity_profile(level, q)
    upper = 2 * (level + 1) * safe_cap
    pos = {e: j for j, e in enumerate(candidates)}
    graph = WeightedGraph(inst.n, tuple(
        (inst.edges[e].u, inst.edges[e].v,
         rat(safe_cap if inst.edges[e].safe else unsafe_cap))
        for e in sorted(chosen)))

    for mask in _cut_masks(inst.n):
        cap = ZERO
        for e in chosen:
            edge = inst.edges[e]
            if ((mask >> edge.u) ^ (mask >> edge.v)) & 1:
                cap += rat(safe_cap if edge.safe else unsafe_cap)
        if cap < upper:
            continue
        s_cnt, u_cnt = _chosen_counts(inst, chosen, mask)
        safe_part = rat(s_cnt * safe_cap)
        if 2 * safe_part >= cap:
            if s_cnt < level + 1:
                raise InvariantViolated(
                    f"cut mask {mask:#x}: safe half holds only {s_cnt}")
        elif u_cnt < level + q + 1:
            raise InvariantViolated(
                f"cut mask {mask:#x}: unsafe half holds only {u_cnt}")
        if not fgc_cut_ok(level + 1, q, s_cnt, u_cnt):
            raise InvariantViolated(
                f"cut mask {mask:#x} is wide yet short of the next level")

    rows: list[LpRow] = []
    listed: list[int] = []
    for cut in enumerate_cuts_below(graph, rat(upper)):
        if cut.weight < need:
            raise InvariantViolated(
                f"cut {cut.sorted_side()} is below the current level")
        s_cnt, u_cnt = _chosen_counts(inst, chosen, cut.mask)
        if fgc_cut_ok(level + 1, q, s_cnt, u_cnt):
            continue
        crossing = [e for e in candidates
                    if cut.crosses(inst.edges[e].u, inst.edges[e].v)]
        if s_cnt + u_cnt == level + q:
            coeffs = [(pos[e], ONE) for e in crossing]
        elif s_cnt == level and u_cnt <= q - 1:
            slack = rat(q + 1 - u_cnt)
            coeffs = [(pos[e], ONE if inst.edges[e].safe else ONE / slack)
                      for e in crossing]
        else:
            raise InvariantViolated(
                f"short cut {cut.sorted_side()} with {s_cnt} safe and "
                f"{u_cnt} unsafe edges matches no augmentation pattern")
        rows.append(make_row(coeffs, ONE, key=("cip", cut.mask), tag="cip"))
        listed.append(cut.mask)
    return rows, listed


def pq_fgc_augment(inst: FgcInstance,
                   cip_solver: CipSolver = cip_solve_exact) -> EdgeSet:
    """Raise connectivity one level per round, covering short cuts.

    Starts from the specialized single-level solution and augments
    through the covering solver until the full (p,q) requirement holds.
    """
    if inst.n > exhaustive_limit():
        raise InstanceTooLarge(
            f"augmentation enumerates cuts; n={inst.n} exceeds limit")
    if not feasible_fgc(inst, inst.all_edges()):
        raise Infeasible("the full edge set misses the requirement")
    chosen = set(solve_1q(replace(inst, p=1)).chosen)
    for level in range(1, inst.p):
        candidates = sorted(inst.all_edges() - chosen)
        rows, listed = _augmentation_rows(inst, chosen, level, candidates)
        if rows:
            cip = CipProblem(
                num_vars=len(candidates),
                costs=tuple(rat(inst.edges[e].cost) for e in candidates),
                rows=tuple(rows))
            extra = cip_solver(cip)
            if not cip.satisfied(frozenset(extra)):
                raise InvariantViolated(
                    "covering solver returned an unsatisfying selection")
            chosen.update(candidates[j] for j in extra)
        for mask in listed:
            s_cnt, u_cnt = _chosen_counts(inst, chosen, mask)
            if not fgc_cut_ok(level + 1, inst.q, s_cnt, u_cnt):
                raise InvariantViolated(
                    f"cut mask {mask:#x} still short after augmentation")
        if not feasible_fgc(replace(inst, p=level + 1), frozenset(chosen)):
            raise InvariantViolated(
                f"selection misses the level {level + 1} requirement")
    return frozenset(chosen)
