"""Double-connectivity with q tolerated unsafe failures, and the reverse
reduction from link two-covering.

The relaxation stacks four row families: the single-connectivity rows at
requirement q+2, their knapsack-cover strengthening, and, for every safe
edge considered absent, capacity rows at requirement q+1 plus their
knapsack-cover strengthening with the half-heavy unsafe edges assumed
bought.  Rounding runs the single-connectivity pipeline once, then
separately covers the cuts that lack two safe edges and finishes with
iterative rounding over the unsafe edges.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

from .cover import (CoverResult, check_cover_witness, covers, exact_two_cover,
                    small_cut_family)
from .cuts import enumerate_cuts_at_most, min_cut
from .errors import Infeasible, InvariantViolated
from .fgc1q import Fgc1qRounding, degree_rows, flex_view, round_1q, separate_flex
from .instances import (BaseEdge, EdgeSet, FgcEdge, FgcInstance, Link,
                        LinkCoverInstance, _cut_masks, feasible_cover,
                        feasible_fgc)
from .jain import CandidateEdge, FConnInstance, JainResult, check_witness, iterative_round
from .lp import (CapView, FractionalSolution, LpRow, SeparationResult,
                 base_row, cutting_plane, kci_row)
from .rational import ONE, Rat, ZERO, rat

HEAVY_SAFE = ONE / 4
HALF = ONE / 2

TwoCoverSolver = Callable[[LinkCoverInstance], CoverResult]
FgcSolver = Callable[[FgcInstance], EdgeSet]


def _relabeled(inst: FgcInstance) -> FgcInstance:
    """The single-requirement instance whose rows the relaxation inherits."""
    return replace(inst, p=1, q=inst.q + 1)


def drop_view(inst: FgcInstance, dropped: int) -> CapView:
    """Capacity lens with one safe edge erased: safe q+1, unsafe 1, demand q+1."""
    need = inst.q + 1
    caps = []
    for e, edge in enumerate(inst.edges):
        if e == dropped:
            caps.append(ZERO)
        elif edge.safe:
            caps.append(rat(need))
        else:
            caps.append(ONE)
    return CapView(
        n=inst.n,
        pairs=tuple((e.u, e.v) for e in inst.edges),
        caps=tuple(caps),
        demand=rat(need),
        label=f"flexdrop{inst.q}e{dropped}",
    )


def half_unsafe(inst: FgcInstance, values) -> EdgeSet:
    return frozenset(e for e in inst.unsafe_ids() if values[e] >= HALF)


def separate_2q(inst: FgcInstance, sol: FractionalSolution) -> SeparationResult:
    """Single-requirement rows first, then the per-dropped-edge families."""
    res = separate_flex(_relabeled(inst), sol, strengthen=True)
    if not res.feasible:
        return res
    need = rat(inst.q + 1)
    safe = sorted(inst.safe_ids())
    views = {f: drop_view(inst, f) for f in safe}
    for f in safe:
        graph = views[f].graph(sol.values)
        value, cut = min_cut(graph)
        if value < need:
            return SeparationResult.cut_off(
                base_row(views[f], cut, tag="dropmincut"))
    assumed = half_unsafe(inst, sol.values)
    for f in safe:
        view = views[f]
        graph = view.graph(sol.values)
        for cut in enumerate_cuts_at_most(graph, 2 * need):
            row = kci_row(view, cut, assumed)
            if not row.satisfied_by(sol.values):
                return SeparationResult.cut_off(row.to_lp_row(view.label))
    return SeparationResult.ok()


@dataclass
class Fgc2qReport:
    x_star: FractionalSolution
    lp_value: Rat
    iterations: int
    rows: tuple[LpRow, ...]
    part_one: Fgc1qRounding
    heavy_safe: EdgeSet
    half_heavy_unsafe: EdgeSet
    cover: CoverResult
    alpha: Rat
    jain: JainResult
    chosen: EdgeSet
    cost: Rat


def solve_2q(inst: FgcInstance,
             two_cover: TwoCoverSolver = exact_two_cover) -> Fgc2qReport:
    """Full pipeline; cost at most (4*alpha + 11) times the relaxation."""
    if inst.p != 2:
        raise ValueError("this solver handles a doubled base requirement")
    if not feasible_fgc(inst, inst.all_edges()):
        raise Infeasible("even the full edge set fails some cut")
    relax = cutting_plane(
        num_vars=inst.m,
        objective=[e.cost for e in inst.edges],
        initial_rows=degree_rows(flex_view(_relabeled(inst))),
        separate=lambda sol: separate_2q(inst, sol),
    )
    x_star = relax.solution
    values = x_star.values
    need = inst.q + 1

    part_one = round_1q(_relabeled(inst), x_star)
    if not feasible_fgc(_relabeled(inst), part_one.chosen):
        raise InvariantViolated("first-part edges fail a relabeled cut")
    if part_one.cost > 7 * x_star.objective:
        raise InvariantViolated("first-part cost exceeds 7 * lp")

    safe = sorted(inst.safe_ids())
    unsafe = sorted(inst.unsafe_ids())
    heavy_safe = frozenset(e for e in safe if values[e] >= HEAVY_SAFE)
    half_heavy = half_unsafe(inst, values)

    base = tuple(
        BaseEdge(inst.edges[e].u, inst.edges[e].v,
                 ONE if e in half_heavy else 2 * values[e])
        for e in unsafe
    )
    links = tuple(Link(inst.edges[e].u, inst.edges[e].v, inst.edges[e].cost)
                  for e in safe)
    cover_inst = LinkCoverInstance(n=inst.n, base_edges=base, links=links,
                                   threshold=rat(need), r=2)
    family = small_cut_family(cover_inst)
    for cut in family.cuts:
        for f in safe:
            spare = sum((values[e] for e in safe
                         if e != f and cut.crosses(inst.edges[e].u,
                                                   inst.edges[e].v)), ZERO)
            if spare < HALF:
                raise InvariantViolated(
                    f"safe mass without edge {f} is {spare} on cut "
                    f"{cut.sorted_side()}, wanted 1/2")
    witness = FractionalSolution(
        values=tuple(ONE if e in heavy_safe else 4 * values[e] for e in safe),
        objective=None)
    check_cover_witness(cover_inst, family, witness, "safe 4x scaling")
    cover_res = two_cover(cover_inst)
    if not covers(cover_inst, family, cover_res.links):
        raise InvariantViolated("two-cover solver returned a non-cover")
    if cover_res.cost > 0 and cover_res.lp_value <= 0:
        raise InvariantViolated("two-cover paid for an empty relaxation")
    alpha = ONE
    if cover_res.lp_value > 0:
        alpha = max(ONE, cover_res.cost / cover_res.lp_value)
    safe_from_cover = frozenset(safe[j] for j in cover_res.links)

    residual_inst = FConnInstance(
        n=inst.n,
        candidates=tuple(CandidateEdge(inst.edges[e].u, inst.edges[e].v,
                                       inst.edges[e].cost, 1) for e in unsafe),
        demand=need,
        preselected=tuple((inst.edges[e].u, inst.edges[e].v)
                          for e in sorted(safe_from_cover)),
    )
    unsafe_witness = [ONE if e in half_heavy else 2 * values[e] for e in unsafe]
    check_witness(residual_inst, unsafe_witness, "unsafe 2x scaling")
    jain_res = iterative_round(residual_inst)
    jain_edges = frozenset(unsafe[j] for j in jain_res.chosen)

    chosen = (part_one.chosen | heavy_safe | safe_from_cover
              | half_heavy | jain_edges)
    cost = inst.cost_of(chosen)
    if not feasible_fgc(inst, chosen):
        raise InvariantViolated("combined edge set fails a cut")
    budget = (4 * alpha + 11) * x_star.objective
    if cost > budget:
        raise InvariantViolated(f"total cost {cost} exceeds {budget}")
    return Fgc2qReport(x_star=x_star, lp_value=x_star.objective,
                       iterations=relax.iterations, rows=tuple(relax.rows),
                       part_one=part_one,
                       heavy_safe=heavy_safe, half_heavy_unsafe=half_heavy,
                       cover=cover_res, alpha=alpha, jain=jain_res,
                       chosen=chosen, cost=cost)


@dataclass
class TwoCoverReport:
    links: EdgeSet
    cost: Rat
    connectivity_chosen: EdgeSet
    safe_kept: EdgeSet
    jain: JainResult


def _default_fgc_solver(fgc: FgcInstance) -> EdgeSet:
    return solve_2q(fgc).chosen


def two_cover_via_fgc2q(inst: LinkCoverInstance,
                        fgc2q_solver: FgcSolver = _default_fgc_solver,
                        ) -> TwoCoverReport:
    """Two-cover unit-capacity deficient cuts through the connectivity solver.

    Base edges become free unsafe edges, links become safe edges, and the
    failure budget is threshold minus two.  The connectivity solution's
    safe edges two-cover all deeply deficient cuts; a final rounding step
    adds links for the cuts one base edge short of the threshold.
    """
    if inst.r != 2:
        raise ValueError("the reduction targets two-covers")
    lam_rat = rat(inst.threshold)
    if lam_rat.denominator != 1 or lam_rat < 3:
        raise ValueError("threshold must be an integer of at least 3")
    lam = int(lam_rat)
    if any(e.cap != 1 for e in inst.base_edges):
        raise ValueError("the reduction needs unit base capacities")
    if not feasible_cover(inst, frozenset(range(inst.num_links))):
        raise Infeasible("some deficient cut lacks two potential links")

    m = len(inst.base_edges)
    edges = tuple(FgcEdge(e.u, e.v, ZERO, False) for e in inst.base_edges) + \
        tuple(FgcEdge(f.u, f.v, f.cost, True) for f in inst.links)
    fgc = FgcInstance(n=inst.n, edges=edges, p=2, q=lam - 2)
    chosen = frozenset(fgc2q_solver(fgc))
    if not feasible_fgc(fgc, chosen):
        raise InvariantViolated("connectivity plug-in returned an infeasible set")
    safe_kept = frozenset(e for e in chosen if e >= m)

    base_pairs = [(e.u, e.v) for e in inst.base_edges]
    kept_pairs = [(edges[e].u, edges[e].v) for e in sorted(safe_kept)]
    candidates = tuple(
        [CandidateEdge(e.u, e.v, ZERO, 1) for e in inst.base_edges]
        + [CandidateEdge(f.u, f.v, f.cost, 1)
           for j, f in enumerate(inst.links) if (m + j) not in safe_kept]
    )
    candidate_link: dict[int, int] = {}
    pos = m
    for j in range(inst.num_links):
        if (m + j) not in safe_kept:
            candidate_link[pos] = j
            pos += 1
    residual_inst = FConnInstance(n=inst.n, candidates=candidates,
                                  demand=lam, preselected=tuple(kept_pairs))

    def crossing_count(mask: int, pairs) -> int:
        return sum(1 for u, v in pairs if ((mask >> u) ^ (mask >> v)) & 1)

    for mask in _cut_masks(inst.n):
        if residual_inst.requirement(mask) == 0:
            continue
        kept_here = crossing_count(mask, kept_pairs)
        base_here = crossing_count(mask, base_pairs)
        if base_here >= lam:
            continue
        if base_here <= lam - 2:
            raise InvariantViolated(
                f"cut mask {mask:#x} is {lam - base_here} base edges short "
                f"yet keeps under two safe edges")
        if kept_here != 1:
            raise InvariantViolated(
                f"cut mask {mask:#x} sits at threshold minus one with "
                f"{kept_here} kept safe edges")

    jain_res = iterative_round(residual_inst)
    extra = frozenset(candidate_link[j] for j in jain_res.chosen
                      if j in candidate_link)
    result = frozenset(e - m for e in safe_kept) | extra
    if not feasible_cover(inst, result):
        raise InvariantViolated("augmented links fail to two-cover")
    return TwoCoverReport(links=result, cost=inst.cost_of(result),
                          connectivity_chosen=chosen, safe_kept=safe_kept,
                          jain=jain_res)
