"""Single-connectivity with q tolerated unsafe failures: 7-approximation.

The relaxation asks every cut for weight q+1, counting a safe edge as q+1
and an unsafe edge as 1; knapsack-cover rows with the heavy unsafe edges
(fractional value at least 2/7) assumed bought close the worst integrality
gaps.  Rounding buys the heavy unsafe edges outright, covers the cuts that
still lack a safe edge with a primal-dual link cover, and finishes the
light unsafe edges by iterative rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cover import CoverResult, check_cover_witness, small_cut_family, wgmv_cover
from .cuts import Cut, enumerate_cuts_at_most, min_cut
from .errors import Infeasible, InvariantViolated
from .instances import (BaseEdge, EdgeSet, FgcInstance, Link,
                        LinkCoverInstance, feasible_fgc)
from .jain import CandidateEdge, FConnInstance, JainResult, check_witness, iterative_round
from .lp import (CapView, CuttingPlaneResult, FractionalSolution, LpRow,
                 SeparationResult, base_row, cutting_plane, kci_row)
from .instances import _cut_masks
from .rational import ONE, Rat, ZERO, rat

HEAVY_UNSAFE = rat(2) / 7


def flex_view(inst: FgcInstance) -> CapView:
    """Capacity lens: a safe edge is worth q+1 unsafe ones."""
    need = inst.q + 1
    return CapView(
        n=inst.n,
        pairs=tuple((e.u, e.v) for e in inst.edges),
        caps=tuple(rat(need) if e.safe else ONE for e in inst.edges),
        demand=rat(need),
        label=f"flex{inst.q}",
    )


def heavy_unsafe(inst: FgcInstance, values) -> EdgeSet:
    return frozenset(e for e in inst.unsafe_ids() if values[e] >= HEAVY_UNSAFE)


def degree_rows(view: CapView) -> list[LpRow]:
    """Base rows for all single-vertex cuts; seeds the cutting plane."""
    rows = []
    nodes = list(range(1, view.n))
    for side in [frozenset({v}) for v in nodes] + [frozenset(nodes)]:
        weight = sum((view.caps[e] for e, (u, v) in enumerate(view.pairs)
                      if (u in side) != (v in side)), ZERO)
        rows.append(base_row(view, Cut(side=side, weight=weight)))
    return rows


def separate_flex(inst: FgcInstance, sol: FractionalSolution,
                  strengthen: bool = True) -> SeparationResult:
    """Most-violated-first: capacity shortfall, then knapsack-cover rows."""
    view = flex_view(inst)
    graph = view.graph(sol.values)
    need = rat(inst.q + 1)
    value, cut = min_cut(graph)
    if value < need:
        return SeparationResult.cut_off(base_row(view, cut, tag="mincut"))
    if strengthen:
        assumed = heavy_unsafe(inst, sol.values)
        for cut in enumerate_cuts_at_most(graph, 2 * need):
            row = kci_row(view, cut, assumed)
            if not row.satisfied_by(sol.values):
                return SeparationResult.cut_off(row.to_lp_row(view.label))
    return SeparationResult.ok()


def _relax(inst: FgcInstance, strengthen: bool) -> CuttingPlaneResult:
    view = flex_view(inst)
    return cutting_plane(
        num_vars=inst.m,
        objective=[e.cost for e in inst.edges],
        initial_rows=degree_rows(view),
        separate=lambda sol: separate_flex(inst, sol, strengthen),
    )


def base_lp_value(inst: FgcInstance) -> Rat:
    """Optimum of the relaxation without knapsack-cover strengthening."""
    return _relax(inst, strengthen=False).solution.objective


@dataclass
class Fgc1qRounding:
    heavy: EdgeSet
    light: EdgeSet
    safe_chosen: EdgeSet
    cover: CoverResult
    jain: JainResult
    chosen: EdgeSet
    cost: Rat


@dataclass
class Fgc1qReport:
    x_star: FractionalSolution
    lp_value: Rat
    iterations: int
    rows: tuple[LpRow, ...]
    rounding: Fgc1qRounding
    chosen: EdgeSet
    cost: Rat


def round_1q(inst: FgcInstance, x_star: FractionalSolution) -> Fgc1qRounding:
    """Turn an optimal strengthened-relaxation point into edges, within 7x."""
    need = inst.q + 1
    values = x_star.values
    unsafe = sorted(inst.unsafe_ids())
    safe = sorted(inst.safe_ids())
    heavy = heavy_unsafe(inst, values)
    light = [e for e in unsafe if e not in heavy]

    base = tuple(
        BaseEdge(inst.edges[e].u, inst.edges[e].v,
                 ONE if e in heavy else rat(7) / 2 * values[e])
        for e in unsafe
    )
    links = tuple(Link(inst.edges[e].u, inst.edges[e].v, inst.edges[e].cost)
                  for e in safe)
    cover_inst = LinkCoverInstance(n=inst.n, base_edges=base, links=links,
                                   threshold=rat(need), r=1)
    family = small_cut_family(cover_inst)
    scaled_safe = FractionalSolution(
        values=tuple(min(ONE, rat(7) / 5 * values[e]) for e in safe),
        objective=None)
    check_cover_witness(cover_inst, family, scaled_safe, "safe 7/5 scaling")
    cover_res = wgmv_cover(cover_inst, family)
    safe_chosen = frozenset(safe[j] for j in cover_res.links)

    head_start = {}
    safe_pairs = [(inst.edges[e].u, inst.edges[e].v) for e in safe_chosen]
    heavy_pairs = [(inst.edges[e].u, inst.edges[e].v) for e in heavy]
    for mask in _cut_masks(inst.n):
        got = ZERO
        for u, v in safe_pairs:
            if ((mask >> u) ^ (mask >> v)) & 1:
                got += need
        for u, v in heavy_pairs:
            if ((mask >> u) ^ (mask >> v)) & 1:
                got += 1
        if got:
            head_start[mask] = got
    residual_inst = FConnInstance(
        n=inst.n,
        candidates=tuple(CandidateEdge(inst.edges[e].u, inst.edges[e].v,
                                       inst.edges[e].cost, 1) for e in light),
        demand=need,
        head_start=head_start,
    )
    light_witness = [rat(7) / 2 * values[e] for e in light]
    check_witness(residual_inst, light_witness, "light 7/2 scaling")
    jain_res = iterative_round(residual_inst)
    jain_edges = frozenset(light[j] for j in jain_res.chosen)

    chosen = safe_chosen | heavy | jain_edges
    cost = inst.cost_of(chosen)

    def bucket(ids) -> Rat:
        return sum((inst.edges[e].cost * values[e] for e in ids), ZERO)

    checks = [
        (inst.cost_of(heavy), rat(7) / 2 * bucket(heavy), "heavy unsafe"),
        (cover_res.cost, 7 * bucket(safe), "safe cover"),
        (jain_res.cost, 7 * bucket(light), "light rounding"),
    ]
    for got, allowed, what in checks:
        if got > allowed:
            raise InvariantViolated(
                f"{what} bucket cost {got} exceeds its budget {allowed}")
    return Fgc1qRounding(heavy=heavy, light=frozenset(light),
                         safe_chosen=safe_chosen, cover=cover_res,
                         jain=jain_res, chosen=chosen, cost=cost)


def solve_1q(inst: FgcInstance) -> Fgc1qReport:
    """Full pipeline: strengthened relaxation, then rounding, within 7x."""
    if inst.p != 1:
        raise ValueError("this solver handles a single base requirement")
    if not feasible_fgc(inst, inst.all_edges()):
        raise Infeasible("even the full edge set fails some cut")
    relax = _relax(inst, strengthen=True)
    x_star = relax.solution
    rounding = round_1q(inst, x_star)
    if not feasible_fgc(inst, rounding.chosen):
        raise InvariantViolated("rounded edge set fails a cut")
    if rounding.cost > 7 * x_star.objective:
        raise InvariantViolated(
            f"total cost {rounding.cost} exceeds 7 * lp {x_star.objective}")
    return Fgc1qReport(x_star=x_star, lp_value=x_star.objective,
                       iterations=relax.iterations, rows=tuple(relax.rows),
                       rounding=rounding, chosen=rounding.chosen,
                       cost=rounding.cost)
