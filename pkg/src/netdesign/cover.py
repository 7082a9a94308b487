"""Covering the small cuts of a capacitated base graph with extra links.

The base graph induces a family of deficient cuts (capacity below a
threshold).  A selection of links covers the family when every member cut
is crossed by at least ``r`` chosen links.  This module provides the
deficient-cut family, the covering LP value, a primal-dual 5-approximation
for r=1, and an exact solver for r=2 used as a plug-in oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._subset_search import min_cost_subset
from .cuts import Cut, WeightedGraph, enumerate_cuts_below
from .errors import (Infeasible, InvariantViolated, TooManyLinks,
                     TwoCoverInfeasible)
from .instances import EdgeSet, LinkCoverInstance
from .lp import (FractionalSolution, LpProblem, dominant_rows, make_row,
                 solve_vertex)
from .oracle import MAX_EXACT_EDGES
from .rational import Rat, ZERO, rat


@dataclass(frozen=True)
class CoverFamily:
    """All nontrivial cuts of the base graph with capacity below threshold."""
    cuts: tuple[Cut, ...]
    threshold: Rat
    r: int


@dataclass(frozen=True)
class CoverResult:
    links: EdgeSet
    cost: Rat
    lp_value: Rat
    family_size: int


def base_graph(inst: LinkCoverInstance) -> WeightedGraph:
    return WeightedGraph(inst.n, tuple((e.u, e.v, rat(e.cap))
                                       for e in inst.base_edges))


def small_cut_family(inst: LinkCoverInstance) -> CoverFamily:
    cuts = enumerate_cuts_below(base_graph(inst), rat(inst.threshold))
    return CoverFamily(tuple(cuts), rat(inst.threshold), inst.r)


def _crossers(inst: LinkCoverInstance, cut: Cut) -> tuple[int, ...]:
    return tuple(j for j, link in enumerate(inst.links)
                 if cut.crosses(link.u, link.v))


def cover_lp(inst: LinkCoverInstance,
             family: CoverFamily | None = None) -> LpProblem:
    """Fractional relaxation: every family cut collects at least r links."""
    if family is None:
        family = small_cut_family(inst)
    need = rat(inst.r)
    rows = []
    for cut in family.cuts:
        ids = _crossers(inst, cut)
        rows.append(make_row([(j, 1) for j in ids], need,
                             key=("cover", cut.mask), tag="cover"))
    rows = dominant_rows(rows)
    objective = [rat(link.cost) for link in inst.links]
    return LpProblem(inst.num_links, tuple(objective), tuple(rows))


def cover_lp_value(inst: LinkCoverInstance,
                   family: CoverFamily | None = None) -> Rat:
    """Optimal value of the covering relaxation (raises LpInfeasible)."""
    return solve_vertex(cover_lp(inst, family)).objective


def check_cover_witness(inst: LinkCoverInstance, family: CoverFamily,
                        witness: FractionalSolution, context: str) -> None:
    """Assert a fractional point satisfies every covering constraint."""
    need = rat(inst.r)
    for cut in family.cuts:
        got = sum((witness[j] for j in _crossers(inst, cut)), ZERO)
        if got < need:
            raise InvariantViolated(
                f"{context}: witness covers cut {cut.sorted_side()} "
                f"by {got}, needs {need}")


def covers(inst: LinkCoverInstance, family: CoverFamily,
           chosen: EdgeSet) -> bool:
    return all(sum(1 for j in _crossers(inst, cut) if j in chosen) >= inst.r
               for cut in family.cuts)


def wgmv_cover(inst: LinkCoverInstance,
               family: CoverFamily | None = None) -> CoverResult:
    """Primal-dual cover for r=1 with cost at most 5 times the LP value.

    Grows uniform duals on the inclusion-minimal deficient node sets, adds
    the lowest-index tight link each round, then reverse-deletes.
    """
    if inst.r != 1:
        raise ValueError("primal-dual cover handles r=1 only")
    if family is None:
        family = small_cut_family(inst)
    if not family.cuts:
        return CoverResult(frozenset(), ZERO, ZERO, 0)

    all_nodes = frozenset(range(inst.n))
    sides: list[tuple[frozenset[int], int]] = []
    for ci, cut in enumerate(family.cuts):
        sides.append((cut.side, ci))
        sides.append((all_nodes - cut.side, ci))
    crossers = [frozenset(_crossers(inst, cut)) for cut in family.cuts]
    for ci, ids in enumerate(crossers):
        if not ids:
            raise Infeasible(
                f"deficient cut {family.cuts[ci].sorted_side()} has no link")

    lp_value = cover_lp_value(inst, family)
    nlinks = inst.num_links
    load = [ZERO] * nlinks
    chosen: list[int] = []
    chosen_set: set[int] = set()
    covered = [False] * len(family.cuts)

    def endpoint_hits(node_set: frozenset[int], j: int) -> int:
        link = inst.links[j]
        return (link.u in node_set) + (link.v in node_set)

    while not all(covered):
        active_sets = [s for s, ci in sides if not covered[ci]]
        minimal = [s for s in active_sets
                   if not any(t < s for t in active_sets)]
        growth = [0] * nlinks
        for j in range(nlinks):
            if j in chosen_set:
                continue
            growth[j] = sum(1 for s in minimal if endpoint_hits(s, j) == 1)
        slack = None
        for j in range(nlinks):
            if growth[j] == 0:
                continue
            gap = (rat(inst.links[j].cost) - load[j]) / growth[j]
            if slack is None or gap < slack:
                slack = gap
        if slack is None:
            raise InvariantViolated("uncovered deficient set touched by no link")
        tight = None
        for j in range(nlinks):
            if growth[j] == 0:
                continue
            load[j] += slack * growth[j]
            if tight is None and load[j] == rat(inst.links[j].cost):
                tight = j
        if tight is None:
            raise InvariantViolated("dual growth produced no tight link")
        chosen.append(tight)
        chosen_set.add(tight)
        for ci in range(len(family.cuts)):
            if tight in crossers[ci]:
                covered[ci] = True

    for j in reversed(chosen):
        trimmed = chosen_set - {j}
        if all(trimmed & ids for ids in crossers):
            chosen_set = trimmed
    for j in chosen_set:
        if all((chosen_set - {j}) & ids for ids in crossers):
            raise InvariantViolated("cover kept a removable link")

    cost = sum((rat(inst.links[j].cost) for j in chosen_set), ZERO)
    if not (lp_value <= cost <= 5 * lp_value):
        raise InvariantViolated(
            f"primal-dual cover cost {cost} outside [lp, 5*lp] "
            f"for lp value {lp_value}")
    return CoverResult(frozenset(chosen_set), cost, lp_value,
                       len(family.cuts))


def exact_two_cover(inst: LinkCoverInstance,
                    family: CoverFamily | None = None) -> CoverResult:
    """Exact minimum-cost selection crossing every family cut twice."""
    if inst.r != 2:
        raise ValueError("exact_two_cover handles r=2 only")
    if inst.num_links > MAX_EXACT_EDGES:
        raise TooManyLinks(f"exact cover over {inst.num_links} links refused; "
                           f"limit is {MAX_EXACT_EDGES}")
    if family is None:
        family = small_cut_family(inst)
    if not family.cuts:
        return CoverResult(frozenset(), ZERO, ZERO, 0)
    masks = []
    for cut in family.cuts:
        m = 0
        for j in _crossers(inst, cut):
            m |= 1 << j
        masks.append(m)

    def feasible(sel: int) -> bool:
        return all((sel & m).bit_count() >= 2 for m in masks)

    found = min_cost_subset(inst.num_links,
                            [rat(l.cost) for l in inst.links], feasible)
    if found is None:
        raise TwoCoverInfeasible(
            "some deficient cut is crossed by fewer than two links")
    cost, links, _ = found
    lp_value = cover_lp_value(inst, family)
    return CoverResult(links, cost, lp_value, len(family.cuts))
