"""Exact reference optimizers used to validate the approximation solvers.

Each optimizer enumerates subsets with branch-and-bound over the relevant
monotone feasibility predicate and returns a provably optimal solution.
They are deliberately limited to desk-scale inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._subset_search import min_cost_subset
from .config import exhaustive_limit
from .errors import Infeasible, InstanceTooLarge, TooManyEdges, TooManyLinks
from .instances import (CapEcssInstance, FgcInstance, LinkCoverInstance,
                        fgc_cut_ok)
from .rational import Rat, rat

MAX_EXACT_EDGES = 22


@dataclass(frozen=True)
class OracleResult:
    """Optimal cost, the lexicographically least optimal subset, search size."""
    cost: Rat
    chosen: frozenset[int]
    nodes: int


def _check_size(n: int, m: int, link_error: bool = False) -> None:
    if n > exhaustive_limit():
        raise InstanceTooLarge(
            f"exact search enumerates all cuts; n={n} exceeds limit")
    if m > MAX_EXACT_EDGES:
        if link_error:
            raise TooManyLinks(f"exact search over {m} links refused; "
                               f"limit is {MAX_EXACT_EDGES}")
        raise TooManyEdges(f"exact search over {m} edges refused; "
                           f"limit is {MAX_EXACT_EDGES}")


def _cut_masks(n: int):
    return [s << 1 for s in range(1, 1 << (n - 1))]


def _crossing_mask(cut_mask: int, pairs) -> int:
    out = 0
    for i, (u, v) in enumerate(pairs):
        if ((cut_mask >> u) ^ (cut_mask >> v)) & 1:
            out |= 1 << i
    return out


def opt_fgc(inst: FgcInstance) -> OracleResult:
    """Exact optimum for flexible connectivity by subset search."""
    _check_size(inst.n, inst.m)
    pairs = [(e.u, e.v) for e in inst.edges]
    safe_sel = 0
    for i, e in enumerate(inst.edges):
        if e.safe:
            safe_sel |= 1 << i
    cuts = []
    for cm in _cut_masks(inst.n):
        cross = _crossing_mask(cm, pairs)
        cuts.append((cross & safe_sel, cross & ~safe_sel))
    p, q = inst.p, inst.q

    def feasible(sel: int) -> bool:
        return all(
            fgc_cut_ok(p, q, (sel & sm).bit_count(), (sel & um).bit_count())
            for sm, um in cuts)

    found = min_cost_subset(inst.m, [rat(e.cost) for e in inst.edges], feasible)
    if found is None:
        raise Infeasible("no edge subset meets the connectivity requirement")
    cost, chosen, nodes = found
    return OracleResult(cost, chosen, nodes)


def opt_capk(inst: CapEcssInstance) -> OracleResult:
    """Exact optimum for capacitated k-edge-connectivity by subset search."""
    _check_size(inst.n, inst.m)
    pairs = [(e.u, e.v) for e in inst.edges]
    caps = [e.cap for e in inst.edges]
    cuts = []
    for cm in _cut_masks(inst.n):
        cross = _crossing_mask(cm, pairs)
        ids = [i for i in range(inst.m) if (cross >> i) & 1]
        cuts.append((cross, ids))
    k = inst.k

    def feasible(sel: int) -> bool:
        for cross, ids in cuts:
            hit = sel & cross
            if sum(caps[i] for i in ids if (hit >> i) & 1) < k:
                return False
        return True

    found = min_cost_subset(inst.m, [rat(e.cost) for e in inst.edges], feasible)
    if found is None:
        raise Infeasible("no edge subset reaches the required cut capacity")
    cost, chosen, nodes = found
    return OracleResult(cost, chosen, nodes)


def opt_cover(inst: LinkCoverInstance) -> OracleResult:
    """Exact optimum link selection covering every deficient base cut."""
    _check_size(inst.n, inst.num_links, link_error=True)
    base_pairs = [(e.u, e.v) for e in inst.base_edges]
    base_caps = [e.cap for e in inst.base_edges]
    link_pairs = [(l.u, l.v) for l in inst.links]
    need = inst.r
    deficient = []
    for cm in _cut_masks(inst.n):
        weight = sum(base_caps[i] for i in range(len(base_pairs))
                     if ((cm >> base_pairs[i][0]) ^ (cm >> base_pairs[i][1])) & 1)
        if weight < inst.threshold:
            deficient.append(_crossing_mask(cm, link_pairs))

    def feasible(sel: int) -> bool:
        return all((sel & lm).bit_count() >= need for lm in deficient)

    found = min_cost_subset(inst.num_links,
                            [rat(l.cost) for l in inst.links], feasible)
    if found is None:
        raise Infeasible("some deficient cut cannot collect enough links")
    cost, chosen, nodes = found
    return OracleResult(cost, chosen, nodes)
