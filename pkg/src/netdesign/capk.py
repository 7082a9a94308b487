"""Logarithmic-ratio rounding for capacitated k-connectivity.

The fractional solution is split into a committed half (values at least
one half) and capacity buckets at powers of two.  Rounding walks the
buckets from the widest down: each step covers the cuts that are still
short of the demand with links drawn from outside the current bucket,
using the primal-dual cover subroutine, then the narrowest bucket is
finished by capacitated iterative rounding.  Whenever a cover pass needs
a knapsack-cover inequality the relaxation never saw, the pass stops,
the violated row is reported, and the whole solve restarts on the
strengthened relaxation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .config import exhaustive_limit
from .cover import check_cover_witness, small_cut_family, wgmv_cover
from .cuts import enumerate_cuts_at_most, min_cut
from .errors import (Infeasible, InstanceTooLarge, InvariantViolated,
                     NetDesignError, RestartLimitExceeded)
from .fgc1q import degree_rows
from .instances import (BaseEdge, CapEcssInstance, EdgeSet, Link,
                        LinkCoverInstance, _cut_masks, feasible_capk)
from .jain import (CandidateEdge, FConnInstance, JainResult, check_witness,
                   iterative_round)
from .lp import (CapView, FractionalSolution, LpRow, SeparationResult,
                 base_row, cutting_plane, kci_row, violation)
from .rational import ONE, Rat, ZERO, rat

MAX_DEMAND = 1 << 16


class Restart(NetDesignError):
    """Rounding needs a knapsack-cover row the relaxation never saw."""

    def __init__(self, row: LpRow):
        super().__init__(f"rounding requires row {row.key!r}")
        self.row = row


def capk_view(inst: CapEcssInstance) -> CapView:
    return CapView(n=inst.n,
                   pairs=tuple((e.u, e.v) for e in inst.edges),
                   caps=tuple(rat(e.cap) for e in inst.edges),
                   demand=rat(inst.k),
                   label="capk")


@dataclass(frozen=True)
class Buckets:
    """Half-integral edges plus nested capacity tiers of the rest.

    Tier j holds every edge below one half whose capacity is at most 2^j;
    the deepest tier (j = depth) is exactly the complement of the heavy
    set, because instance capacities never exceed the demand.
    """

    depth: int
    heavy: frozenset[int]
    tiers: tuple[frozenset[int], ...]

    def tier(self, j: int) -> frozenset[int]:
        return self.tiers[j - 1]


def bucket_split(inst: CapEcssInstance, values) -> Buckets:
    half = ONE / 2
    depth = max(0, (inst.k - 1).bit_length())
    heavy = frozenset(e for e in range(inst.m) if values[e] >= half)
    tiers = tuple(
        frozenset(e for e in range(inst.m)
                  if e not in heavy and inst.edges[e].cap <= (1 << j))
        for j in range(1, depth + 1)
    )
    return Buckets(depth=depth, heavy=heavy, tiers=tiers)


def separate_capk(inst: CapEcssInstance, sol: FractionalSolution,
                  fixed: EdgeSet = frozenset()) -> SeparationResult:
    """Base capacity rows first; knapsack-cover rows for a fixed set next.

    Cuts whose fractional capacity already reaches twice the demand
    cannot violate a knapsack-cover row (capacities are capped at the
    demand), so enumeration stops there.
    """
    view = capk_view(inst)
    graph = view.graph(sol.values)
    value, cut = min_cut(graph)
    if value < view.demand:
        return SeparationResult.cut_off(base_row(view, cut))
    if fixed:
        if inst.n > exhaustive_limit():
            raise InstanceTooLarge(
                f"cover-row separation enumerates cuts; n={inst.n}")
        for cut in enumerate_cuts_at_most(graph, 2 * view.demand):
            row = kci_row(view, cut, fixed)
            if not row.satisfied_by(sol.values):
                return SeparationResult.cut_off(row.to_lp_row(view.label))
    return SeparationResult.ok()


class LedgerEntry(NamedTuple):
    stage: str
    cost: Rat
    family_size: int


@dataclass
class RoundingOutcome:
    chosen: EdgeSet
    ledger: tuple[LedgerEntry, ...]
    checks: tuple[str, ...]
    jain: Optional[JainResult]


@dataclass
class CapkSolveReport:
    x_star: FractionalSolution
    lp_value: Rat
    iterations: int
    restarts: int
    rows: tuple[LpRow, ...]
    ledger: tuple[LedgerEntry, ...]
    checks: tuple[str, ...]
    chosen: EdgeSet
    total_cost: Rat


def round_capk(inst: CapEcssInstance,
               x_star: FractionalSolution) -> RoundingOutcome:
    """Walk the capacity buckets and buy an integral cover of every cut.

    Raises Restart when a cover pass meets a cut whose knapsack-cover row
    the fractional solution violates; invariant failures that no restart
    can repair raise InvariantViolated instead.
    """
    if inst.n > exhaustive_limit():
        raise InstanceTooLarge(
            f"rounding re-checks all cuts; n={inst.n} exceeds limit")
    view = capk_view(inst)
    values = x_star.values
    k = inst.k
    m = inst.m
    caps = [rat(e.cap) for e in inst.edges]
    costs = [rat(e.cost) for e in inst.edges]
    buckets = bucket_split(inst, values)
    depth = buckets.depth
    committed: set[int] = set(buckets.heavy)
    every_edge = frozenset(range(m))
    ledger: list[LedgerEntry] = [LedgerEntry(
        "heavy edges", sum((costs[e] for e in buckets.heavy), ZERO), 0)]
    checks: list[str] = []

    def committed_weight(mask: int) -> Rat:
        total = ZERO
        for e in committed:
            u, v = inst.edges[e].u, inst.edges[e].v
            if ((mask >> u) ^ (mask >> v)) & 1:
                total += caps[e]
        return total

    def tier_weight(mask: int, tier: frozenset[int]) -> Rat:
        total = ZERO
        for e in tier:
            u, v = inst.edges[e].u, inst.edges[e].v
            if ((mask >> u) ^ (mask >> v)) & 1:
                total += 2 * caps[e] * values[e]
        return total

    def require_floor(tier: frozenset[int], floor: Rat, what: str) -> None:
        for mask in _cut_masks(inst.n):
            have = committed_weight(mask) + tier_weight(mask, tier)
            if have < floor:
                raise InvariantViolated(
                    f"{what}: cut mask {mask:#x} holds {have}, "
                    f"needs {floor}")
        checks.append(f"{what}: every cut reaches {floor}")

    def pool_cost(pool) -> Rat:
        return sum((costs[e] * values[e] for e in pool), ZERO)

    def cover_pass(stage: str, threshold, tier: frozenset[int],
                   pool: frozenset[int], scale: Rat,
                   verify_rows: bool) -> frozenset[int]:
        """One cover call: links from the pool, base capacities from the
        committed set at full strength and the tier at doubled value."""
        links = sorted(pool - committed)
        base = tuple(
            [BaseEdge(inst.edges[e].u, inst.edges[e].v, caps[e])
             for e in sorted(committed)]
            + [BaseEdge(inst.edges[e].u, inst.edges[e].v,
                        2 * caps[e] * values[e])
               for e in sorted(tier)]
        )
        cinst = LinkCoverInstance(
            n=inst.n, base_edges=base,
            links=tuple(Link(inst.edges[e].u, inst.edges[e].v, costs[e])
                        for e in links),
            threshold=rat(threshold), r=1)
        family = small_cut_family(cinst)
        if verify_rows:
            for cut in family.cuts:
                row = kci_row(view, cut, frozenset(committed))
                if not row.satisfied_by(values):
                    raise Restart(row.to_lp_row(view.label))
        if not family.cuts:
            ledger.append(LedgerEntry(stage, ZERO, 0))
            return frozenset()
        witness = FractionalSolution(
            values=tuple(min(ONE, scale * values[e]) for e in links),
            objective=None, is_vertex=False)
        check_cover_witness(cinst, family, witness, stage)
        result = wgmv_cover(cinst, family)
        budget = 5 * scale * pool_cost(links)
        if result.cost > budget:
            raise InvariantViolated(
                f"{stage}: cover cost {result.cost} exceeds {budget}")
        added = frozenset(links[j] for j in result.links)
        committed.update(added)
        ledger.append(LedgerEntry(stage, result.cost, len(family.cuts)))
        return added

    # widest bucket: two passes over the cuts short of the full demand
    if depth >= 2:
        top = buckets.tier(depth - 1)
        short_before: set[int] = set()
        first_added: frozenset[int] = frozenset()
        for attempt in (1, 2):
            pool = every_edge - top - committed
            links = sorted(pool)
            probe = LinkCoverInstance(
                n=inst.n,
                base_edges=tuple(
                    [BaseEdge(inst.edges[e].u, inst.edges[e].v, caps[e])
                     for e in sorted(committed)]
                    + [BaseEdge(inst.edges[e].u, inst.edges[e].v,
                                2 * caps[e] * values[e]) for e in sorted(top)]),
                links=tuple(Link(inst.edges[e].u, inst.edges[e].v, costs[e])
                            for e in links),
                threshold=rat(k), r=1)
            family = small_cut_family(probe)
            if attempt == 1:
                short_before = {cut.mask for cut in family.cuts}
            else:
                floor_cap = rat(1 << (depth - 1))
                if 2 * floor_cap < k:
                    raise InvariantViolated(
                        "widest bucket bound below half the demand")
                for cut in family.cuts:
                    if cut.mask not in short_before:
                        raise InvariantViolated(
                            f"cut mask {cut.mask:#x} became short only "
                            "after the first pass")
                    for group in (first_added,):
                        hits = [e for e in group
                                if cut.crosses(inst.edges[e].u,
                                               inst.edges[e].v)]
                        if not hits:
                            raise InvariantViolated(
                                f"first pass left cut mask {cut.mask:#x} "
                                "untouched")
                        if any(caps[e] <= floor_cap for e in hits):
                            raise InvariantViolated(
                                "first pass used an edge below the "
                                "bucket bound")
            added = cover_pass(f"broad pass {attempt}", k, top, pool,
                               rat(2), verify_rows=True)
            if attempt == 1:
                first_added = added
            elif short_before:
                checks.append(
                    f"both broad passes hit all {len(short_before)} "
                    "short cuts")
        if committed & top:
            raise InvariantViolated("committed set leaked into the bucket")
        require_floor(top, rat(k), "after the broad passes")

    # middle steps: raise the floor rung by rung, then widen the pool
    for step in range(2, depth):
        hi = depth - step + 1
        lo = depth - step
        tier_hi = buckets.tier(hi)
        tier_lo = buckets.tier(lo)
        unit = 1 << lo
        wide = 1 << hi
        if committed & tier_hi:
            raise InvariantViolated(
                f"step {step}: committed set overlaps bucket {hi}")
        require_floor(tier_hi, rat(k), f"start of step {step}")
        last_rung = (k - wide) // unit
        phase_spend = ZERO
        for rung in range(1, last_rung + 1):
            pool = tier_hi - tier_lo - committed
            scale = rat(2 * wide) / (k - rung * unit)
            added = cover_pass(f"step {step} rung {rung}",
                               rung * unit, tier_lo, pool, scale,
                               verify_rows=False)
            phase_spend += ledger[-1].cost
            require_floor(tier_lo, rat(rung * unit),
                          f"step {step} after rung {rung}")
        require_floor(tier_lo, rat(k - wide - unit),
                      f"step {step} between phases")
        if last_rung > 0:
            # spend across the rungs telescopes into a logarithm
            rung_pool = tier_hi - tier_lo
            harmonic = (1.0 / wide
                        + (math.log(k - unit) - math.log(k - last_rung * unit))
                        / unit)
            limit = 10.0 * float(pool_cost(rung_pool)) * 2.0 * harmonic * wide
            if float(phase_spend) > limit + 1e-9:
                raise InvariantViolated(
                    f"step {step}: rung spend {float(phase_spend)} "
                    f"exceeds {limit}")
            checks.append(f"step {step}: rung spend within the "
                          "logarithmic budget")
        for attempt in (1, 2, 3):
            pool = every_edge - tier_lo - committed
            cover_pass(f"step {step} broad pass {attempt}", k, tier_lo,
                       pool, rat(2), verify_rows=True)
        if committed & tier_lo:
            raise InvariantViolated(
                f"step {step}: committed set overlaps bucket {lo}")
        require_floor(tier_lo, rat(k), f"end of step {step}")

    # narrowest bucket: capacitated iterative rounding
    if depth >= 1:
        light = buckets.tier(1)
    else:
        light = every_edge - buckets.heavy
    if committed & light:
        raise InvariantViolated("committed set overlaps the final bucket")
    require_floor(light, rat(k), "before the final rounding")
    jain_result: Optional[JainResult] = None
    candidates = sorted(light)
    head_start = {mask: committed_weight(mask) for mask in _cut_masks(inst.n)}
    residual_left = any(head_start[mask] < k for mask in head_start)
    if residual_left and not candidates:
        raise InvariantViolated("a cut is short but the final bucket is empty")
    if residual_left:
        final = FConnInstance(
            n=inst.n,
            candidates=tuple(
                CandidateEdge(inst.edges[e].u, inst.edges[e].v,
                              costs[e], inst.edges[e].cap)
                for e in candidates),
            demand=k,
            head_start=head_start)
        witness = tuple(min(ONE, 2 * values[e]) for e in candidates)
        check_witness(final, witness, "final rounding")
        jain_result = iterative_round(final)
        committed.update(candidates[j] for j in jain_result.chosen)
        cap_top = max(inst.edges[e].cap for e in candidates)
        budget = 2 * cap_top * pool_cost(candidates)
        if jain_result.cost > budget:
            raise InvariantViolated(
                f"final rounding cost {jain_result.cost} exceeds {budget}")
        ledger.append(LedgerEntry("final rounding", jain_result.cost,
                                  len(jain_result.rounds)))
    else:
        ledger.append(LedgerEntry("final rounding", ZERO, 0))

    return RoundingOutcome(chosen=frozenset(committed),
                           ledger=tuple(ledger), checks=tuple(checks),
                           jain=jain_result)


def solve_capk(inst: CapEcssInstance,
               restart_limit: int = 10_000
               ) -> tuple[EdgeSet, CapkSolveReport]:
    """Cutting-plane solve plus rounding, restarting on discovered rows."""
    if inst.k > MAX_DEMAND:
        raise InstanceTooLarge(f"demand {inst.k} exceeds {MAX_DEMAND}")
    if inst.n > exhaustive_limit():
        raise InstanceTooLarge(
            f"solving re-checks all cuts; n={inst.n} exceeds limit")
    if not feasible_capk(inst, inst.all_edges()):
        raise Infeasible("full edge set misses the demand on some cut")
    view = capk_view(inst)
    costs = tuple(rat(e.cost) for e in inst.edges)
    rows: list[LpRow] = degree_rows(view)
    restarts = 0
    iterations = 0
    while True:
        lp = cutting_plane(inst.m, costs, rows,
                           lambda sol: separate_capk(inst, sol))
        iterations += lp.iterations
        try:
            outcome = round_capk(inst, lp.solution)
            break
        except Restart as stop:
            restarts += 1
            if restarts > restart_limit:
                raise RestartLimitExceeded(
                    f"rounding restarted more than {restart_limit} times")
            if violation(stop.row, lp.solution.values) <= 0:
                raise InvariantViolated(
                    f"restart row {stop.row.key!r} is not violated")
            rows = lp.rows + [stop.row]
    chosen = outcome.chosen
    total = inst.cost_of(chosen)
    if not feasible_capk(inst, chosen):
        raise InvariantViolated("rounded edge set misses the demand")
    report = CapkSolveReport(
        x_star=lp.solution, lp_value=lp.solution.objective,
        iterations=iterations, restarts=restarts, rows=tuple(lp.rows),
        ledger=outcome.ledger, checks=outcome.checks,
        chosen=chosen, total_cost=total)
    return chosen, report
