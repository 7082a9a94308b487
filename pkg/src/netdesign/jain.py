"""Iterative LP rounding for cut-requirement problems.

The engine covers residual cut requirements with capacitated candidate
edges.  Each round solves the residual LP at a vertex, permanently buys
every candidate whose capacity-weighted value reaches one half, and shrinks
the requirements accordingly.  Requirements come from a uniform demand that
is switched off on cuts already crossed twice by preselected edges, minus
any per-cut head start.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

from .config import exhaustive_limit
from .errors import InstanceTooLarge, InvariantViolated, RoundingStuck
from .instances import EdgeSet, _cut_masks
from .lp import LpProblem, dominant_rows, make_row, solve_vertex
from .rational import ONE, Rat, ZERO, rat


class CandidateEdge(NamedTuple):
    u: int
    v: int
    cost: Rat
    cap: int


@dataclass(frozen=True)
class FConnInstance:
    """Residual cut-covering problem handed to the rounding engine.

    Every nontrivial cut wants capacity ``demand`` unless two or more
    preselected pairs already cross it; ``head_start`` (keyed by canonical
    cut mask) is capacity the cut receives for free.
    """

    n: int
    candidates: tuple[CandidateEdge, ...]
    demand: int
    preselected: tuple[tuple[int, int], ...] = ()
    head_start: Mapping[int, Rat] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two vertices")
        if self.demand < 1:
            raise ValueError("demand must be positive")
        for e in self.candidates:
            if e.cap < 1:
                raise ValueError(f"candidate capacity must be positive: {e}")
            if e.cost < 0:
                raise ValueError(f"candidate cost must be nonnegative: {e}")

    def requirement(self, mask: int) -> int:
        crossing = sum(1 for u, v in self.preselected
                       if ((mask >> u) ^ (mask >> v)) & 1)
        return self.demand if crossing <= 1 else 0


class RoundLog(NamedTuple):
    live_cuts: int
    active: int
    bought: int
    lp_value: Rat


@dataclass
class JainResult:
    chosen: EdgeSet
    lp_value: Rat
    rounds: tuple[RoundLog, ...]
    cost: Rat


def _initial_residuals(inst: FConnInstance) -> dict[int, Rat]:
    out = {}
    for mask in _cut_masks(inst.n):
        req = rat(inst.requirement(mask))
        req -= rat(inst.head_start.get(mask, ZERO))
        if req > 0:
            out[mask] = req
    return out


def check_witness(inst: FConnInstance, witness: Sequence[Rat],
                  context: str) -> None:
    """Assert a fractional candidate vector meets every initial residual."""
    for mask, need in _initial_residuals(inst).items():
        got = ZERO
        for e, cand in enumerate(inst.candidates):
            if ((mask >> cand.u) ^ (mask >> cand.v)) & 1:
                got += cand.cap * witness[e]
        if got < need:
            raise InvariantViolated(
                f"{context}: witness provides {got} of {need} "
                f"on cut mask {mask:#x}")


def iterative_round(inst: FConnInstance) -> JainResult:
    """Round the residual LP to an integral cover of all requirements.

    Cost is at most 2 * max-capacity times the first LP value; rounding
    that cannot make progress (no candidate at half its capacity share)
    raises instead of looping.
    """
    if inst.n > exhaustive_limit():
        raise InstanceTooLarge(
            f"rounding enumerates all cuts; n={inst.n} exceeds limit")
    residual = _initial_residuals(inst)
    crossing: dict[int, list[int]] = {
        mask: [e for e, cand in enumerate(inst.candidates)
               if ((mask >> cand.u) ^ (mask >> cand.v)) & 1]
        for mask in residual
    }
    fixed: set[int] = set()
    lp_value = None
    logs = []
    half = ONE / 2
    while True:
        live = []
        for mask, need in residual.items():
            now = need - sum(
                (rat(inst.candidates[e].cap) for e in crossing[mask]
                 if e in fixed), ZERO)
            if now > 0:
                live.append((mask, now))
        if not live:
            break
        active = sorted({e for mask, _ in live for e in crossing[mask]
                         if e not in fixed})
        local = {e: j for j, e in enumerate(active)}
        rows = dominant_rows(
            make_row([(local[e], inst.candidates[e].cap)
                      for e in crossing[mask] if e not in fixed],
                     need, key=("cut", mask), tag="resid")
            for mask, need in live
        )
        lp = LpProblem(
            num_vars=len(active),
            objective=tuple(rat(inst.candidates[e].cost) for e in active),
            rows=tuple(rows),
        )
        sol = solve_vertex(lp)
        if lp_value is None:
            lp_value = sol.objective
        bought = [e for e in active
                  if inst.candidates[e].cap * sol[local[e]] >= half]
        if not bought:
            raise RoundingStuck(
                "no candidate reached half its capacity share at a vertex")
        logs.append(RoundLog(live_cuts=len(live), active=len(active),
                             bought=len(bought), lp_value=sol.objective))
        fixed.update(bought)
    if lp_value is None:
        lp_value = ZERO
    cost = sum((rat(inst.candidates[e].cost) for e in fixed), ZERO)
    cap_bound = max((inst.candidates[e].cap for e in fixed), default=1)
    if cost > 2 * cap_bound * lp_value:
        raise InvariantViolated(
            f"rounded cost {cost} exceeds 2 * {cap_bound} * lp {lp_value}")
    return JainResult(chosen=frozenset(fixed), lp_value=lp_value,
                      rounds=tuple(logs), cost=cost)


def check_weakly_F_supermodular(n: int,
                                f_table: Mapping[frozenset[int], int]) -> bool:
    """Check the crossing rule Jain's analysis needs, on an explicit table.

    For sets with positive requirement, f(A) + f(B) must be covered either
    by the union/intersection pair or by the two differences.
    """
    ground = frozenset(range(n))
    positive = [a for a, v in f_table.items() if v > 0]

    def get(s: frozenset[int]) -> int:
        if not s or s == ground:
            return 0
        return f_table.get(s, 0)

    for a in positive:
        for b in positive:
            lhs = get(a) + get(b)
            first = get(a | b) + get(a & b)
            second = get(a - b) + get(b - a)
            if lhs > max(first, second):
                return False
    return True
