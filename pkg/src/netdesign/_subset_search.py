"""Branch-and-bound minimum-cost subset search over a monotone predicate.

Shared by the exact optimizers and the exact cover solver.  The predicate
must be monotone: once a mask is feasible, every supermask is feasible.
The search is depth-first in index order, include-branch first, so complete
sets are reached in lexicographic order of their sorted index vectors; on
cost ties the first (lexicographically least) witness is kept.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

from .rational import Rat, ZERO


def min_cost_subset(count: int,
                    costs: Sequence[Rat],
                    feasible: Callable[[int], bool],
                    ) -> Optional[tuple[Rat, frozenset[int], int]]:
    """Exact minimum: (cost, lexicographically least witness, nodes examined).

    Returns None when even the full set is infeasible.
    """
    full = (1 << count) - 1
    if not feasible(full):
        return None
    suffix = [full & ~((1 << i) - 1) for i in range(count + 1)]
    best_cost: Optional[Rat] = None
    best_mask = 0
    nodes = 0

    def walk(idx: int, mask: int, cost: Rat):
        nonlocal best_cost, best_mask, nodes
        nodes += 1
        if best_cost is not None and cost >= best_cost:
            return
        if feasible(mask):
            best_cost, best_mask = cost, mask
            return
        if idx == count:
            return
        if not feasible(mask | suffix[idx]):
            return
        walk(idx + 1, mask | (1 << idx), cost + costs[idx])
        walk(idx + 1, mask, cost)

    walk(0, 0, ZERO)
    witness = frozenset(i for i in range(count) if (best_mask >> i) & 1)
    return best_cost, witness, nodes
