"""Global min cuts and exhaustive cut enumeration on weighted multigraphs."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import exhaustive_limit
from .errors import InstanceTooLarge
from .instances import Cut
from .rational import Rat, ZERO, rat


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected multigraph with nonnegative rational edge weights."""

    n: int
    edges: tuple[tuple[int, int, Rat], ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two vertices")
        for u, v, w in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n) or u == v:
                raise ValueError(f"bad edge ({u}, {v})")
            if w < 0:
                raise ValueError("edge weights must be nonnegative")

    def weight_of_side(self, side) -> Rat:
        total = ZERO
        for u, v, w in self.edges:
            if (u in side) != (v in side):
                total += w
        return total


def min_cut(g: WeightedGraph) -> tuple[Rat, Cut]:
    """Deterministic minimum-weight cut by repeated maximum-adjacency sweeps.

    The sweep always starts from the lowest-index active vertex and breaks
    selection ties toward lower indices.  Among equal-weight cuts the one
    whose canonical side sorts first is kept, so the result does not depend
    on incidental iteration order.
    """
    n = g.n
    w = [[ZERO] * n for _ in range(n)]
    for u, v, wt in g.edges:
        w[u][v] += wt
        w[v][u] += wt
    groups = {v: [v] for v in range(n)}
    active = list(range(n))
    best_value = None
    best_side = None
    while len(active) > 1:
        start = active[0]
        conn = {v: w[start][v] for v in active if v != start}
        order = [start]
        while conn:
            pick = min(conn, key=lambda v: (-conn[v], v))
            last_weight = conn.pop(pick)
            order.append(pick)
            for v in conn:
                conn[v] += w[pick][v]
        s, t = order[-2], order[-1]
        side = _canonical(groups[t], n)
        key = tuple(sorted(side))
        if best_value is None or last_weight < best_value or (
                last_weight == best_value and key < tuple(sorted(best_side))):
            best_value = last_weight
            best_side = side
        for v in active:
            if v not in (s, t):
                w[s][v] += w[t][v]
                w[v][s] = w[s][v]
        groups[s].extend(groups.pop(t))
        active.remove(t)
    return best_value, Cut(side=frozenset(best_side), weight=best_value)


def _canonical(members, n):
    side = set(members)
    if 0 in side:
        side = set(range(n)) - side
    return side


def _integer_weights(edges):
    scale = 1
    for _, _, w in edges:
        scale = math.lcm(scale, int(rat(w).denominator))
    scaled = [(u, v, int(rat(w) * scale)) for u, v, w in edges]
    return scale, scaled


def _enumerate(g: WeightedGraph, bound, inclusive: bool):
    limit = exhaustive_limit()
    if g.n > limit:
        raise InstanceTooLarge(f"cut enumeration needs n <= {limit}, got {g.n}")
    scale, scaled = _integer_weights(g.edges)
    if bound == math.inf:
        scaled_bound = math.inf
    else:
        scaled_bound = rat(bound) * scale
    inc = [[] for _ in range(g.n)]
    for u, v, w in scaled:
        if u > 0:
            inc[u].append((v, w))
        if v > 0:
            inc[v].append((u, w))
    n1 = g.n - 1
    in_side = [False] * g.n
    weight = 0
    prev_gray = 0
    hits = []
    for i in range(1, 1 << n1):
        gray = i ^ (i >> 1)
        vertex = (gray ^ prev_gray).bit_length()  # flipped bit + 1 == vertex id
        prev_gray = gray
        in_side[vertex] = not in_side[vertex]
        for other, w in inc[vertex]:
            if in_side[other] == in_side[vertex]:
                weight -= w
            else:
                weight += w
        if weight < scaled_bound or (inclusive and weight == scaled_bound):
            hits.append((gray << 1, weight))
    hits.sort()
    return [
        Cut(side=frozenset(v for v in range(1, g.n) if (mask >> v) & 1),
            weight=rat(w) / scale)
        for mask, w in hits
    ]


def enumerate_cuts_below(g: WeightedGraph, bound) -> list[Cut]:
    """All canonical cuts of weight strictly below the bound, by ascending mask.

    Pass math.inf to enumerate every nontrivial cut.
    """
    return _enumerate(g, bound, inclusive=False)


def enumerate_cuts_at_most(g: WeightedGraph, bound) -> list[Cut]:
    """Like enumerate_cuts_below but keeps cuts sitting exactly on the bound."""
    return _enumerate(g, bound, inclusive=True)
