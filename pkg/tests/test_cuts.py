"""Global minimum cut and near-minimum cut enumeration against brute force."""

from __future__ import annotations

import random

from netdesign.cuts import (WeightedGraph, enumerate_cuts_at_most,
                            enumerate_cuts_below, min_cut)
from netdesign.instances import _cut_masks
from netdesign.rational import Rat, ZERO, rat


def random_graph(rng: random.Random, n: int, m: int) -> WeightedGraph:
    edges = []
    for _ in range(m):
        u = rng.randrange(n)
        v = rng.randrange(n - 1)
        if v >= u:
            v += 1
        edges.append((min(u, v), max(u, v),
                      Rat(rng.randint(0, 12), rng.randint(1, 3))))
    return WeightedGraph(n, tuple(edges))


def brute_cut_weights(g: WeightedGraph) -> dict[int, Rat]:
    out = {}
    for mask in _cut_masks(g.n):
        total = ZERO
        for u, v, w in g.edges:
            if ((mask >> u) ^ (mask >> v)) & 1:
                total += w
        out[mask] = total
    return out


def test_min_cut_matches_brute_force():
    for seed in range(60):
        rng = random.Random(seed)
        n = rng.randint(2, 7)
        g = random_graph(rng, n, rng.randint(1, 14))
        value, cut = min_cut(g)
        weights = brute_cut_weights(g)
        assert value == min(weights.values())
        assert weights[cut.mask] == value
        assert 0 not in cut.side


def test_min_cut_disconnected_is_zero():
    g = WeightedGraph(4, ((0, 1, rat(3)), (2, 3, rat(2))))
    value, cut = min_cut(g)
    assert value == 0
    crossing = [(u, v) for u, v, _ in g.edges if cut.crosses(u, v)]
    assert crossing == []


def test_enumeration_matches_brute_force_and_is_strict():
    for seed in range(40):
        rng = random.Random(1000 + seed)
        n = rng.randint(2, 6)
        g = random_graph(rng, n, rng.randint(1, 12))
        weights = brute_cut_weights(g)
        bound = rat(rng.randint(0, 15))

        below = {c.mask for c in enumerate_cuts_below(g, bound)}
        assert below == {m for m, w in weights.items() if w < bound}
        at_most = {c.mask for c in enumerate_cuts_at_most(g, bound)}
        assert at_most == {m for m, w in weights.items() if w <= bound}

        for cut in enumerate_cuts_below(g, bound):
            assert cut.weight == weights[cut.mask]


def test_enumeration_boundary_cut_excluded():
    g = WeightedGraph(2, ((0, 1, rat(2)),))
    assert enumerate_cuts_below(g, rat(2)) == []
    hit = enumerate_cuts_at_most(g, rat(2))
    assert len(hit) == 1 and hit[0].weight == 2
