"""Brute-force optimizers against direct subset enumeration."""

from __future__ import annotations

import itertools
import random

import pytest

from netdesign.errors import Infeasible, TooManyEdges, TooManyLinks
from netdesign.instances import (BaseEdge, CapEcssInstance, CapEdge, FgcEdge,
                                 FgcInstance, Link, LinkCoverInstance,
                                 feasible_capk, feasible_cover, feasible_fgc,
                                 gen_capk, gen_fgc)
from netdesign.oracle import opt_capk, opt_cover, opt_fgc
from netdesign.rational import rat


def exhaustive_optima(count, cost_of, feasible):
    best = None
    witnesses = []
    for size in range(count + 1):
        for subset in itertools.combinations(range(count), size):
            chosen = frozenset(subset)
            if not feasible(chosen):
                continue
            cost = cost_of(chosen)
            if best is None or cost < best:
                best = cost
                witnesses = [chosen]
            elif cost == best:
                witnesses.append(chosen)
    return best, witnesses


def test_opt_fgc_matches_enumeration():
    for seed in range(30):
        inst = gen_fgc(seed=seed, n=4, m=8, p=1, q=1)
        expected, witnesses = exhaustive_optima(
            inst.m, inst.cost_of, lambda s: feasible_fgc(inst, s))
        if expected is None:
            with pytest.raises(Infeasible):
                opt_fgc(inst)
            continue
        result = opt_fgc(inst)
        assert result.cost == expected
        assert feasible_fgc(inst, result.chosen)
        assert min(sorted(w) for w in witnesses) == sorted(result.chosen)


def test_opt_capk_matches_enumeration():
    for seed in range(30):
        inst = gen_capk(seed=seed, n=4, m=7, k=3)
        expected, witnesses = exhaustive_optima(
            inst.m, inst.cost_of, lambda s: feasible_capk(inst, s))
        if expected is None:
            with pytest.raises(Infeasible):
                opt_capk(inst)
            continue
        result = opt_capk(inst)
        assert result.cost == expected
        assert min(sorted(w) for w in witnesses) == sorted(result.chosen)


def test_opt_capk_gap_witness_is_lexicographic():
    inst = CapEcssInstance(
        n=2, edges=(CapEdge(0, 1, rat(0), 4), CapEdge(0, 1, rat(1), 5)),
        k=5)
    result = opt_capk(inst)
    assert result.cost == 1
    # {0, 1} and {1} both cost one; the index-sorted comparison favors {0, 1}
    assert result.chosen == frozenset({0, 1})


def test_opt_cover_matches_enumeration():
    rng = random.Random(7)
    for _ in range(20):
        n = rng.randint(3, 5)
        base = tuple(BaseEdge(rng.randrange(1, n), 0, rat(rng.randint(0, 2)))
                     for _ in range(n))
        links = tuple(
            Link(u, v, rat(rng.randint(0, 5)))
            for u, v in itertools.combinations(range(n), 2))
        inst = LinkCoverInstance(n=n, base_edges=base, links=links,
                                 threshold=rat(3), r=rng.choice((1, 2)))
        expected, _ = exhaustive_optima(
            inst.num_links, inst.cost_of, lambda s: feasible_cover(inst, s))
        if expected is None:
            with pytest.raises(Infeasible):
                opt_cover(inst)
            continue
        result = opt_cover(inst)
        assert result.cost == expected
        assert feasible_cover(inst, result.chosen)


def test_oracle_size_guards():
    edges = tuple(FgcEdge(0, 1, rat(1), True) for _ in range(23))
    inst = FgcInstance(n=2, edges=edges, p=1, q=1)
    with pytest.raises(TooManyEdges):
        opt_fgc(inst)
    links = tuple(Link(0, 1, rat(1)) for _ in range(23))
    cover = LinkCoverInstance(n=2, base_edges=(), links=links,
                              threshold=rat(1), r=1)
    with pytest.raises(TooManyLinks):
        opt_cover(cover)


def test_oracle_zero_cost():
    inst = CapEcssInstance(
        n=2, edges=(CapEdge(0, 1, rat(0), 1),), k=1)
    result = opt_capk(inst)
    assert result.cost == 0
    assert result.chosen == frozenset({0})
