"""Capacitated formulations of flexible connectivity and level raising."""

from __future__ import annotations

import random
from dataclasses import replace

import pytest

from netdesign.bench import pqfgc_suite
from netdesign.errors import Infeasible
from netdesign.fgc1q import solve_1q
from netdesign.instances import FgcEdge, FgcInstance, feasible_fgc
from netdesign.lp import make_row
from netdesign.pqfgc import (CapFormulation, CipProblem,
                             capkecss_formulation,
                             check_formulation_inequalities, cip_solve_exact,
                             cip_solve_greedy, pq_fgc_augment)
from netdesign.rational import Rat, rat


def test_formulation_known_values():
    assert capkecss_formulation(1, 1) == CapFormulation(1, 2, 2)
    assert capkecss_formulation(1, 3) == CapFormulation(1, 4, 4)
    assert capkecss_formulation(3, 1) == CapFormulation(3, 4, 12)
    assert capkecss_formulation(2, 2) is None


def test_formulation_agrees_with_inequalities():
    for p in range(1, 26):
        for q in range(1, 26):
            formulable = capkecss_formulation(p, q) is not None
            assert formulable == check_formulation_inequalities(p, q)
            assert formulable == (p == 1 or q == 1)


def test_cip_validation():
    row = make_row({0: rat(1)}, rat(1), key="r")
    with pytest.raises(ValueError):
        CipProblem(num_vars=1, costs=(rat(-1),), rows=(row,))
    with pytest.raises(ValueError):
        CipProblem(num_vars=1, costs=(rat(1),),
                   rows=(make_row({0: rat(2)}, rat(1), key="big"),))
    cip = CipProblem(num_vars=2, costs=(rat(1), rat(2)), rows=(row,))
    assert cip.satisfied(frozenset({0}))
    assert not cip.satisfied(frozenset())


def test_cip_exact_picks_the_cheap_pair():
    # one safe candidate at coefficient 1 against two unsafe at 1/2 each:
    # the normalized row wants either the safe one or both unsafe ones
    rows = (make_row({0: rat(1), 1: rat("1/2"), 2: rat("1/2")}, rat(1),
                     key="cut"),)
    cip = CipProblem(num_vars=3, costs=(rat(10), rat(3), rat(3)), rows=rows)
    chosen = cip_solve_exact(cip)
    assert chosen == frozenset({1, 2})
    assert sum(int(cip.costs[i]) for i in chosen) == 6


def test_cip_single_candidate():
    rows = (make_row({0: rat(1)}, rat(1), key="only"),)
    cip = CipProblem(num_vars=1, costs=(rat(4),), rows=rows)
    assert cip_solve_exact(cip) == frozenset({0})
    assert cip_solve_greedy(cip) == frozenset({0})


def test_cip_infeasible():
    rows = (make_row({0: rat("1/4")}, rat(1), key="weak"),)
    cip = CipProblem(num_vars=1, costs=(rat(1),), rows=rows)
    with pytest.raises(Infeasible):
        cip_solve_exact(cip)
    with pytest.raises(Infeasible):
        cip_solve_greedy(cip)


def random_cip(rng: random.Random) -> CipProblem:
    n = rng.randint(1, 8)
    rows = []
    for i in range(rng.randint(1, 5)):
        coeffs = {}
        for j in range(n):
            if rng.random() < 0.5:
                coeffs[j] = Rat(1, rng.randint(1, 3))
        if coeffs:
            rows.append(make_row(coeffs, rat(1), key=("row", i)))
    costs = tuple(rat(rng.randint(0, 9)) for _ in range(n))
    return CipProblem(num_vars=n, costs=costs, rows=tuple(rows))


def test_greedy_never_beats_exact():
    for seed in range(60):
        cip = random_cip(random.Random(seed))
        try:
            exact = cip_solve_exact(cip)
        except Infeasible:
            with pytest.raises(Infeasible):
                cip_solve_greedy(cip)
            continue
        greedy = cip_solve_greedy(cip)
        assert cip.satisfied(exact)
        assert cip.satisfied(greedy)
        exact_cost = sum((cip.costs[i] for i in exact), rat(0))
        greedy_cost = sum((cip.costs[i] for i in greedy), rat(0))
        assert greedy_cost >= exact_cost


def test_augment_p1_is_the_base_solution():
    inst = FgcInstance(
        n=3,
        edges=(FgcEdge(0, 1, rat(1), True), FgcEdge(1, 2, rat(2), True),
               FgcEdge(0, 2, rat(3), True)),
        p=1, q=1)
    assert pq_fgc_augment(inst) == solve_1q(inst).chosen


def test_augment_square_with_chords():
    # safe unit 4-cycle with two chords; p=2, q=1 forces thicker cuts
    edges = (FgcEdge(0, 1, rat(1), True), FgcEdge(1, 2, rat(1), True),
             FgcEdge(2, 3, rat(1), True), FgcEdge(0, 3, rat(1), True),
             FgcEdge(0, 2, rat(1), True), FgcEdge(1, 3, rat(1), True))
    inst = FgcInstance(n=4, edges=edges, p=2, q=1)
    chosen = pq_fgc_augment(inst)
    assert feasible_fgc(inst, chosen)


def test_augment_feasible_with_both_solvers():
    for seed, inst in pqfgc_suite(25):
        exact = pq_fgc_augment(inst, cip_solver=cip_solve_exact)
        assert feasible_fgc(inst, exact), seed
        greedy = pq_fgc_augment(inst, cip_solver=cip_solve_greedy)
        assert feasible_fgc(inst, greedy), seed
        # every level's solution stays feasible for the lower levels too
        for level in range(1, inst.p):
            assert feasible_fgc(replace(inst, p=level), exact), seed


def test_augment_infeasible_raises():
    inst = FgcInstance(
        n=3, edges=(FgcEdge(0, 1, rat(1), True),), p=2, q=1)
    with pytest.raises(Infeasible):
        pq_fgc_augment(inst)
