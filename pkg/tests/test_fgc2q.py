"""Double-connectivity flexible design and the covering reduction back."""

from __future__ import annotations

import pytest

from netdesign.bench import cover2_suite, fgc2q_suite
from netdesign.errors import Infeasible
from netdesign.fgc2q import solve_2q, two_cover_via_fgc2q
from netdesign.instances import (BaseEdge, FgcEdge, FgcInstance, Link,
                                 LinkCoverInstance, feasible_cover,
                                 feasible_fgc)
from netdesign.oracle import opt_cover, opt_fgc
from netdesign.rational import rat


def test_cycle_instance_solves():
    # a 4-cycle of safe edges plus a chord; q=1 needs two-edge cuts doubled
    edges = (FgcEdge(0, 1, rat(1), True), FgcEdge(1, 2, rat(1), True),
             FgcEdge(2, 3, rat(1), True), FgcEdge(0, 3, rat(1), True),
             FgcEdge(1, 3, rat(1), True), FgcEdge(0, 2, rat(1), True))
    inst = FgcInstance(n=4, edges=edges, p=2, q=1)
    report = solve_2q(inst)
    assert feasible_fgc(inst, report.chosen)
    assert report.cost >= opt_fgc(inst).cost


def test_wrong_p_rejected():
    inst = FgcInstance(
        n=2, edges=(FgcEdge(0, 1, rat(1), True),), p=1, q=1)
    with pytest.raises(ValueError):
        solve_2q(inst)


def test_reduction_bound_on_random_suite():
    for seed, inst in fgc2q_suite(40):
        report = solve_2q(inst)
        assert feasible_fgc(inst, report.chosen), seed
        opt = opt_fgc(inst).cost
        assert report.lp_value <= opt <= report.cost, seed
        assert report.cost <= (4 * report.alpha + 11) * opt, seed
        # the exact two-cover plugin has alpha <= 1
        assert report.alpha <= 1, seed
        assert report.cost <= 15 * opt, seed


def oracle_fgc_solver(fgc: FgcInstance):
    return opt_fgc(fgc).chosen


def test_two_cover_via_connectivity_bound():
    for seed, inst in cover2_suite(40):
        report = two_cover_via_fgc2q(inst, fgc2q_solver=oracle_fgc_solver)
        assert feasible_cover(inst, report.links), seed
        assert report.cost <= 3 * opt_cover(inst).cost, seed


def test_two_cover_rejects_bad_shapes():
    base = (BaseEdge(0, 1, rat(1)), BaseEdge(1, 2, rat(1)))
    links = (Link(0, 2, rat(1)), Link(0, 1, rat(1)))
    r1 = LinkCoverInstance(n=3, base_edges=base, links=links,
                           threshold=rat(3), r=1)
    with pytest.raises(ValueError):
        two_cover_via_fgc2q(r1)
    low = LinkCoverInstance(n=3, base_edges=base, links=links,
                            threshold=rat(2), r=2)
    with pytest.raises(ValueError):
        two_cover_via_fgc2q(low)
    heavy = LinkCoverInstance(n=3, base_edges=(BaseEdge(0, 1, rat(2)),),
                              links=links, threshold=rat(3), r=2)
    with pytest.raises(ValueError):
        two_cover_via_fgc2q(heavy)


def test_two_cover_infeasible_raises():
    inst = LinkCoverInstance(
        n=3,
        base_edges=(BaseEdge(0, 1, rat(1)), BaseEdge(1, 2, rat(1))),
        links=(Link(0, 1, rat(1)),),
        threshold=rat(3), r=2)
    with pytest.raises(Infeasible):
        two_cover_via_fgc2q(inst)
