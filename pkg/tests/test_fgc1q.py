"""Single-connectivity flexible design: gap instances and the 7x envelope."""

from __future__ import annotations

import pytest

from netdesign.bench import fgc1q_suite
from netdesign.errors import Infeasible, InstanceTooLarge
from netdesign.fgc1q import base_lp_value, solve_1q
from netdesign.instances import FgcEdge, FgcInstance, feasible_fgc
from netdesign.oracle import opt_fgc
from netdesign.rational import Rat, rat


def gap_instance(q: int) -> FgcInstance:
    """q parallel free unsafe edges against one unit-cost safe edge."""
    edges = tuple(FgcEdge(0, 1, rat(0), False) for _ in range(q))
    edges += (FgcEdge(0, 1, rat(1), True),)
    return FgcInstance(n=2, edges=edges, p=1, q=q)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_gap_instance_exactness(q):
    inst = gap_instance(q)
    # q unsafe edges at value 1 and the safe edge at 1/(q+1) satisfy the
    # plain cut row q*1 + (q+1) * 1/(q+1) >= q + 1, so the relaxation
    # stays strictly fractional
    assert base_lp_value(inst) == Rat(1, q + 1)
    report = solve_1q(inst)
    assert report.cost == 1
    assert report.chosen == frozenset(range(q + 1))
    assert opt_fgc(inst).cost == 1
    assert feasible_fgc(inst, report.chosen)


def test_infeasible_instance_raises():
    inst = FgcInstance(
        n=3, edges=(FgcEdge(0, 1, rat(1), True),), p=1, q=1)
    with pytest.raises(Infeasible):
        solve_1q(inst)


def test_too_large_raises():
    edges = tuple(FgcEdge(i, i + 1, rat(1), True) for i in range(24))
    inst = FgcInstance(n=25, edges=edges, p=1, q=1)
    with pytest.raises(InstanceTooLarge):
        solve_1q(inst)


def test_wrong_p_rejected():
    inst = FgcInstance(
        n=2, edges=(FgcEdge(0, 1, rat(1), True),), p=2, q=1)
    with pytest.raises(ValueError):
        solve_1q(inst)


def test_seven_approximation_on_random_suite():
    for seed, inst in fgc1q_suite(80):
        report = solve_1q(inst)
        assert feasible_fgc(inst, report.chosen), seed
        opt = opt_fgc(inst).cost
        assert report.lp_value <= opt <= report.cost, seed
        assert report.cost <= 7 * opt, seed
        assert report.cost <= 7 * report.lp_value, seed
