"""Acceptance gate: exact gap values, envelopes, and invariant sweeps.

Each check prints one summary line with its wall-clock time and asserts
a runtime budget on top of the substance.  The three big random-suite
checks cache (lp, opt, alg) triples so the final cross-oracle chain can
reuse them without re-solving anything.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import replace

from test_capk import gap_instance as capk_gap
from test_capk import plain_lp_value, strengthened_lp_value
from test_fgc1q import gap_instance as fgc_gap

from netdesign.bench import (capk_suite, cover1_suite, cover2_suite,
                             fconn_suite, fgc1q_suite, fgc2q_suite,
                             pqfgc_suite)
from netdesign.capk import solve_capk
from netdesign.cover import exact_two_cover, wgmv_cover
from netdesign.fgc1q import base_lp_value, solve_1q
from netdesign.fgc2q import solve_2q, two_cover_via_fgc2q
from netdesign.instances import feasible_capk, feasible_fgc
from netdesign.jain import iterative_round
from netdesign.oracle import opt_capk, opt_cover, opt_fgc
from netdesign.pqfgc import (capkecss_formulation,
                             check_formulation_inequalities, pq_fgc_augment)
from netdesign.rational import ONE, ZERO, Rat

# (lp, opt, alg) triples per random-suite check, for the final chain.
_TRIPLES: dict[str, list[tuple[Rat, Rat, Rat]]] = {}


def _report(name: str, started: float, budget: float, detail: str) -> None:
    elapsed = time.perf_counter() - started
    print(f"{name} PASS in {elapsed:.2f}s (budget {budget:.0f}s): {detail}")
    assert elapsed < budget


def _fgc1q_triples() -> list[tuple[Rat, Rat, Rat]]:
    if "fgc1q" not in _TRIPLES:
        triples = []
        for _, inst in fgc1q_suite(200):
            rep = solve_1q(inst)
            opt = opt_fgc(inst)
            assert feasible_fgc(inst, rep.chosen)
            assert rep.cost <= 7 * opt.cost
            assert rep.cost <= 7 * rep.lp_value
            triples.append((rep.lp_value, opt.cost, rep.cost))
        _TRIPLES["fgc1q"] = triples
    return _TRIPLES["fgc1q"]


def _fgc2q_triples() -> list[tuple[Rat, Rat, Rat]]:
    if "fgc2q" not in _TRIPLES:
        triples = []
        for _, inst in fgc2q_suite(100):
            rep = solve_2q(inst, two_cover=exact_two_cover)
            opt = opt_fgc(inst)
            assert feasible_fgc(inst, rep.chosen)
            assert rep.cost <= (4 * rep.alpha + 11) * opt.cost
            assert rep.cost <= 15 * opt.cost
            triples.append((rep.lp_value, opt.cost, rep.cost))
        _TRIPLES["fgc2q"] = triples
    return _TRIPLES["fgc2q"]


def _capk_triples() -> tuple[list[tuple[Rat, Rat, Rat]], list[float]]:
    if "capk" not in _TRIPLES:
        triples = []
        ratios = []
        for _, inst in capk_suite(100):
            chosen, rep = solve_capk(inst)
            opt = opt_capk(inst)
            assert feasible_capk(inst, chosen)
            envelope = 40 * (1 + (inst.k - 1).bit_length())
            assert rep.total_cost <= envelope * opt.cost
            triples.append((rep.lp_value, opt.cost, rep.total_cost))
            if opt.cost > 0:
                ratios.append(float(rep.total_cost / opt.cost))
        _TRIPLES["capk"] = triples
        _TRIPLES["capk_ratios"] = ratios
    return _TRIPLES["capk"], _TRIPLES["capk_ratios"]


def test_criterion_01_capk_gap_exactness():
    t0 = time.perf_counter()
    for k in (2, 5, 16):
        inst = capk_gap(k)
        assert plain_lp_value(inst) == Rat(1, k)
        assert strengthened_lp_value(inst) == ONE
        chosen, rep = solve_capk(inst)
        assert rep.total_cost == ONE
        assert sum((inst.edges[e].cost for e in chosen), ZERO) == ONE
        assert opt_capk(inst).cost == ONE
    _report("criterion 01", t0, 1.0,
            "two-node gap: plain 1/k, strengthened 1, solver 1 = optimum")


def test_criterion_02_fgc1q_gap_exactness():
    t0 = time.perf_counter()
    for q in (2, 3, 5):
        inst = fgc_gap(q)
        # All q+1 crossing edges sit at 1/(q+1) in the optimal fractional
        # point, so the single unit-cost edge contributes exactly 1/(q+1).
        assert base_lp_value(inst) == Rat(1, q + 1)
        rep = solve_1q(inst)
        assert rep.cost == ONE
        assert opt_fgc(inst).cost == ONE
    _report("criterion 02", t0, 1.0,
            "parallel-edge gap: plain 1/(q+1), solver 1 = optimum")


def test_criterion_03_fgc1q_seven_approximation():
    t0 = time.perf_counter()
    triples = _fgc1q_triples()
    assert len(triples) == 200
    worst = max((alg / opt for _, opt, alg in triples if opt > 0),
                default=ONE)
    _report("criterion 03", t0, 120.0,
            f"200 instances feasible, within 7x of optimum and of the "
            f"relaxation; worst ratio {float(worst):.3f}")


def test_criterion_04_wgmv_five_bound():
    t0 = time.perf_counter()
    for _, inst in cover1_suite(200):
        res = wgmv_cover(inst)
        assert res.lp_value <= res.cost <= 5 * res.lp_value
    _report("criterion 04", t0, 60.0,
            "200 cover instances inside [lp, 5*lp]")


def test_criterion_05_jain_bound_and_half_variable():
    t0 = time.perf_counter()
    for _, inst in fconn_suite(200):
        res = iterative_round(inst)
        assert res.cost <= 2 * res.lp_value
        assert all(log.bought >= 1 for log in res.rounds)
    _report("criterion 05", t0, 60.0,
            "200 instances within 2*lp; every round fixed a variable "
            "at or above one half")


def test_criterion_06_fgc2q_reduction_bound():
    t0 = time.perf_counter()
    triples = _fgc2q_triples()
    assert len(triples) == 100
    worst = max((alg / opt for _, opt, alg in triples if opt > 0),
                default=ONE)
    _report("criterion 06", t0, 180.0,
            f"100 instances feasible, within (4*alpha+11)x and 15x of "
            f"optimum; worst ratio {float(worst):.3f}")


def test_criterion_07_two_cover_via_connectivity_bound():
    t0 = time.perf_counter()
    for _, inst in cover2_suite(100):
        report = two_cover_via_fgc2q(
            inst, fgc2q_solver=lambda fgc: opt_fgc(fgc).chosen)
        opt = opt_cover(inst)
        assert report.cost <= 3 * opt.cost
    _report("criterion 07", t0, 120.0,
            "100 unit-capacity instances within 3x of the exact two-cover")


def test_criterion_08_capk_envelope_and_invariants():
    t0 = time.perf_counter()
    triples, ratios = _capk_triples()
    assert len(triples) == 100
    median = statistics.median(ratios)
    _report("criterion 08", t0, 300.0,
            f"100 instances feasible under internal checkpoint sweeps, "
            f"inside 40*(1+ceil(log2 k))x; median ratio {median:.3f}")


def test_criterion_09_formulation_predicate():
    t0 = time.perf_counter()
    for p in range(1, 51):
        for q in range(1, 51):
            formable = capkecss_formulation(p, q) is not None
            assert formable == check_formulation_inequalities(p, q)
            assert formable == (p == 1 or q == 1)
    _report("criterion 09", t0, 1.0,
            "formulation exists exactly when p=1 or q=1, for p,q <= 50")


def test_criterion_10_augmentation_rounds():
    t0 = time.perf_counter()
    for _, inst in pqfgc_suite(50):
        chosen = pq_fgc_augment(inst)
        assert feasible_fgc(inst, chosen)
        for level in range(1, inst.p + 1):
            assert feasible_fgc(replace(inst, p=level), chosen)
    _report("criterion 10", t0, 120.0,
            "50 instances feasible; per-round cut coverage and the wide-cut "
            "threshold are re-verified inside every round")


def test_criterion_11_cross_oracle_chain():
    t0 = time.perf_counter()
    capk_triples, _ = _capk_triples()
    checked = 0
    for triples in (_fgc1q_triples(), _fgc2q_triples(), capk_triples):
        for lp, opt, alg in triples:
            assert lp <= opt <= alg
            checked += 1
    _report("criterion 11", t0, 300.0,
            f"lp <= opt <= alg on all {checked} cached suite instances")
