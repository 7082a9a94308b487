"""Seeded instance suites and the measurement records they produce.

The suite builders are the single source of randomness for both the
test suite and the benchmark command: a fixed master seed drives the
parameter draws, infeasible draws are discarded, and every kept
instance carries the sub-seed that regenerates it.  Records serialize
to CSV (fixed column order, rows sorted) and to a versioned JSON
document.
"""

from __future__ import annotations

import json
import random
from dataclasses import replace
from typing import NamedTuple, Optional

from .instances import (BaseEdge, CapEcssInstance, FgcInstance, Link,
                        LinkCoverInstance, _cut_masks, feasible_capk,
                        feasible_cover, feasible_fgc, gen_capk, gen_fgc)
from .jain import CandidateEdge, FConnInstance
from .rational import Rat, fmt_rat, rat

CSV_COLUMNS = ("problem", "seed", "n", "m", "param",
               "lp", "alg", "opt", "ratio", "ms")
JSON_SCHEMA = 1


class RunRecord(NamedTuple):
    problem: str
    seed: int
    n: int
    m: int
    param: str
    lp: Optional[Rat]
    alg: Rat
    opt: Optional[Rat]
    ratio: Optional[float]
    ms: int
    restarts: int = 0


def ratio_of(alg: Rat, opt: Optional[Rat]) -> Optional[float]:
    if opt is None:
        return None
    if opt == 0:
        return 1.0 if alg == 0 else float("inf")
    return float(alg) / float(opt)


def to_csv(records) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in sorted(records, key=lambda r: (r.problem, r.seed)):
        lines.append(",".join([
            r.problem, str(r.seed), str(r.n), str(r.m), r.param,
            fmt_rat(r.lp) if r.lp is not None else "",
            fmt_rat(r.alg),
            fmt_rat(r.opt) if r.opt is not None else "",
            f"{r.ratio:.6f}" if r.ratio is not None else "",
            str(r.ms),
        ]))
    return "\n".join(lines) + "\n"


def to_json(records) -> str:
    doc = {
        "schema": JSON_SCHEMA,
        "records": [
            {
                "problem": r.problem, "seed": r.seed, "n": r.n, "m": r.m,
                "param": r.param,
                "lp": fmt_rat(r.lp) if r.lp is not None else None,
                "alg": fmt_rat(r.alg),
                "opt": fmt_rat(r.opt) if r.opt is not None else None,
                "ratio": r.ratio, "ms": r.ms, "restarts": r.restarts,
            }
            for r in sorted(records, key=lambda r: (r.problem, r.seed))
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def summarize(records) -> dict[str, tuple[float, float, float]]:
    """Min, median, and max ratio per problem kind, skipping blanks."""
    seen: dict[str, list[float]] = {}
    for r in records:
        if r.ratio is not None:
            seen.setdefault(r.problem, []).append(r.ratio)
    out = {}
    for problem, ratios in sorted(seen.items()):
        ratios.sort()
        out[problem] = (ratios[0], ratios[len(ratios) // 2], ratios[-1])
    return out


# ---------------------------------------------------------------------------
# suite builders


def fgc1q_suite(count: int = 200) -> list[tuple[int, FgcInstance]]:
    rng = random.Random(0x1F6C)
    out = []
    while len(out) < count:
        seed = rng.randrange(1 << 30)
        n = rng.randint(4, 8)
        m = rng.randint(n, 16)
        q = rng.randint(1, 3)
        inst = gen_fgc(seed=seed, n=n, m=m, p=1, q=q)
        if feasible_fgc(inst, inst.all_edges()):
            out.append((seed, inst))
    return out


def fgc2q_suite(count: int = 100) -> list[tuple[int, FgcInstance]]:
    rng = random.Random(0x2F6C)
    out = []
    while len(out) < count:
        seed = rng.randrange(1 << 30)
        n = rng.randint(4, 7)
        m = rng.randint(n + 3, min(14, n * (n - 1) // 2 + 5))
        q = rng.randint(1, 2)
        inst = gen_fgc(seed=seed, n=n, m=m, p=2, q=q)
        if feasible_fgc(inst, inst.all_edges()):
            out.append((seed, inst))
    return out


def capk_suite(count: int = 100) -> list[tuple[int, CapEcssInstance]]:
    rng = random.Random(0xCA9)
    out = []
    while len(out) < count:
        seed = rng.randrange(1 << 30)
        n = rng.randint(3, 8)
        m = rng.randint(n, min(12, n * (n - 1) // 2 + n))
        k = rng.choice([1, 2, 3, 4, 5, 6, 8, 11, 13, 16])
        inst = gen_capk(seed=seed, n=n, m=m, k=k)
        if feasible_capk(inst, inst.all_edges()):
            out.append((seed, inst))
    return out


def _random_cover(seed: int, n: int, base_m: int, link_count: int,
                  lam: int, r: int, unit_caps: bool) -> LinkCoverInstance:
    rng = random.Random(seed)
    base = []
    for _ in range(base_m):
        u = rng.randrange(n)
        v = rng.randrange(n)
        while v == u:
            v = rng.randrange(n)
        cap = 1 if unit_caps else rng.randint(1, 3)
        base.append(BaseEdge(min(u, v), max(u, v), rat(cap)))
    links = []
    for _ in range(link_count):
        u = rng.randrange(n)
        v = rng.randrange(n)
        while v == u:
            v = rng.randrange(n)
        links.append(Link(min(u, v), max(u, v), rat(rng.randint(0, 9))))
    return LinkCoverInstance(n=n, base_edges=tuple(base), links=tuple(links),
                             threshold=rat(lam), r=r)


def cover1_suite(count: int = 200) -> list[tuple[int, LinkCoverInstance]]:
    rng = random.Random(0xC0E1)
    out = []
    while len(out) < count:
        seed = rng.randrange(1 << 30)
        n = rng.randint(3, 9)
        inst = _random_cover(seed, n, base_m=rng.randint(n - 1, 2 * n),
                             link_count=rng.randint(2, 12),
                             lam=rng.randint(2, 5), r=1, unit_caps=False)
        if feasible_cover(inst, frozenset(range(inst.num_links))):
            out.append((seed, inst))
    return out


def cover2_suite(count: int = 100) -> list[tuple[int, LinkCoverInstance]]:
    rng = random.Random(0xC0E2)
    out = []
    while len(out) < count:
        seed = rng.randrange(1 << 30)
        n = rng.randint(3, 7)
        base_m = rng.randint(n, 2 * n)
        # Keep base+links within reach of the exhaustive solver so the
        # delegate in tests can be the exact one.
        inst = _random_cover(seed, n, base_m=base_m,
                             link_count=rng.randint(4, min(12, 22 - base_m)),
                             lam=rng.choice([3, 4]), r=2, unit_caps=True)
        if feasible_cover(inst, frozenset(range(inst.num_links))):
            out.append((seed, inst))
    return out


def fconn_suite(count: int = 200) -> list[tuple[int, FConnInstance]]:
    rng = random.Random(0xFC01)
    out = []
    while len(out) < count:
        seed = rng.randrange(1 << 30)
        sub = random.Random(seed)
        n = sub.randint(3, 6)
        demand = sub.randint(1, 4)
        cands = []
        # Unit capacities keep the engine inside its classic 2 * lp bound.
        for _ in range(sub.randint(n, 4 * n)):
            u = sub.randrange(n)
            v = sub.randrange(n)
            while v == u:
                v = sub.randrange(n)
            cands.append(CandidateEdge(min(u, v), max(u, v),
                                       rat(sub.randint(0, 9)), 1))
        inst = FConnInstance(n=n, candidates=tuple(cands), demand=demand)
        full_ok = all(
            sum(c.cap for c in cands
                if ((mask >> c.u) ^ (mask >> c.v)) & 1) >= demand
            for mask in _cut_masks(n)
        )
        if full_ok:
            out.append((seed, inst))
    return out


def pqfgc_suite(count: int = 50) -> list[tuple[int, FgcInstance]]:
    rng = random.Random(0x96FC)
    out = []
    while len(out) < count:
        seed = rng.randrange(1 << 30)
        n = rng.randint(4, 7)
        m = rng.randint(n + 3, min(16, n * (n - 1) // 2 + 6))
        p = rng.randint(1, 3)
        q = rng.randint(1, 2)
        inst = gen_fgc(seed=seed, n=n, m=m, p=p, q=q)
        if feasible_fgc(inst, inst.all_edges()):
            out.append((seed, inst))
    return out


# ---------------------------------------------------------------------------
# benchmark execution


def param_of(problem: str, inst) -> str:
    """The param CSV field; semicolons keep multi-valued entries one cell."""
    if problem in ("fgc1q", "fgc2q"):
        return f"q={inst.q}"
    if problem == "pqfgc":
        return f"p={inst.p};q={inst.q}"
    if problem == "capk":
        return f"k={inst.k}"
    if problem in ("cover", "cover2-via-fgc"):
        return f"lam={fmt_rat(rat(inst.threshold))};r={inst.r}"
    raise ValueError(f"unknown problem kind {problem!r}")


def _instance_cost(inst, chosen) -> Rat:
    return sum((inst.edges[i].cost for i in chosen), rat(0))


def run_suite(problem: str, count: int, stable: bool = False) -> list[RunRecord]:
    """Solve and oracle one seeded suite; one record per instance.

    With stable=True the wall-time column is zeroed so repeated runs
    produce byte-identical CSV output.
    """
    import time

    from .cover import cover_lp_value, wgmv_cover
    from .fgc1q import base_lp_value, solve_1q
    from .fgc2q import solve_2q, two_cover_via_fgc2q
    from .capk import solve_capk
    from .oracle import opt_capk, opt_cover, opt_fgc
    from .pqfgc import cip_solve_exact, pq_fgc_augment

    records = []

    def record(seed, inst, m, lp, alg, opt, ms, restarts=0):
        assert lp is None or alg >= lp
        records.append(RunRecord(
            problem=problem, seed=seed, n=inst.n, m=m,
            param=param_of(problem, inst), lp=lp, alg=alg, opt=opt,
            ratio=ratio_of(alg, opt), ms=0 if stable else ms,
            restarts=restarts))

    if problem == "fgc1q":
        for seed, inst in fgc1q_suite(count):
            t0 = time.perf_counter()
            rep = solve_1q(inst)
            ms = int(round((time.perf_counter() - t0) * 1000))
            record(seed, inst, inst.m, rep.lp_value, rep.cost,
                   opt_fgc(inst).cost, ms)
    elif problem == "fgc2q":
        for seed, inst in fgc2q_suite(count):
            t0 = time.perf_counter()
            rep = solve_2q(inst)
            ms = int(round((time.perf_counter() - t0) * 1000))
            record(seed, inst, inst.m, rep.lp_value, rep.cost,
                   opt_fgc(inst).cost, ms)
    elif problem == "capk":
        for seed, inst in capk_suite(count):
            t0 = time.perf_counter()
            chosen, rep = solve_capk(inst)
            ms = int(round((time.perf_counter() - t0) * 1000))
            record(seed, inst, inst.m, rep.lp_value, rep.total_cost,
                   opt_capk(inst).cost, ms, restarts=rep.restarts)
    elif problem == "cover":
        for seed, inst in cover1_suite(count):
            t0 = time.perf_counter()
            res = wgmv_cover(inst)
            ms = int(round((time.perf_counter() - t0) * 1000))
            record(seed, inst, inst.num_links, res.lp_value, res.cost,
                   opt_cover(inst).cost, ms)
    elif problem == "cover2-via-fgc":
        for seed, inst in cover2_suite(count):
            t0 = time.perf_counter()
            rep = two_cover_via_fgc2q(inst)
            ms = int(round((time.perf_counter() - t0) * 1000))
            record(seed, inst, inst.num_links, cover_lp_value(inst),
                   rep.cost, opt_cover(inst).cost, ms)
    elif problem == "pqfgc":
        for seed, inst in pqfgc_suite(count):
            t0 = time.perf_counter()
            chosen = pq_fgc_augment(inst, cip_solver=cip_solve_exact)
            ms = int(round((time.perf_counter() - t0) * 1000))
            lp = base_lp_value(replace(inst, p=1))
            record(seed, inst, inst.m, lp, _instance_cost(inst, chosen),
                   opt_fgc(inst).cost, ms)
    else:
        raise ValueError(f"unknown problem kind {problem!r}")
    return records


BENCH_PROBLEMS = ("fgc1q", "fgc2q", "capk", "cover", "cover2-via-fgc", "pqfgc")
