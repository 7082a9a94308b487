"""Command-line front end: solve, generate, verify, and benchmark.

Exit codes follow the sysexits convention where it applies: 0 success,
1 failed verification, 2 infeasible instance, 3 instance too large for
exhaustive machinery, 64 usage or input-format errors.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from typing import NamedTuple, Optional, Sequence

from .bench import (BENCH_PROBLEMS, RunRecord, param_of, ratio_of, run_suite,
                    summarize, to_csv, to_json)
from .capk import solve_capk
from .cover import cover_lp, cover_lp_value, small_cut_family, wgmv_cover
from .errors import (Infeasible, InstanceTooLarge, LpInfeasible, ParseError,
                     TooManyEdges, TooManyLinks)
from .fgc1q import base_lp_value, solve_1q
from .fgc2q import solve_2q, two_cover_via_fgc2q
from .instances import (CapEcssInstance, FgcInstance, LinkCoverInstance,
                        _cut_masks, fgc_cut_ok, format_solution, gen_capk,
                        gen_fgc, parse, parse_solution, serialize)
from .lp import format_lp_text
from .oracle import opt_capk, opt_cover, opt_fgc
from .pqfgc import cip_solve_exact, cip_solve_greedy, pq_fgc_augment
from .rational import Rat, fmt_rat, rat

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_INFEASIBLE = 2
EXIT_TOO_LARGE = 3
EXIT_USAGE = 64

PROBLEMS = ("fgc1q", "fgc2q", "capk", "cover", "cover2-via-fgc", "pqfgc")


class _Parser(argparse.ArgumentParser):
    """Argparse exits 2 on bad flags by default; 2 means infeasible here."""

    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class SolveOutcome(NamedTuple):
    chosen: frozenset[int]
    cost: Rat
    lp: Optional[Rat]
    restarts: int
    dump: Optional[tuple[int, Sequence[Rat], Sequence]]
    notes: tuple[str, ...]


def _load_instance(path: str, problem: str):
    with open(path, "r", encoding="utf-8") as handle:
        inst = parse(handle.read())
    want = {
        "fgc1q": FgcInstance, "fgc2q": FgcInstance, "pqfgc": FgcInstance,
        "capk": CapEcssInstance,
        "cover": LinkCoverInstance, "cover2-via-fgc": LinkCoverInstance,
    }[problem]
    if not isinstance(inst, want):
        raise ValueError(f"{path}: not a {want.__name__} file "
                         f"(problem kind {problem})")
    if problem == "fgc1q" and inst.p != 1:
        raise ValueError(f"{path}: problem fgc1q needs p=1, file has p={inst.p}")
    if problem == "fgc2q" and inst.p != 2:
        raise ValueError(f"{path}: problem fgc2q needs p=2, file has p={inst.p}")
    if problem == "cover" and inst.r != 1:
        raise ValueError(f"{path}: problem cover needs r=1, file has r={inst.r}")
    if problem == "cover2-via-fgc" and inst.r != 2:
        raise ValueError(f"{path}: problem cover2-via-fgc needs r=2, "
                         f"file has r={inst.r}")
    return inst


def _edge_costs(inst) -> tuple[Rat, ...]:
    return tuple(e.cost for e in inst.edges)


def _ledger_table(report) -> tuple[str, ...]:
    width = max([len("stage")] + [len(e.stage) for e in report.ledger])
    lines = [f"ledger ({report.restarts} restarts, "
             f"{report.iterations} cutting-plane iterations):"]
    lines.append(f"  {'stage'.ljust(width)}  {'cost':>10}  cuts")
    for entry in report.ledger:
        lines.append(f"  {entry.stage.ljust(width)}  "
                     f"{fmt_rat(entry.cost):>10}  {entry.family_size}")
    lines.append(f"  {'total'.ljust(width)}  "
                 f"{fmt_rat(report.total_cost):>10}")
    return tuple(lines)


def _run_solver(problem: str, inst, cip: str) -> SolveOutcome:
    if problem == "fgc1q":
        rep = solve_1q(inst)
        return SolveOutcome(rep.chosen, rep.cost, rep.lp_value, 0,
                            (inst.m, _edge_costs(inst), rep.rows), ())
    if problem == "fgc2q":
        rep = solve_2q(inst)
        return SolveOutcome(rep.chosen, rep.cost, rep.lp_value, 0,
                            (inst.m, _edge_costs(inst), rep.rows), ())
    if problem == "capk":
        chosen, rep = solve_capk(inst)
        return SolveOutcome(chosen, rep.total_cost, rep.lp_value, rep.restarts,
                            (inst.m, _edge_costs(inst), rep.rows),
                            _ledger_table(rep))
    if problem == "cover":
        res = wgmv_cover(inst)
        prob = cover_lp(inst)
        return SolveOutcome(res.links, res.cost, res.lp_value, 0,
                            (prob.num_vars, prob.objective, prob.rows), ())
    if problem == "cover2-via-fgc":
        rep = two_cover_via_fgc2q(inst)
        prob = cover_lp(inst)
        return SolveOutcome(rep.links, rep.cost, cover_lp_value(inst), 0,
                            (prob.num_vars, prob.objective, prob.rows), ())
    if problem == "pqfgc":
        solver = cip_solve_exact if cip == "exact" else cip_solve_greedy
        chosen = pq_fgc_augment(inst, cip_solver=solver)
        cost = sum((inst.edges[i].cost for i in chosen), rat(0))
        lp = base_lp_value(replace(inst, p=1))
        return SolveOutcome(chosen, cost, lp, 0, None, ())
    raise ValueError(f"unknown problem kind {problem!r}")


def _oracle_for(problem: str, inst):
    if problem in ("fgc1q", "fgc2q", "pqfgc"):
        return opt_fgc(inst)
    if problem == "capk":
        return opt_capk(inst)
    return opt_cover(inst)


def cmd_solve(args) -> int:
    inst = _load_instance(args.input, args.problem)
    t0 = time.perf_counter()
    out = _run_solver(args.problem, inst, args.cip)
    ms = int(round((time.perf_counter() - t0) * 1000))
    if out.lp is not None and out.cost < out.lp:
        raise AssertionError("solution cost below the relaxation value")

    if args.seed_check:
        again = _run_solver(args.problem, inst, args.cip)
        first = format_solution(args.problem, out.cost, out.chosen)
        second = format_solution(args.problem, again.cost, again.chosen)
        if first != second:
            print("seed-check: re-solve produced a different solution",
                  file=sys.stderr)
            return EXIT_VERIFY_FAIL

    opt = ratio = None
    if args.oracle:
        opt = _oracle_for(args.problem, inst).cost
        ratio = ratio_of(out.cost, opt)

    if args.dump_lp:
        if out.dump is None:
            raise ValueError(f"--dump-lp is not available for {args.problem}: "
                             "the augmentation rounds are not LP-driven")
        num_vars, objective, rows = out.dump
        with open(args.dump_lp, "w", encoding="utf-8") as handle:
            handle.write(format_lp_text(num_vars, objective, rows))

    m = inst.num_links if isinstance(inst, LinkCoverInstance) else inst.m
    record = RunRecord(
        problem=args.problem, seed=0, n=inst.n, m=m,
        param=param_of(args.problem, inst), lp=out.lp, alg=out.cost,
        opt=opt, ratio=ratio, ms=ms, restarts=out.restarts)

    sys.stdout.write(format_solution(args.problem, out.cost, out.chosen))
    for line in out.notes:
        print(line, file=sys.stderr)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as handle:
            handle.write(to_json([record]))
    else:
        fields = [f"problem={record.problem}", f"seed={record.seed}",
                  f"n={record.n}", f"m={record.m}", f"param={record.param}",
                  f"lp={fmt_rat(record.lp) if record.lp is not None else ''}",
                  f"alg={fmt_rat(record.alg)}",
                  f"opt={fmt_rat(record.opt) if record.opt is not None else ''}",
                  f"ratio={record.ratio:.6f}" if record.ratio is not None
                  else "ratio=",
                  f"ms={record.ms}", f"restarts={record.restarts}"]
        print("record " + " ".join(fields), file=sys.stderr)
    return EXIT_OK


def _side_of(mask: int) -> list[int]:
    return [v for v in range(mask.bit_length()) if (mask >> v) & 1]


def _first_violation(inst, chosen) -> Optional[str]:
    if isinstance(inst, FgcInstance):
        for mask in _cut_masks(inst.n):
            safe = unsafe = 0
            for i in chosen:
                e = inst.edges[i]
                if ((mask >> e.u) ^ (mask >> e.v)) & 1:
                    if e.safe:
                        safe += 1
                    else:
                        unsafe += 1
            if not fgc_cut_ok(inst.p, inst.q, safe, unsafe):
                return (f"cut {_side_of(mask)} has {safe} safe and {unsafe} "
                        f"unsafe edges, fails ({inst.p},{inst.q}) coverage")
        return None
    if isinstance(inst, CapEcssInstance):
        for mask in _cut_masks(inst.n):
            cap = sum(inst.edges[i].cap for i in chosen
                      if ((mask >> inst.edges[i].u)
                          ^ (mask >> inst.edges[i].v)) & 1)
            if cap < inst.k:
                return (f"cut {_side_of(mask)} has capacity {cap}, "
                        f"needs {inst.k}")
        return None
    family = small_cut_family(inst)
    for cut in family.cuts:
        hits = sum(1 for j in chosen
                   if cut.crosses(inst.links[j].u, inst.links[j].v))
        if hits < inst.r:
            return (f"small cut {sorted(cut.side)} gets {hits} links, "
                    f"needs {inst.r}")
    return None


def cmd_verify(args) -> int:
    inst = _load_instance(args.input, args.problem)
    with open(args.solution, "r", encoding="utf-8") as handle:
        token, cost, chosen = parse_solution(handle.read())
    if token != args.problem:
        raise ValueError(f"solution header says {token!r}, expected "
                         f"{args.problem!r}")
    count = (inst.num_links if isinstance(inst, LinkCoverInstance)
             else inst.m)
    bad = [i for i in chosen if not 0 <= i < count]
    if bad:
        raise ValueError(f"solution index {bad[0]} out of range "
                         f"(instance has {count} candidates)")
    members = inst.links if isinstance(inst, LinkCoverInstance) else inst.edges
    actual = sum((members[i].cost for i in chosen), rat(0))
    if actual != cost:
        print(f"FAIL: declared cost {fmt_rat(cost)}, edges sum to "
              f"{fmt_rat(actual)}")
        return EXIT_VERIFY_FAIL
    violated = _first_violation(inst, chosen)
    if violated is not None:
        print(f"FAIL: {violated}")
        return EXIT_VERIFY_FAIL
    print("OK")
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.problem == "fgc":
        if args.p is None or args.q is None:
            raise ValueError("gen --problem fgc needs --p and --q")
        inst = gen_fgc(seed=args.seed, n=args.n, m=args.m,
                       p=args.p, q=args.q, cost_max=args.cost_max)
    else:
        if args.k is None:
            raise ValueError("gen --problem capk needs --k")
        inst = gen_capk(seed=args.seed, n=args.n, m=args.m, k=args.k,
                        cost_max=args.cost_max)
    text = serialize(inst)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bench(args) -> int:
    wanted = args.problems.split(",") if args.problems else list(BENCH_PROBLEMS)
    for name in wanted:
        if name not in BENCH_PROBLEMS:
            raise ValueError(f"unknown bench problem {name!r}; choose from "
                             + ",".join(BENCH_PROBLEMS))
    records = []
    for name in wanted:
        records.extend(run_suite(name, args.count, stable=args.stable))
    width = max(len("problem"), max(len(name) for name in wanted))
    print(f"{'problem'.ljust(width)}  runs  min      median   max")
    stats = summarize(records)
    for name in sorted(wanted):
        lo, mid, hi = stats[name]
        runs = sum(1 for r in records if r.problem == name)
        print(f"{name.ljust(width)}  {runs:<4}  {lo:<7.3f}  {mid:<7.3f}  "
              f"{hi:<7.3f}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as handle:
            handle.write(to_csv(records))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as handle:
            handle.write(to_json(records))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="netdesign",
                     description="Network design solvers with exact rational "
                                 "LP relaxations and brute-force oracles.")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve an instance file")
    solve.add_argument("--problem", required=True, choices=PROBLEMS)
    solve.add_argument("--input", required=True, help="instance file")
    solve.add_argument("--oracle", action="store_true",
                       help="also run the exact oracle and report the ratio")
    solve.add_argument("--json", metavar="FILE",
                       help="write the run record as JSON instead of stderr")
    solve.add_argument("--seed-check", action="store_true",
                       help="solve twice and fail unless outputs match")
    solve.add_argument("--dump-lp", metavar="FILE",
                       help="write the final relaxation in LP text format")
    solve.add_argument("--cip", choices=("exact", "greedy"), default="exact",
                       help="covering-program solver for pqfgc")
    solve.set_defaults(func=cmd_solve)

    verify = sub.add_parser("verify", help="check a solution file")
    verify.add_argument("--problem", required=True, choices=PROBLEMS)
    verify.add_argument("--input", required=True, help="instance file")
    verify.add_argument("--solution", required=True, help="solution file")
    verify.set_defaults(func=cmd_verify)

    gen = sub.add_parser("gen", help="write a random instance file")
    gen.add_argument("--problem", required=True, choices=("fgc", "capk"))
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--p", type=int)
    gen.add_argument("--q", type=int)
    gen.add_argument("--k", type=int)
    gen.add_argument("--cost-max", type=int, default=10)
    gen.add_argument("--out", metavar="FILE")
    gen.set_defaults(func=cmd_gen)

    bench = sub.add_parser("bench", help="run the seeded benchmark suites")
    bench.add_argument("--problems",
                       help="comma-separated subset of: "
                            + ",".join(BENCH_PROBLEMS))
    bench.add_argument("--count", type=int, default=10,
                       help="instances per problem kind")
    bench.add_argument("--csv", metavar="FILE")
    bench.add_argument("--json", metavar="FILE")
    bench.add_argument("--stable", action="store_true",
                       help="zero the wall-time column for reproducible files")
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:
        return int(stop.code or 0)
    try:
        return args.func(args)
    except (OSError, ParseError, ValueError) as exc:
        print(f"netdesign: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Infeasible, LpInfeasible) as exc:
        print(f"netdesign: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InstanceTooLarge, TooManyEdges, TooManyLinks) as exc:
        print(f"netdesign: instance too large: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE


if __name__ == "__main__":
    sys.exit(main())
