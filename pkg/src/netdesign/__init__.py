"""Survivable network design: flexible connectivity and capacitated cuts."""

from .capk import (Buckets, CapkSolveReport, Restart, bucket_split,
                   round_capk, separate_capk, solve_capk)
from .cover import (CoverFamily, CoverResult, cover_lp_value, exact_two_cover,
                    small_cut_family, wgmv_cover)
from .errors import (Infeasible, InstanceTooLarge, InvariantViolated,
                     IterationLimitExceeded, LpInfeasible, LpUnbounded,
                     NetDesignError, ParseError, RestartLimitExceeded,
                     RoundingStuck, TooManyEdges, TooManyLinks,
                     TwoCoverInfeasible)
from .fgc1q import Fgc1qReport, base_lp_value, solve_1q
from .fgc2q import Fgc2qReport, TwoCoverReport, solve_2q, two_cover_via_fgc2q
from .instances import (BaseEdge, CapEcssInstance, CapEdge, Cut, FgcEdge,
                        FgcInstance, Link, LinkCoverInstance, feasible_capk,
                        feasible_cover, feasible_fgc, format_solution,
                        gen_capk, gen_fgc, parse, parse_solution, serialize)
from .jain import CandidateEdge, FConnInstance, iterative_round
from .oracle import OracleResult, opt_capk, opt_cover, opt_fgc
from .pqfgc import (CapFormulation, CipProblem, capkecss_formulation,
                    check_formulation_inequalities, cip_solve_exact,
                    cip_solve_greedy, pq_fgc_augment)
from .rational import Rat, fmt_rat, parse_rat, rat

__all__ = [
    "BaseEdge", "Buckets", "CandidateEdge", "CapEcssInstance", "CapEdge",
    "CapFormulation", "CapkSolveReport", "CipProblem", "CoverFamily",
    "CoverResult", "Cut", "FConnInstance", "Fgc1qReport", "Fgc2qReport",
    "FgcEdge", "FgcInstance", "Infeasible", "InstanceTooLarge",
    "InvariantViolated", "IterationLimitExceeded", "Link",
    "LinkCoverInstance", "LpInfeasible", "LpUnbounded", "NetDesignError",
    "OracleResult", "ParseError", "Rat", "Restart", "RestartLimitExceeded",
    "RoundingStuck", "TooManyEdges", "TooManyLinks", "TwoCoverInfeasible",
    "TwoCoverReport", "base_lp_value", "bucket_split",
    "capkecss_formulation", "check_formulation_inequalities",
    "cip_solve_exact", "cip_solve_greedy", "cover_lp_value",
    "exact_two_cover", "feasible_capk", "feasible_cover", "feasible_fgc",
    "fmt_rat", "format_solution", "gen_capk", "gen_fgc", "iterative_round",
    "opt_capk", "opt_cover", "opt_fgc", "parse", "parse_rat",
    "parse_solution", "pq_fgc_augment", "rat", "round_capk", "separate_capk",
    "serialize", "small_cut_family", "solve_1q", "solve_2q", "solve_capk",
    "two_cover_via_fgc2q", "wgmv_cover",
]
