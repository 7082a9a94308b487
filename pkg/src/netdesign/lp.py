"""Exact rational LP engine and knapsack-cover row machinery.

Everything here pivots on gmpy2 rationals; there are no floating-point
tolerances.  solve_vertex returns basic optimal solutions, which the rounding
algorithms rely on (a basic solution of the slack form is a vertex of the
box-constrained polytope).  Anti-cycling: the pivot loop runs Dantzig's rule
until the objective stalls, then falls back to Bland's rule, which cannot
cycle; it returns to Dantzig after the next strict improvement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Optional, Sequence

from .cuts import WeightedGraph
from .errors import (
    InvariantViolated,
    IterationLimitExceeded,
    LpInfeasible,
    LpUnbounded,
)
from .instances import Cut, EdgeSet
from .rational import ONE, Rat, ZERO, rat

_MAX_PIVOTS = 200_000


@dataclass(frozen=True)
class LpRow:
    """A single >= constraint with sparse nonnegative-index coefficients."""

    coeffs: tuple[tuple[int, Rat], ...]
    rhs: Rat
    key: Hashable
    tag: str = ""

    def lhs(self, values: Sequence[Rat]) -> Rat:
        return sum((c * values[j] for j, c in self.coeffs), ZERO)


def make_row(coeffs: Mapping[int, Rat] | Iterable[tuple[int, Rat]],
             rhs, key: Hashable, tag: str = "") -> LpRow:
    pairs = coeffs.items() if hasattr(coeffs, "items") else coeffs
    merged: dict[int, Rat] = {}
    for j, c in pairs:
        merged[j] = merged.get(j, ZERO) + rat(c)
    items = tuple(sorted((j, c) for j, c in merged.items() if c != 0))
    return LpRow(coeffs=items, rhs=rat(rhs), key=key, tag=tag)


@dataclass(frozen=True)
class LpProblem:
    """min objective . x  subject to rows (>=) and 0 <= x <= 1."""

    num_vars: int
    objective: tuple[Rat, ...]
    rows: tuple[LpRow, ...]

    def __post_init__(self):
        if len(self.objective) != self.num_vars:
            raise ValueError("objective length must match num_vars")
        object.__setattr__(self, "objective",
                           tuple(rat(c) for c in self.objective))
        for row in self.rows:
            for j, _ in row.coeffs:
                if not 0 <= j < self.num_vars:
                    raise ValueError(f"row {row.key!r} references variable {j}")


@dataclass(frozen=True)
class FractionalSolution:
    values: tuple[Rat, ...]
    objective: Optional[Rat]
    is_vertex: bool = False

    def __getitem__(self, j: int) -> Rat:
        return self.values[j]

    def support(self) -> EdgeSet:
        return frozenset(j for j, v in enumerate(self.values) if v > 0)


def violation(row: LpRow, values: Sequence[Rat]) -> Rat:
    """Positive iff the row is violated at the given point."""
    return row.rhs - row.lhs(values)


def _implies(stronger: LpRow, weaker: LpRow) -> bool:
    """True when the first row entails the second for all x >= 0."""
    if stronger.rhs < weaker.rhs:
        return False
    weak = dict(weaker.coeffs)
    return all(c <= weak.get(j, ZERO) for j, c in stronger.coeffs)


def dominant_rows(rows: Iterable[LpRow]) -> list[LpRow]:
    """Drop rows entailed by another row; keeps the first of any duplicates."""
    kept: list[LpRow] = []
    for row in rows:
        if any(_implies(k, row) for k in kept):
            continue
        kept = [k for k in kept if not _implies(row, k)]
        kept.append(row)
    return kept


def scaled(values: Sequence[Rat], factor, subset: Iterable[int]) -> FractionalSolution:
    """Scale the subset's entries by the factor, clamp at 1, zero elsewhere."""
    f = rat(factor)
    sub = set(subset)
    out = tuple(
        min(ONE, f * values[j]) if j in sub else ZERO
        for j in range(len(values))
    )
    return FractionalSolution(values=out, objective=None, is_vertex=False)


# ---------------------------------------------------------------------------
# simplex


def _pivot(rows, rhs, basis, zrow, zval, ip, jp):
    prow = rows[ip]
    piv = prow[jp]
    if piv != 1:
        inv = ONE / piv
        prow = [a * inv if a else a for a in prow]
        rows[ip] = prow
        rhs[ip] = rhs[ip] * inv
    prhs = rhs[ip]
    for i in range(len(rows)):
        if i == ip:
            continue
        f = rows[i][jp]
        if f:
            rows[i] = [a - f * b if b else a for a, b in zip(rows[i], prow)]
            rhs[i] = rhs[i] - f * prhs
    f = zrow[jp]
    if f:
        zrow[:] = [a - f * b if b else a for a, b in zip(zrow, prow)]
        zval = zval + f * prhs
    basis[ip] = jp
    return zval


def _entering(zrow, allowed, bland):
    if bland:
        for j in range(allowed):
            if zrow[j] > 0:
                return j
        return None
    best = None
    best_v = None
    for j in range(allowed):
        v = zrow[j]
        if v > 0 and (best is None or v > best_v):
            best, best_v = j, v
    return best


def _leaving(rows, rhs, basis, jp):
    best = None
    best_ratio = None
    for i in range(len(rows)):
        a = rows[i][jp]
        if a > 0:
            ratio = rhs[i] / a
            if (best is None or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[best])):
                best, best_ratio = i, ratio
    return best


def _optimize(rows, rhs, basis, zrow, zval, allowed):
    """Maximize over the current basic feasible tableau; returns final zval."""
    stall = 0
    stall_limit = 4 * (len(rows) + allowed) + 16
    bland = False
    for _ in range(_MAX_PIVOTS):
        jp = _entering(zrow, allowed, bland)
        if jp is None:
            return zval
        ip = _leaving(rows, rhs, basis, jp)
        if ip is None:
            raise LpUnbounded("no leaving row; box constraints should prevent this")
        old = zval
        zval = _pivot(rows, rhs, basis, zrow, zval, ip, jp)
        if zval > old:
            stall = 0
            bland = False
        else:
            stall += 1
            if stall >= stall_limit:
                bland = True
    raise InvariantViolated("pivot budget exhausted; simplex failed to terminate")


def _solve_nonneg(lp: LpProblem) -> FractionalSolution:
    """Single-phase path for rows with nonnegative coefficients.

    Substituting x = 1 - w turns every row into w-coverage at most d_i with
    d_i >= 0 exactly when x = all-ones satisfies the row; since coefficients
    are nonnegative, d_i < 0 proves the whole LP empty.  The all-slack basis
    is then immediately feasible and one maximization phase suffices.
    """
    n = lp.num_vars
    m = len(lp.rows)
    ncols = n + m + n
    rows = []
    rhs = []
    basis = []
    for i, row in enumerate(lp.rows):
        d = sum((c for _, c in row.coeffs), ZERO) - row.rhs
        if d < 0:
            raise LpInfeasible(f"row {row.key!r} cannot be met even by all-ones")
        vec = [ZERO] * ncols
        for j, c in row.coeffs:
            vec[j] = c
        vec[n + i] = ONE
        rows.append(vec)
        rhs.append(d)
        basis.append(n + i)
    for j in range(n):
        vec = [ZERO] * ncols
        vec[j] = ONE
        vec[n + m + j] = ONE
        rows.append(vec)
        rhs.append(ONE)
        basis.append(n + m + j)
    zrow = [lp.objective[j] if j < n else ZERO for j in range(ncols)]
    zval = _optimize(rows, rhs, basis, zrow, ZERO, ncols)
    w = [ZERO] * n
    for i, b in enumerate(basis):
        if b < n:
            w[b] = rhs[i]
    values = tuple(ONE - wj for wj in w)
    total = sum(lp.objective, ZERO) - zval
    return FractionalSolution(values=values, objective=total, is_vertex=True)


def _solve_general(lp: LpProblem) -> FractionalSolution:
    """Two-phase path for rows with coefficients of arbitrary sign."""
    n = lp.num_vars
    m = len(lp.rows)
    art_rows = []
    rows = []
    rhs = []
    basis = []
    base_cols = n + m + n
    for i, row in enumerate(lp.rows):
        vec = [ZERO] * base_cols
        b = row.rhs
        if b > 0:
            for j, c in row.coeffs:
                vec[j] = c
            vec[n + i] = -ONE
            art_rows.append(len(rows))
            basis.append(None)  # artificial assigned below
        else:
            for j, c in row.coeffs:
                vec[j] = -c
            vec[n + i] = ONE
            b = -b
            basis.append(n + i)
        rows.append(vec)
        rhs.append(b)
    for j in range(n):
        vec = [ZERO] * base_cols
        vec[j] = ONE
        vec[n + m + j] = ONE
        rows.append(vec)
        rhs.append(ONE)
        basis.append(n + m + j)
    ncols = base_cols + len(art_rows)
    for idx, i in enumerate(art_rows):
        col = base_cols + idx
        for r in range(len(rows)):
            rows[r].append(ONE if r == i else ZERO)
        basis[i] = col
    if art_rows:
        zrow = [ZERO] * ncols
        zval = ZERO
        for i in art_rows:
            for j in range(base_cols):
                zrow[j] += rows[i][j]
            zval -= rhs[i]
        zval = _optimize(rows, rhs, basis, zrow, zval, base_cols)
        if zval != 0:
            raise LpInfeasible("phase-1 optimum is nonzero")
        _expel_artificials(rows, rhs, basis, base_cols)
    zrow = [ZERO] * len(rows[0]) if rows else []
    obj = [-lp.objective[j] if j < n else ZERO for j in range(len(rows[0]))]
    zval = ZERO
    for j in range(len(rows[0])):
        zrow[j] = obj[j]
    for i, b in enumerate(basis):
        cb = obj[b]
        if cb:
            for j in range(len(rows[0])):
                if rows[i][j]:
                    zrow[j] -= cb * rows[i][j]
            zval += cb * rhs[i]
    zval = _optimize(rows, rhs, basis, zrow, zval, base_cols)
    values = [ZERO] * n
    for i, b in enumerate(basis):
        if b < n:
            values[b] = rhs[i]
    total = sum((lp.objective[j] * values[j] for j in range(n)), ZERO)
    return FractionalSolution(values=tuple(values), objective=total, is_vertex=True)


def _expel_artificials(rows, rhs, basis, base_cols):
    """Pivot zero-valued artificials out of the basis, dropping empty rows."""
    i = 0
    while i < len(rows):
        if basis[i] >= base_cols:
            jp = next((j for j in range(base_cols) if rows[i][j] != 0), None)
            if jp is None:
                del rows[i], rhs[i], basis[i]
                continue
            _pivot(rows, rhs, basis, [ZERO] * len(rows[0]), ZERO, i, jp)
        i += 1


def solve_vertex(lp: LpProblem) -> FractionalSolution:
    """Exact optimal vertex of {0 <= x <= 1, rows} minimizing the objective."""
    fast = all(c >= 0 for row in lp.rows for _, c in row.coeffs)
    sol = _solve_nonneg(lp) if fast else _solve_general(lp)
    for j, v in enumerate(sol.values):
        if not (0 <= v <= 1):
            raise InvariantViolated(f"variable {j} out of bounds: {v}")
    for row in lp.rows:
        if violation(row, sol.values) > 0:
            raise InvariantViolated(f"optimal point violates row {row.key!r}")
    return sol


# ---------------------------------------------------------------------------
# cutting-plane driver


@dataclass(frozen=True)
class SeparationResult:
    row: Optional[LpRow]
    tag: str = ""

    @classmethod
    def ok(cls) -> "SeparationResult":
        return cls(row=None, tag="feasible")

    @classmethod
    def cut_off(cls, row: LpRow) -> "SeparationResult":
        return cls(row=row, tag=row.tag)

    @property
    def feasible(self) -> bool:
        return self.row is None


@dataclass
class CuttingPlaneResult:
    solution: FractionalSolution
    rows: list[LpRow]
    iterations: int


def cutting_plane(num_vars: int,
                  objective: Sequence[Rat],
                  initial_rows: Iterable[LpRow],
                  separate: Callable[[FractionalSolution], SeparationResult],
                  iteration_limit: int = 100_000) -> CuttingPlaneResult:
    """Row generation: solve, ask the oracle, add the violated row, repeat.

    The oracle must return a row strictly violated by the solution it was
    handed; a satisfied or duplicate row means the oracle and the LP disagree,
    which is a bug, not a data error.
    """
    obj = tuple(rat(c) for c in objective)
    rows: list[LpRow] = []
    keys = set()
    for row in initial_rows:
        if row.key not in keys:
            keys.add(row.key)
            rows.append(row)
    prev = None
    for it in range(1, iteration_limit + 1):
        sol = solve_vertex(LpProblem(num_vars=num_vars, objective=obj,
                                     rows=tuple(rows)))
        if prev is not None and sol.objective < prev:
            raise InvariantViolated("objective decreased after adding a row")
        prev = sol.objective
        res = separate(sol)
        if res.feasible:
            for row in rows:
                if violation(row, sol.values) > 0:
                    raise InvariantViolated(f"returned point violates {row.key!r}")
            return CuttingPlaneResult(solution=sol, rows=rows, iterations=it)
        if violation(res.row, sol.values) <= 0:
            raise InvariantViolated(
                f"oracle returned a satisfied row {res.row.key!r}")
        if res.row.key in keys:
            raise InvariantViolated(f"oracle repeated row key {res.row.key!r}")
        keys.add(res.row.key)
        rows.append(res.row)
    raise IterationLimitExceeded(f"no feasible point within {iteration_limit} rounds")


# ---------------------------------------------------------------------------
# capacitated views and knapsack-cover rows


@dataclass(frozen=True)
class CapView:
    """A capacitated lens over some instance's edges: one capacity per edge
    and a single demand every cut must meet."""

    n: int
    pairs: tuple[tuple[int, int], ...]
    caps: tuple[Rat, ...]
    demand: Rat
    label: str

    def __post_init__(self):
        object.__setattr__(self, "caps", tuple(rat(c) for c in self.caps))
        object.__setattr__(self, "demand", rat(self.demand))

    def crossing(self, cut: Cut) -> list[int]:
        return [e for e, (u, v) in enumerate(self.pairs) if cut.crosses(u, v)]

    def graph(self, values: Sequence[Rat]) -> WeightedGraph:
        edges = tuple(
            (u, v, self.caps[e] * values[e])
            for e, (u, v) in enumerate(self.pairs)
        )
        return WeightedGraph(self.n, edges)

    def capacity_graph(self) -> WeightedGraph:
        edges = tuple(
            (u, v, self.caps[e]) for e, (u, v) in enumerate(self.pairs)
        )
        return WeightedGraph(self.n, edges)


@dataclass(frozen=True)
class KciRow:
    """Knapsack-cover inequality for one cut and one fixed edge set.

    Edges assumed bought (the fixed set) reduce the demand to the residual;
    every other crossing edge counts with its capacity clipped at that
    residual.  Valid for every integral solution regardless of how the fixed
    set was chosen.
    """

    cut: Cut
    fixed: frozenset[int]
    residual: Rat
    coeffs: tuple[tuple[int, Rat], ...]

    def key(self, label: str) -> Hashable:
        return ("kci", label, self.cut.mask, tuple(sorted(self.fixed)))

    def to_lp_row(self, label: str, tag: str = "kci") -> LpRow:
        return LpRow(coeffs=self.coeffs, rhs=self.residual,
                     key=self.key(label), tag=tag)

    def satisfied_by(self, values: Sequence[Rat]) -> bool:
        lhs = sum((c * values[j] for j, c in self.coeffs), ZERO)
        return lhs >= self.residual


def kci_row(view: CapView, cut: Cut, fixed: EdgeSet) -> KciRow:
    crossing = view.crossing(cut)
    fixed_here = frozenset(e for e in crossing if e in fixed)
    covered = sum((view.caps[e] for e in fixed_here), ZERO)
    residual = view.demand - covered
    if residual < 0:
        residual = ZERO
    coeffs = tuple(
        (e, min(view.caps[e], residual))
        for e in crossing
        if e not in fixed_here and view.caps[e] > 0 and residual > 0
    )
    return KciRow(cut=cut, fixed=fixed_here, residual=residual, coeffs=coeffs)


def base_row(view: CapView, cut: Cut, tag: str = "base") -> LpRow:
    """Plain capacity row: the knapsack-cover inequality with nothing fixed."""
    return kci_row(view, cut, frozenset()).to_lp_row(view.label, tag=tag)


def format_lp_text(num_vars: int, objective: Sequence[Rat],
                   rows: Iterable[LpRow]) -> str:
    """Render the LP in the common solver text format.

    Coefficients are printed as decimals, so exactness stops here; the
    dump exists for cross-checking against outside solvers, not for
    round-tripping.
    """
    def dec(value: Rat) -> str:
        return repr(float(value))

    def terms(pairs) -> str:
        parts = []
        for j, coeff in pairs:
            if coeff == 0:
                continue
            joiner = " + " if (not parts or coeff >= 0) else " - "
            lead = "" if not parts else joiner
            shown = dec(coeff if coeff >= 0 or not parts else -coeff)
            parts.append(f"{lead}{shown} x{j}")
        return "".join(parts) if parts else "0 x0"

    lines = ["Minimize",
             " obj: " + terms(enumerate(objective)),
             "Subject To"]
    for i, row in enumerate(rows):
        lines.append(f" r{i}: " + terms(row.coeffs) + f" >= {dec(row.rhs)}")
    lines.append("Bounds")
    for j in range(num_vars):
        lines.append(f" 0 <= x{j} <= 1")
    lines.append("End")
    return "\n".join(lines) + "\n"
