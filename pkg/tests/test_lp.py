"""Exact LP pieces: rows, vertex simplex, cutting plane, knapsack rows.

The simplex is cross-checked against an independent vertex enumerator
built on fractions.Fraction: every basic point of the box-plus-rows
polytope is generated by solving square subsystems, so the two
implementations share no code.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from netdesign.errors import InvariantViolated, LpInfeasible
from netdesign.instances import Cut
from netdesign.lp import (CapView, FractionalSolution, LpProblem, LpRow,
                          SeparationResult, base_row, cutting_plane,
                          dominant_rows, format_lp_text, kci_row, make_row,
                          scaled, solve_vertex, violation)
from netdesign.rational import Rat, rat


def test_make_row_merges_sorts_and_drops_zeros():
    row = make_row([(2, rat(1)), (0, rat(3)), (2, rat(-1)), (1, rat(2))],
                   rat(4), key="k")
    assert row.coeffs == ((0, rat(3)), (1, rat(2)))
    assert row.rhs == 4
    same = make_row({0: rat(3), 1: rat(2)}, rat(4), key="k")
    assert same.coeffs == row.coeffs


def test_dominant_rows_drops_entailed():
    strong = make_row({0: rat(1)}, rat(2), key="strong")
    weak = make_row({0: rat(1), 1: rat(1)}, rat(1), key="weak")
    kept = dominant_rows([weak, strong])
    assert kept == [strong]
    kept = dominant_rows([strong, weak])
    assert kept == [strong]


def test_scaled_clamps_and_zeroes():
    sol = scaled([rat("1/3"), rat("3/4"), rat("1/2")], rat(2), {0, 1})
    assert sol.values == (rat("2/3"), rat(1), rat(0))
    assert not sol.is_vertex


def brute_force_optimum(lp: LpProblem) -> Fraction | None:
    """Minimum objective over all vertices of {0 <= x <= 1, Ax >= b}."""
    n = lp.num_vars
    constraints = []
    for row in lp.rows:
        line = [Fraction(0)] * n
        for j, c in row.coeffs:
            line[j] = Fraction(int(c.numerator), int(c.denominator))
        constraints.append((line, Fraction(int(row.rhs.numerator),
                                           int(row.rhs.denominator))))
    for j in range(n):
        lo = [Fraction(0)] * n
        lo[j] = Fraction(1)
        constraints.append((lo, Fraction(0)))
        hi = [Fraction(0)] * n
        hi[j] = Fraction(-1)
        constraints.append((hi, Fraction(-1)))

    def solve_square(system):
        a = [line[:] + [rhs] for line, rhs in system]
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col] != 0), None)
            if piv is None:
                return None
            a[col], a[piv] = a[piv], a[col]
            inv = a[col][col]
            a[col] = [x / inv for x in a[col]]
            for r in range(n):
                if r != col and a[r][col] != 0:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return [a[r][n] for r in range(n)]

    obj = [Fraction(int(c.numerator), int(c.denominator))
           for c in lp.objective]
    best = None
    for subset in itertools.combinations(range(len(constraints)), n):
        point = solve_square([constraints[i] for i in subset])
        if point is None:
            continue
        if any(sum(l * x for l, x in zip(line, point)) < rhs
               for line, rhs in constraints):
            continue
        value = sum(c * x for c, x in zip(obj, point))
        if best is None or value < best:
            best = value
    return best


def random_lp(rng: random.Random, allow_negative: bool) -> LpProblem:
    n = rng.randint(1, 3)
    rows = []
    for i in range(rng.randint(1, 4)):
        coeffs = {}
        for j in range(n):
            if rng.random() < 0.7:
                c = rng.randint(-2, 4) if allow_negative else rng.randint(0, 4)
                if c:
                    coeffs[j] = rat(c)
        if not coeffs:
            continue
        # keep the row satisfiable inside the unit box
        top = sum(c for c in coeffs.values() if c > 0)
        rhs = rat(rng.randint(0, 3))
        if rhs > top:
            rhs = top
        rows.append(make_row(coeffs, rhs, key=("r", i)))
    objective = [rat(rng.randint(0, 9)) for _ in range(n)]
    return LpProblem(num_vars=n, objective=tuple(objective), rows=tuple(rows))


def test_solve_vertex_matches_fraction_enumeration():
    infeasible_seen = 0
    for seed in range(120):
        rng = random.Random(seed)
        lp = random_lp(rng, allow_negative=bool(seed % 2))
        expected = brute_force_optimum(lp)
        if expected is None:
            # negative coefficients can make rows jointly unsatisfiable
            with pytest.raises(LpInfeasible):
                solve_vertex(lp)
            infeasible_seen += 1
            continue
        sol = solve_vertex(lp)
        assert sol.is_vertex
        got = Fraction(int(sol.objective.numerator),
                       int(sol.objective.denominator))
        assert got == expected
    assert infeasible_seen < 30


def test_solve_vertex_infeasible_raises():
    lp = LpProblem(num_vars=1, objective=(rat(1),),
                   rows=(make_row({0: rat(1)}, rat(2), key="impossible"),))
    with pytest.raises(LpInfeasible):
        solve_vertex(lp)


def test_cutting_plane_reaches_the_full_lp():
    # lazily separated covering constraints x_i + x_j >= 1 on three vars
    wanted = [make_row({0: rat(1), 1: rat(1)}, rat(1), key=("pair", 0, 1)),
              make_row({1: rat(1), 2: rat(1)}, rat(1), key=("pair", 1, 2)),
              make_row({0: rat(1), 2: rat(1)}, rat(1), key=("pair", 0, 2))]

    def separate(sol: FractionalSolution) -> SeparationResult:
        for row in wanted:
            if violation(row, sol.values) > 0:
                return SeparationResult.cut_off(row)
        return SeparationResult.ok()

    result = cutting_plane(3, (rat(2), rat(1), rat(2)), [], separate)
    assert result.solution.objective == rat("5/2")
    assert result.iterations >= 3


def test_cutting_plane_rejects_lying_oracle():
    satisfied = make_row({0: rat(1)}, rat(0), key="sat")

    def bad(sol: FractionalSolution) -> SeparationResult:
        return SeparationResult.cut_off(satisfied)

    with pytest.raises(InvariantViolated):
        cutting_plane(1, (rat(1),), [], bad)


def test_cutting_plane_iteration_limit():
    fresh = iter(range(10**6))

    def endless(sol: FractionalSolution) -> SeparationResult:
        return SeparationResult.cut_off(
            make_row({0: rat(1)}, rat(1), key=("again", next(fresh))))

    with pytest.raises(InvariantViolated):
        # the second identical row is satisfied by the first solve
        cutting_plane(1, (rat(1),), [], endless, iteration_limit=5)


def gap_view(k: int) -> CapView:
    return CapView(n=2, pairs=((0, 1), (0, 1)), caps=(rat(k - 1), rat(k)),
                   demand=rat(k), label="gap")


def test_kci_row_residual_and_clipping():
    view = gap_view(5)
    cut = Cut(side=frozenset({1}), weight=rat(0))
    row = kci_row(view, cut, fixed=frozenset({0}))
    # the fixed cheap edge leaves residual one; the big edge clips to one
    assert row.residual == 1
    assert row.coeffs == ((1, rat(1)),)
    assert not row.satisfied_by([rat(1), rat("1/5")])
    assert row.satisfied_by([rat(1), rat(1)])
    plain = base_row(view, cut)
    assert plain.coeffs == ((0, rat(4)), (1, rat(5)))
    assert plain.rhs == 5


def test_kci_row_zero_residual_is_trivial():
    view = gap_view(3)
    cut = Cut(side=frozenset({1}), weight=rat(0))
    row = kci_row(view, cut, fixed=frozenset({0, 1}))
    assert row.residual == 0
    assert row.coeffs == ()
    assert row.satisfied_by([rat(0), rat(0)])


def test_format_lp_text_layout():
    rows = (make_row({0: rat(3), 1: rat(1)}, rat(3), key="a"),
            make_row({1: rat("1/2")}, rat(1), key="b"))
    text = format_lp_text(2, (rat(2), rat(0)), rows)
    lines = text.splitlines()
    assert lines[0] == "Minimize"
    assert lines[1].startswith(" obj:")
    assert "Subject To" in lines
    assert any("r0:" in line and ">=" in line for line in lines)
    assert lines[-1] == "End"
