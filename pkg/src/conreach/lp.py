"""Exact rational linear programming.

Two-phase primal simplex with Bland's rule on a dense Fraction tableau.
Intended for the desk-scale problems this package works with; no attempt is
made at sparse or revised-simplex efficiency.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None


def solve_lp(objective: Sequence[Fraction],
             ineq_rows: Sequence[Sequence[Fraction]],
             ineq_rhs: Sequence[Fraction],
             eq_rows: Sequence[Sequence[Fraction]] = (),
             eq_rhs: Sequence[Fraction] = (),
             maximize: bool = True) -> LPResult:
    """max (or min) c.x subject to G x <= h and E x = f, x free."""
    dim = len(objective)
    obj = [Fraction(x) for x in objective]
    if not maximize:
        obj = [-x for x in obj]

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    is_eq: list[bool] = []
    for row, b in zip(ineq_rows, ineq_rhs):
        rows.append([Fraction(x) for x in row])
        rhs.append(Fraction(b))
        is_eq.append(False)
    for row, b in zip(eq_rows, eq_rhs):
        rows.append([Fraction(x) for x in row])
        rhs.append(Fraction(b))
        is_eq.append(True)

    m = len(rows)
    nslack = sum(1 for e in is_eq if not e)
    # columns: x+ (dim), x- (dim), slacks (nslack), artificials (appended below)
    ncols = 2 * dim + nslack
    tableau: list[list[Fraction]] = []
    basis: list[int] = []
    artificial_start = ncols
    slack_idx = 0
    art_rows: list[int] = []
    for i in range(m):
        row = rows[i]
        body = [row[j] for j in range(dim)] + [-row[j] for j in range(dim)]
        body += [Fraction(0)] * nslack
        if not is_eq[i]:
            body[2 * dim + slack_idx] = Fraction(1)
        b = rhs[i]
        if b < 0:
            body = [-x for x in body]
            b = -b
        if not is_eq[i] and body[2 * dim + slack_idx] == 1:
            basis.append(2 * dim + slack_idx)
        else:
            art_rows.append(i)
            basis.append(-1)  # patched to an artificial column below
        if not is_eq[i]:
            slack_idx += 1
        tableau.append(body + [b])

    nart = len(art_rows)
    total = ncols + nart
    for row in tableau:
        row[-1:-1] = [Fraction(0)] * nart
    for k, i in enumerate(art_rows):
        tableau[i][ncols + k] = Fraction(1)
        basis[i] = ncols + k

    if nart:
        phase1 = [Fraction(0)] * total
        for k in range(nart):
            phase1[ncols + k] = Fraction(-1)
        status = _optimize(tableau, basis, phase1, total)
        if status != OPTIMAL:
            raise ArithmeticError("phase-1 simplex cannot be unbounded")
        p1_value = sum((phase1[basis[i]] * tableau[i][-1] for i in range(m)), Fraction(0))
        if p1_value != 0:
            return LPResult(status=INFEASIBLE)
        _purge_artificials(tableau, basis, ncols)

    cost = [Fraction(0)] * total
    for j in range(dim):
        cost[j] = obj[j]
        cost[dim + j] = -obj[j]
    status = _optimize(tableau, basis, cost, ncols)
    if status == UNBOUNDED:
        return LPResult(status=UNBOUNDED)

    point = [Fraction(0)] * dim
    for i, b in enumerate(basis):
        if b < dim:
            point[b] += tableau[i][-1]
        elif b < 2 * dim:
            point[b - dim] -= tableau[i][-1]
    value = sum((obj[j] * point[j] for j in range(dim)), Fraction(0))
    if not maximize:
        value = -value
    return LPResult(status=OPTIMAL, value=value, point=tuple(point))


def _optimize(tableau: list[list[Fraction]], basis: list[int],
              cost: list[Fraction], usable_cols: int) -> str:
    """Maximize cost.x over the tableau in place; Bland's rule, no cycling."""
    m = len(tableau)
    while True:
        entering = -1
        for j in range(usable_cols):
            reduced = cost[j] - sum((cost[basis[i]] * tableau[i][j] for i in range(m)),
                                    Fraction(0))
            if reduced > 0:
                entering = j
                break
        if entering < 0:
            return OPTIMAL
        leaving = -1
        best: Fraction | None = None
        for i in range(m):
            coeff = tableau[i][entering]
            if coeff > 0:
                ratio = tableau[i][-1] / coeff
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best = ratio
                    leaving = i
        if leaving < 0:
            return UNBOUNDED
        _pivot(tableau, basis, leaving, entering)


def _pivot(tableau: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    pivot = tableau[row][col]
    inv = 1 / pivot
    tableau[row] = [x * inv for x in tableau[row]]
    prow = tableau[row]
    for i, r in enumerate(tableau):
        if i != row and r[col] != 0:
            factor = r[col]
            tableau[i] = [x - factor * y for x, y in zip(r, prow)]
    basis[row] = col


def _purge_artificials(tableau: list[list[Fraction]], basis: list[int], ncols: int) -> None:
    """Pivot basic artificials out; drop rows that prove redundant."""
    i = 0
    while i < len(tableau):
        if basis[i] >= ncols:
            col = next((j for j in range(ncols) if tableau[i][j] != 0), None)
            if col is None:
                del tableau[i]
                del basis[i]
                continue
            _pivot(tableau, basis, i, col)
        i += 1
