"""Dense two-phase simplex over the rationals.

Problems here have at most a few dozen rows and columns, so a textbook
tableau with Bland's rule is fast enough and, being exact, returns
certificates that can be verified without tolerances.

All variables are constrained to be nonnegative; callers shift or split
free variables themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    objective: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def _pivot(tableau: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    prow = tableau[row]
    p = prow[col]
    if p != _ONE:
        prow[:] = [v / p for v in prow]
    for r, other in enumerate(tableau):
        if r == row:
            continue
        f = other[col]
        if f:
            other[:] = [a - f * b for a, b in zip(other, prow)]
    basis[row] = col


def _run(tableau, basis, cost, allowed) -> str:
    """Minimize ``cost . x`` from a canonical tableau; mutates in place."""
    width = len(cost)
    while True:
        entering = None
        for j in range(width):
            if not allowed[j] or j in basis:
                continue
            reduced = cost[j] - sum(cost[basis[i]] * tableau[i][j] for i in range(len(basis)))
            if reduced < 0:
                entering = j
                break
        if entering is None:
            return OPTIMAL
        leaving = None
        best = None
        for i, row in enumerate(tableau):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best, leaving = ratio, i
        if leaving is None:
            return UNBOUNDED
        _pivot(tableau, basis, leaving, entering)


def solve_lp(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
             A_eq: Sequence[Sequence] = (), b_eq: Sequence = (),
             maximize: bool = False) -> LPResult:
    """Optimize ``c . x`` subject to ``A_ub x <= b_ub``, ``A_eq x == b_eq``, ``x >= 0``."""
    n = len(c)
    m_ub = len(A_ub)
    rows: list[list[Fraction]] = []
    for k, (row, b) in enumerate(zip(A_ub, b_ub)):
        rows.append([Fraction(v) for v in row] + [_ONE if j == k else _ZERO for j in range(m_ub)]
                    + [Fraction(b)])
    for row, b in zip(A_eq, b_eq):
        rows.append([Fraction(v) for v in row] + [_ZERO] * m_ub + [Fraction(b)])
    for row in rows:
        if len(row) != n + m_ub + 1:
            raise ValueError("constraint row length does not match the objective")
        if row[-1] < 0:
            row[:] = [-v for v in row]

    m = len(rows)
    width = n + m_ub
    tableau = [row[:-1] + [_ONE if j == i else _ZERO for j in range(m)] + [row[-1]]
               for i, row in enumerate(rows)]
    basis = [width + i for i in range(m)]
    phase1 = [_ZERO] * width + [_ONE] * m
    _run(tableau, basis, phase1, [True] * (width + m))
    if sum(tableau[i][-1] for i in range(m) if basis[i] >= width) > 0:
        return LPResult(INFEASIBLE)

    # drive zero-valued artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(tableau):
        if basis[i] >= width:
            col = next((j for j in range(width) if tableau[i][j] != 0), None)
            if col is None:
                del tableau[i]
                del basis[i]
                continue
            _pivot(tableau, basis, i, col)
        i += 1

    sign = -1 if maximize else 1
    cost = [sign * Fraction(v) for v in c] + [_ZERO] * (m_ub + m)
    allowed = [True] * width + [False] * m
    status = _run(tableau, basis, cost, allowed)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [_ZERO] * width
    for i, j in enumerate(basis):
        x[j] = tableau[i][-1]
    sol = tuple(x[:n])
    obj = sum((Fraction(ci) * xi for ci, xi in zip(c, sol)), _ZERO)
    return LPResult(OPTIMAL, sol, obj)


def find_feasible(A_eq: Sequence[Sequence], b_eq: Sequence, A_ub: Sequence[Sequence] = (),
                  b_ub: Sequence = ()) -> tuple[Fraction, ...] | None:
    """Some nonnegative solution of the constraints, or None."""
    n = len(A_eq[0]) if A_eq else len(A_ub[0])
    res = solve_lp([0] * n, A_ub, b_ub, A_eq, b_eq)
    return res.x if res.status == OPTIMAL else None
