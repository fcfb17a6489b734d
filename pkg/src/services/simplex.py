"""
Exact two-phase simplex over Fractions with Bland's rule.

Solves  max c.x  subject to  A x = b,  x >= 0.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Optional, Sequence

from ..utils.logger import get_logger

logger = get_logger(__name__)

LPStatus = Literal["optimal", "infeasible", "unbounded"]


@dataclass(frozen=True)
class LPResult:
    """Outcome of ``maximize``; value and solution are set only when optimal."""
    status: LPStatus
    value: Optional[Fraction] = None
    solution: tuple[Fraction, ...] = field(default_factory=tuple)


class SimplexTableau:
    """
    Dense tableau with one artificial column per row.

    Columns 0..n-1 are the original variables, n..n+m-1 the artificials;
    the last entry of every row is the right-hand side.
    """

    def __init__(self, A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], n: int):
        self.n = n
        self.m = len(A)
        self.rows: list[list[Fraction]] = []
        for i, (row, rhs) in enumerate(zip(A, b)):
            sign = -1 if rhs < 0 else 1
            artificial = [Fraction(1) if r == i else Fraction(0) for r in range(self.m)]
            self.rows.append([Fraction(sign * a) for a in row] + artificial + [Fraction(sign * rhs)])
        self.basis: list[int] = [n + i for i in range(self.m)]
        self.allowed: list[bool] = [True] * (n + self.m)
        self.pivots = 0

    @property
    def width(self) -> int:
        return self.n + self.m

    def pivot(self, i: int, j: int) -> None:
        row = self.rows[i]
        piv = row[j]
        self.rows[i] = row = [value / piv for value in row]
        for r, other in enumerate(self.rows):
            if r != i and other[j] != 0:
                f = other[j]
                self.rows[r] = [a - f * p for a, p in zip(other, row)]
        self.basis[i] = j
        self.pivots += 1

    def reduced_costs(self, cost: Sequence[Fraction]) -> list[Fraction]:
        return [
            cost[j] - sum((cost[self.basis[i]] * self.rows[i][j] for i in range(len(self.rows))), Fraction(0))
            for j in range(self.width)
        ]

    def objective(self, cost: Sequence[Fraction]) -> Fraction:
        return sum((cost[self.basis[i]] * row[-1] for i, row in enumerate(self.rows)), Fraction(0))

    def bland_step(self, cost: Sequence[Fraction]) -> str:
        """One pivot; returns 'optimal', 'unbounded' or 'go_on'."""
        d = self.reduced_costs(cost)
        entering = [j for j in range(self.width) if self.allowed[j] and d[j] > 0]
        if not entering:
            return "optimal"
        j = min(entering)
        candidates = [
            (row[-1] / row[j], self.basis[i], i)
            for i, row in enumerate(self.rows)
            if row[j] > 0
        ]
        if not candidates:
            return "unbounded"
        _, _, i = min(candidates)
        self.pivot(i, j)
        return "go_on"

    def run(self, cost: Sequence[Fraction]) -> str:
        while True:
            status = self.bland_step(cost)
            if status != "go_on":
                return status

    def drive_out_artificials(self) -> None:
        """Pivot artificial variables out of the basis; drop redundant rows."""
        i = 0
        while i < len(self.rows):
            if self.basis[i] >= self.n:
                row = self.rows[i]
                j = next((col for col in range(self.n) if row[col] != 0), None)
                if j is None:
                    del self.rows[i]
                    del self.basis[i]
                    continue
                self.pivot(i, j)
            i += 1
        for j in range(self.n, self.width):
            self.allowed[j] = False

    def solution(self) -> tuple[Fraction, ...]:
        x = [Fraction(0)] * self.n
        for i, j in enumerate(self.basis):
            if j < self.n:
                x[j] = self.rows[i][-1]
        return tuple(x)


def maximize(
    c: Sequence[Fraction],
    A_eq: Sequence[Sequence[Fraction]],
    b_eq: Sequence[Fraction],
) -> LPResult:
    """
    Maximize c.x subject to A_eq x = b_eq and x >= 0, exactly.

    Args:
        c: Objective coefficients, one per variable
        A_eq: Constraint rows
        b_eq: Right-hand sides; negative rows are negated

    Returns:
        LPResult
    """
    n = len(c)
    if any(len(row) != n for row in A_eq) or len(A_eq) != len(b_eq):
        raise ValueError("constraint matrix does not match objective and right-hand side")

    tableau = SimplexTableau(A_eq, b_eq, n)
    phase_one = [Fraction(0)] * n + [Fraction(-1)] * tableau.m
    tableau.run(phase_one)
    if tableau.objective(phase_one) < 0:
        logger.debug(f"LP infeasible after {tableau.pivots} pivots")
        return LPResult(status="infeasible")

    tableau.drive_out_artificials()
    phase_two = [Fraction(value) for value in c] + [Fraction(0)] * tableau.m
    status = tableau.run(phase_two)
    if status == "unbounded":
        logger.debug(f"LP unbounded after {tableau.pivots} pivots")
        return LPResult(status="unbounded")
    solution = tableau.solution()
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, solution)), Fraction(0))
    logger.debug(f"LP optimal value {value} after {tableau.pivots} pivots")
    return LPResult(status="optimal", value=value, solution=solution)
