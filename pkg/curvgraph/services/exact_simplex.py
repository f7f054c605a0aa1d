"""
Exact rational two-phase simplex (Bland's rule) for small dense LPs:

    minimize c.x  subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0

All arithmetic is done in `fractions.Fraction`, so the optimum is exact and
Bland's rule guarantees termination.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

logger = logging.getLogger(__name__)

Number = Fraction


@dataclass
class ExactLPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: Optional[List[Fraction]] = None
    objective: Optional[Fraction] = None
    pivots: int = 0


class SimplexTableau:
    """Dense tableau in canonical form; row i has basic variable basis[i]."""

    def __init__(self, rows: List[List[Fraction]], rhs: List[Fraction], basis: List[int]):
        self.A = rows
        self.b = rhs
        self.basis = basis
        self.m = len(rows)
        self.n = len(rows[0]) if rows else 0
        self.pivots = 0

    def pivot(self, i: int, j: int) -> None:
        row = self.A[i]
        piv = row[j]
        self.A[i] = [a / piv for a in row]
        self.b[i] = self.b[i] / piv
        row = self.A[i]
        for k in range(self.m):
            if k == i:
                continue
            f = self.A[k][j]
            if f != 0:
                self.A[k] = [a - f * r for a, r in zip(self.A[k], row)]
                self.b[k] -= f * self.b[i]
        self.basis[i] = j
        self.pivots += 1

    def reduced_costs(self, c: Sequence[Fraction]) -> List[Fraction]:
        d = list(c)
        for i, bv in enumerate(self.basis):
            cb = c[bv]
            if cb != 0:
                d = [dj - cb * a for dj, a in zip(d, self.A[i])]
        return d

    def objective(self, c: Sequence[Fraction]) -> Fraction:
        return sum((c[bv] * self.b[i] for i, bv in enumerate(self.basis)), Fraction(0))

    def bland(self, c: Sequence[Fraction], allowed: int) -> str:
        """Minimize c over the current basis, entering only among the first `allowed` columns."""
        while True:
            d = self.reduced_costs(c)
            entering = next((j for j in range(allowed) if d[j] < 0), None)
            if entering is None:
                return "optimal"
            candidates = [
                (self.b[i] / self.A[i][entering], self.basis[i], i)
                for i in range(self.m)
                if self.A[i][entering] > 0
            ]
            if not candidates:
                return "unbounded"
            _, _, leave = min(candidates)
            self.pivot(leave, entering)

    def solution(self, n: int) -> List[Fraction]:
        x = [Fraction(0)] * n
        for i, bv in enumerate(self.basis):
            if bv < n:
                x[bv] = self.b[i]
        return x


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def solve_exact(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> ExactLPResult:
    n = len(c)
    n_ub = len(A_ub)
    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    needs_artificial: List[bool] = []

    # columns: x (n) | slacks (n_ub) | artificials (added below)
    for k, (a, b) in enumerate(zip(A_ub, b_ub)):
        row = [_frac(v) for v in a] + [Fraction(0)] * n_ub
        row[n + k] = Fraction(1)
        b = _frac(b)
        if b < 0:
            row = [-v for v in row]
            b = -b
        rows.append(row)
        rhs.append(b)
        needs_artificial.append(row[n + k] < 0)
    for a, b in zip(A_eq, b_eq):
        row = [_frac(v) for v in a] + [Fraction(0)] * n_ub
        b = _frac(b)
        if b < 0:
            row = [-v for v in row]
            b = -b
        rows.append(row)
        rhs.append(b)
        needs_artificial.append(True)

    n_struct = n + n_ub
    artificial_rows = [i for i, flag in enumerate(needs_artificial) if flag]
    n_total = n_struct + len(artificial_rows)
    basis = []
    art_col = n_struct
    for i, row in enumerate(rows):
        row.extend([Fraction(0)] * len(artificial_rows))
        if needs_artificial[i]:
            row[art_col] = Fraction(1)
            basis.append(art_col)
            art_col += 1
        else:
            basis.append(n + i)

    tableau = SimplexTableau(rows, rhs, basis)

    if artificial_rows:
        phase1 = [Fraction(0)] * n_struct + [Fraction(1)] * len(artificial_rows)
        tableau.bland(phase1, n_struct)
        if tableau.objective(phase1) != 0:
            logger.debug(f"Exact simplex: infeasible after {tableau.pivots} pivots.")
            return ExactLPResult(status="infeasible", pivots=tableau.pivots)
        # drive zero-level artificials out of the basis; drop redundant rows
        keep = []
        for i in range(tableau.m):
            if tableau.basis[i] >= n_struct:
                j = next((j for j in range(n_struct) if tableau.A[i][j] != 0), None)
                if j is None:
                    continue
                tableau.pivot(i, j)
            keep.append(i)
        tableau.A = [tableau.A[i][:n_struct] for i in keep]
        tableau.b = [tableau.b[i] for i in keep]
        tableau.basis = [tableau.basis[i] for i in keep]
        tableau.m = len(keep)
        tableau.n = n_struct

    cost = [_frac(v) for v in c] + [Fraction(0)] * n_ub
    status = tableau.bland(cost, n_struct)
    if status == "unbounded":
        return ExactLPResult(status="unbounded", pivots=tableau.pivots)
    x = tableau.solution(n)
    objective = sum((cost[j] * x[j] for j in range(n)), Fraction(0))
    logger.debug(f"Exact simplex: optimum {objective} after {tableau.pivots} pivots (n_total={n_total}).")
    return ExactLPResult(status="optimal", x=x, objective=objective, pivots=tableau.pivots)
