"""Exact two-phase simplex over the rationals (Bland's rule, so it terminates).

Solves ``maximize c.z  subject to  A z = b,  z >= 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows = rows      # list of lists of Fraction
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r, c):
        row = self.rows[r]
        inv = 1 / row[c]
        if inv != 1:
            self.rows[r] = row = [x * inv for x in row]
            self.rhs[r] *= inv
        for i, other in enumerate(self.rows):
            if i != r and other[c] != 0:
                f = other[c]
                self.rows[i] = [a - f * b if b else a for a, b in zip(other, row)]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = c

    def reduced_costs(self, cost):
        # cost_j - sum_i cost_{basis_i} * rows[i][j]
        red = list(cost)
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                red = [rj - cb * a for rj, a in zip(red, self.rows[i])]
        return red

    def optimise(self, cost, allowed) -> bool:
        """Maximise ``cost``; return False if unbounded."""
        while True:
            red = self.reduced_costs(cost)
            enter = next((j for j in range(len(cost)) if allowed[j] and red[j] > 0), None)
            if enter is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], enter)


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    n = len(c)
    m = len(A)
    rows = []
    rhs = []
    for row, bi in zip(A, b):
        row = [Fraction(x) for x in row]
        bi = Fraction(bi)
        if bi < 0:
            row, bi = [-x for x in row], -bi
        rows.append(row)
        rhs.append(bi)
    # artificial variables n .. n+m-1
    for i in range(m):
        rows[i] = rows[i] + [Fraction(int(i == j)) for j in range(m)]
    tab = _Tableau(rows, rhs, [n + i for i in range(m)])
    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    tab.optimise(phase1, [True] * (n + m))
    if sum(tab.rhs[i] for i in range(m) if tab.basis[i] >= n) != 0:
        return LPResult(INFEASIBLE)
    # drive artificials out of the basis; rows where that is impossible are redundant
    keep = []
    for i in range(len(tab.rows)):
        if tab.basis[i] >= n:
            j = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if j is None:
                continue
            tab.pivot(i, j)
        keep.append(i)
    tab.rows = [tab.rows[i][:n] for i in keep]
    tab.rhs = [tab.rhs[i] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]
    cost = [Fraction(x) for x in c]
    if not tab.optimise(cost, [True] * n):
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * n
    for i, bv in enumerate(tab.basis):
        x[bv] = tab.rhs[i]
    value = sum((ci * xi for ci, xi in zip(cost, x)), Fraction(0))
    return LPResult(OPTIMAL, value, tuple(x))
