"""Dense-tableau two-phase simplex with Bland's anti-cycling rule.

Solves ``max c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq`` with
``x`` free (the default) or ``x >= 0``. Small and deterministic; meant for
instances with tens of variables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL = 1e-9


@dataclass
class SimplexResult:
    status: str  # "optimal" | "infeasible" | "unbounded" | "iteration-limit"
    x: np.ndarray
    objective: float
    pivots: int


class _Tableau:
    def __init__(self, T: np.ndarray, basis: list[int]) -> None:
        self.T = T
        self.basis = basis
        self.pivots = 0

    def pivot(self, row: int, col: int) -> None:
        T = self.T
        T[row] /= T[row, col]
        factors = T[:, col].copy()
        factors[row] = 0.0
        T -= np.outer(factors, T[row])
        T[:, col] = 0.0
        T[row, col] = 1.0
        self.basis[row] = col
        self.pivots += 1

    def run(self, ncols: int, max_pivots: int) -> str:
        """Maximise the objective in the last row over the first ``ncols`` columns.

        The last row stores reduced costs ``c_j - z_j``; optimal when none is
        positive.
        """
        T = self.T
        m = T.shape[0] - 1
        while True:
            if self.pivots >= max_pivots:
                return "iteration-limit"
            cost = T[-1, :ncols]
            candidates = np.flatnonzero(cost > TOL)
            if candidates.size == 0:
                return "optimal"
            col = int(candidates[0])  # Bland: lowest index
            colvals = T[:m, col]
            rows = np.flatnonzero(colvals > TOL)
            if rows.size == 0:
                return "unbounded"
            ratios = T[rows, -1] / colvals[rows]
            best = ratios.min()
            tied = rows[ratios <= best + TOL * max(1.0, abs(best))]
            row = int(min(tied, key=lambda r: self.basis[r]))  # Bland: lowest basic index
            self.pivot(row, col)


def solve(
    c: np.ndarray,
    A_ub: np.ndarray | None = None,
    b_ub: np.ndarray | None = None,
    A_eq: np.ndarray | None = None,
    b_eq: np.ndarray | None = None,
    free: bool = True,
    max_pivots: int = 50_000,
) -> SimplexResult:
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.asarray(A_ub, dtype=float)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float)
    A_eq = np.zeros((0, n)) if A_eq is None else np.asarray(A_eq, dtype=float)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float)

    # columns: x (or x+, x-), slacks for the <= rows
    if free:
        A_ub_s = np.hstack([A_ub, -A_ub])
        A_eq_s = np.hstack([A_eq, -A_eq])
        c_s = np.concatenate([c, -c])
    else:
        A_ub_s, A_eq_s, c_s = A_ub, A_eq, c
    nx = c_s.size
    mu, me = A_ub_s.shape[0], A_eq_s.shape[0]
    m = mu + me
    A = np.zeros((m, nx + mu))
    A[:mu, :nx] = A_ub_s
    A[:mu, nx:] = np.eye(mu)
    A[mu:, :nx] = A_eq_s
    b = np.concatenate([b_ub, b_eq])
    neg = b < 0
    A[neg] *= -1
    b = np.where(neg, -b, b)
    nstruct = nx + mu

    # phase 1: one artificial per row
    T = np.zeros((m + 1, nstruct + m + 1))
    T[:m, :nstruct] = A
    T[:m, nstruct:nstruct + m] = np.eye(m)
    T[:m, -1] = b
    # maximise -sum(artificials): reduced costs are the column sums of A
    T[-1, :nstruct] = A.sum(axis=0)
    T[-1, -1] = b.sum()
    tab = _Tableau(T, list(range(nstruct, nstruct + m)))
    status = tab.run(nstruct + m, max_pivots)
    if status == "iteration-limit":
        return SimplexResult(status, np.full(n, np.nan), float("nan"), tab.pivots)
    if tab.T[-1, -1] > 1e-7 * max(1.0, float(np.abs(b).max(initial=0.0))):
        return SimplexResult("infeasible", np.full(n, np.nan), float("nan"), tab.pivots)

    # drive artificials out of the basis; drop rows that are redundant
    keep = []
    for r in range(m):
        if tab.basis[r] >= nstruct:
            nz = np.flatnonzero(np.abs(tab.T[r, :nstruct]) > TOL)
            if nz.size:
                tab.pivot(r, int(nz[0]))
                keep.append(r)
        else:
            keep.append(r)
    T2 = np.zeros((len(keep) + 1, nstruct + 1))
    T2[:-1, :nstruct] = tab.T[keep, :nstruct]
    T2[:-1, -1] = tab.T[keep, -1]
    basis = [tab.basis[r] for r in keep]
    cost = np.zeros(nstruct)
    cost[:nx] = c_s
    # reduced costs c_j - c_B B^-1 A_j, objective value c_B x_B stored negated
    T2[-1, :nstruct] = cost - cost[basis] @ T2[:-1, :nstruct]
    T2[-1, -1] = -cost[basis] @ T2[:-1, -1]
    tab2 = _Tableau(T2, basis)
    tab2.pivots = tab.pivots
    status = tab2.run(nstruct, max_pivots)
    xs = np.zeros(nstruct)
    for r, j in enumerate(tab2.basis):
        xs[j] = tab2.T[r, -1]
    x = xs[:n] - xs[n:2 * n] if free else xs[:n]
    if status != "optimal":
        return SimplexResult(status, x, float("nan"), tab2.pivots)
    return SimplexResult("optimal", x, float(c @ x), tab2.pivots)
