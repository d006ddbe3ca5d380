"""Dense tableau simplex for LPs of the form

    maximize  c'q   subject to  A q <= b,  q >= 0,   with b > 0.

The slack basis is feasible (b > 0), so no phase-1 is needed.  Pivoting uses
Dantzig's rule (most negative reduced cost) and switches permanently to
Bland's rule once too many degenerate pivots accumulate, which guarantees
termination.  The dual vector of the row constraints is read off the
objective row under the slack columns at optimality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SimplexFailure(RuntimeError):
    """Pivot limit exceeded or numerical breakdown; carries the pivot count."""

    def __init__(self, message: str, iterations: int):
        super().__init__(message)
        self.iterations = iterations


@dataclass(frozen=True)
class SimplexResult:
    q: np.ndarray          # primal maximizer
    p: np.ndarray          # dual of the row constraints, p >= 0
    objective: float       # c'q at the optimum
    iterations: int        # pivots performed
    fallback_used: bool    # True if Bland's rule was engaged


def maximize(
    A: np.ndarray,
    b: np.ndarray,
    c: np.ndarray,
    tolerance: float = 1e-9,
    max_pivots: int | None = None,
    anti_cycling: bool = True,
) -> SimplexResult:
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    n, m = A.shape
    if b.shape != (n,) or c.shape != (m,):
        raise ValueError("incompatible shapes for A, b, c")
    if np.min(b) <= 0.0:
        raise ValueError("slack-basis start requires b > 0")
    if max_pivots is None:
        max_pivots = 50 * (n + m)
    deg_budget = 10 * (n + m)  # degenerate pivots tolerated before Bland
    pivtol = 1e-11             # smallest usable pivot element

    # Tableau rows 0..n-1: [A | I | b]; last row: reduced costs of min -c'q.
    T = np.zeros((n + 1, m + n + 1))
    T[:n, :m] = A
    T[:n, m : m + n] = np.eye(n)
    T[:n, -1] = b
    T[n, :m] = -c
    basis = np.arange(m, m + n)

    iters = 0
    degenerate_pivots = 0
    bland = False
    ncols = m + n
    while True:
        red = T[n, :ncols]
        if bland:
            eligible = np.flatnonzero(red < -tolerance)
            if eligible.size == 0:
                break
            j = int(eligible[0])
        else:
            j = int(np.argmin(red))
            if red[j] >= -tolerance:
                break
        if iters >= max_pivots:
            raise SimplexFailure(f"pivot limit {max_pivots} exceeded", iters)

        col = T[:n, j]
        rows = np.flatnonzero(col > pivtol)
        if rows.size == 0:
            raise SimplexFailure("LP unbounded above", iters)
        ratios = T[rows, -1] / col[rows]
        rmin = np.min(ratios)
        ties = rows[ratios <= rmin + 1e-12 * (1.0 + abs(rmin))]
        r = int(ties[np.argmin(basis[ties])])  # Bland tie-break on exit

        if rmin <= 1e-11:
            degenerate_pivots += 1
            if anti_cycling and not bland and degenerate_pivots > deg_budget:
                bland = True

        piv = T[r, j]
        prow = T[r] / piv
        fac = T[:, j].copy()
        fac[r] = 0.0
        T -= np.outer(fac, prow)
        T[r] = prow
        T[:, j] = 0.0
        T[r, j] = 1.0
        basis[r] = j
        iters += 1

    q = np.zeros(m)
    in_q = basis < m
    q[basis[in_q]] = T[:n, -1][in_q]
    p = T[n, m : m + n].copy()
    np.maximum(q, 0.0, out=q)
    np.maximum(p, 0.0, out=p)
    return SimplexResult(
        q=q, p=p, objective=float(T[n, -1]), iterations=iters, fallback_used=bland
    )
