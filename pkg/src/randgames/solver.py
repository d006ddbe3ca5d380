"""Exact values and optimal mixed strategies of zero-sum matrix games.

``solve_game`` reduces the minimax problem to a linear program: the payoff
matrix is shifted entrywise by ``c = 1 + max|M_ij|`` so its value is
strictly positive, the normalized LP

    maximize 1'q   subject to  (M + cJ) q <= 1,  q >= 0

is solved by the dense simplex, and the value and both strategies are
recovered from the primal/dual pair (shifting a payoff matrix by a constant
shifts its value by the same constant and leaves optimal strategies alone).

``solve_by_support_enumeration`` is an independent oracle for small games:
it scans candidate support pairs of equal size and reconstructs the square
invertible subgame solution in closed form, accepting the first candidate
that passes the full optimality certificate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .simplex import SimplexFailure, maximize


class SolverFailure(RuntimeError):
    """The LP solver did not return a certified optimum."""

    def __init__(self, message: str, iterations: int = 0):
        super().__init__(message)
        self.iterations = iterations


class DegenerateGameError(RuntimeError):
    """Support enumeration found no candidate passing the certificate."""


@dataclass(frozen=True)
class SolveOptions:
    tolerance: float = 1e-9
    support_threshold: float = 1e-8
    max_pivots: int | None = None  # None means 50 * (n + m)
    anti_cycling: bool = True

    def __post_init__(self):
        if not (0.0 < self.tolerance < self.support_threshold < 1.0):
            raise ValueError("need 0 < tolerance < support_threshold < 1")


@dataclass(frozen=True)
class Residuals:
    primal_feas: float       # max(0, max_j (x'M)_j - v)
    dual_feas: float         # max(0, v - min_i (My)_i)
    simplex_sum_x: float     # |1'x - 1|
    simplex_sum_y: float     # |1'y - 1|

    def as_dict(self) -> dict:
        return {
            "primal_feas": self.primal_feas,
            "dual_feas": self.dual_feas,
            "simplex_sum_x": self.simplex_sum_x,
            "simplex_sum_y": self.simplex_sum_y,
        }


@dataclass(frozen=True)
class GameSolution:
    value: float
    x: np.ndarray                 # row player's optimal mixed strategy
    y: np.ndarray                 # column player's optimal mixed strategy
    support_rows: np.ndarray
    support_cols: np.ndarray
    residuals: Residuals
    degenerate: bool
    iterations: int

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "x": [float(t) for t in self.x],
            "y": [float(t) for t in self.y],
            "support_rows": [int(t) for t in self.support_rows],
            "support_cols": [int(t) for t in self.support_cols],
            "residuals": self.residuals.as_dict(),
            "degenerate": self.degenerate,
            "iterations": self.iterations,
        }


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    primal_feas: float
    dual_feas: float
    sum_x_defect: float
    sum_y_defect: float
    negativity_x: float
    negativity_y: float
    support_balanced: bool


def _check_matrix(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.size == 0:
        raise ValueError("payoff matrix must be 2-dimensional and non-empty")
    if not np.all(np.isfinite(M)):
        raise ValueError("payoff matrix contains non-finite entries")
    return M


def _residuals(M: np.ndarray, v: float, x: np.ndarray, y: np.ndarray) -> Residuals:
    xM = x @ M
    My = M @ y
    return Residuals(
        primal_feas=float(max(0.0, np.max(xM) - v)),
        dual_feas=float(max(0.0, v - np.min(My))),
        simplex_sum_x=float(abs(x.sum() - 1.0)),
        simplex_sum_y=float(abs(y.sum() - 1.0)),
    )


def _supports(
    M: np.ndarray, v: float, x: np.ndarray, y: np.ndarray, opts: SolveOptions
) -> tuple[np.ndarray, np.ndarray, bool]:
    """Support sets with a complementary-slackness cross-check.

    A coordinate is supported when its weight clears ``support_threshold``
    and the matching constraint is tight.  Any disagreement between the two
    criteria, or unequal support sizes, marks the game as degenerate
    (multiple optima / ties), without invalidating the value.
    """
    thr = opts.support_threshold
    row_slack = M @ y - v           # >= 0 at optimality, 0 on the support
    col_slack = v - x @ M
    big_x = x > thr
    big_y = y > thr
    tight_rows = row_slack <= thr
    tight_cols = col_slack <= thr
    rows = np.flatnonzero(big_x & tight_rows)
    cols = np.flatnonzero(big_y & tight_cols)
    degenerate = bool(
        rows.size != cols.size
        or np.any(big_x & ~tight_rows)
        or np.any(big_y & ~tight_cols)
        or np.any(~big_x & tight_rows)
        or np.any(~big_y & tight_cols)
    )
    return rows, cols, degenerate


def solve_game(M: np.ndarray, opts: SolveOptions | None = None) -> GameSolution:
    """Value and optimal strategies of the zero-sum game with payoff M.

    Row player minimizes x'My over distributions x; column player maximizes
    over distributions y.  Accuracy is governed by ``opts.tolerance``.
    """
    M = _check_matrix(M)
    if opts is None:
        opts = SolveOptions()
    n, m = M.shape
    shift = 1.0 + float(np.max(np.abs(M)))
    Mp = M + shift
    # Row player's normalized LP: maximize 1'p s.t. Mp' p <= 1, p >= 0, where
    # p = x / v'.  The dual reads back the column player's scaled strategy.
    try:
        res = maximize(
            Mp.T,
            np.ones(m),
            np.ones(n),
            tolerance=opts.tolerance,
            max_pivots=opts.max_pivots,
            anti_cycling=opts.anti_cycling,
        )
    except SimplexFailure as exc:
        raise SolverFailure(str(exc), iterations=exc.iterations) from exc

    sum_x = res.q.sum()
    sum_y = res.p.sum()
    if sum_x <= 0.0 or sum_y <= 0.0:
        raise SolverFailure("simplex returned a zero strategy mass", res.iterations)
    x = res.q / sum_x
    y = res.p / sum_y
    v = 1.0 / sum_x - shift

    rows, cols, degenerate = _supports(M, v, x, y, opts)
    return GameSolution(
        value=float(v),
        x=x,
        y=y,
        support_rows=rows,
        support_cols=cols,
        residuals=_residuals(M, v, x, y),
        degenerate=degenerate,
        iterations=res.iterations,
    )


def solve_by_support_enumeration(M: np.ndarray, tol: float = 1e-9) -> GameSolution:
    """Oracle solver for games with n, m <= 8 by exhausting support pairs.

    Candidate supports R, C of equal size are scanned in order of size; for
    each, the square subgame of the (positively shifted) matrix is solved in
    closed form and the reconstructed pair is accepted only if it passes the
    optimality certificate on the full matrix.  Ties in degenerate games can
    leave no candidate standing, which raises ``DegenerateGameError``.
    """
    M = _check_matrix(M)
    n, m = M.shape
    if n > 8 or m > 8:
        raise ValueError("support enumeration is limited to n, m <= 8")
    shift = 1.0 + float(np.max(np.abs(M)))
    Mp = M + shift
    ones_checked = 0
    for k in range(1, min(n, m) + 1):
        for R in itertools.combinations(range(n), k):
            MR = Mp[R, :]
            for C in itertools.combinations(range(m), k):
                ones_checked += 1
                A = MR[:, C]
                try:
                    z = np.linalg.solve(A, np.ones(k))        # A z = 1
                    w = np.linalg.solve(A.T, np.ones(k))      # A'w = 1
                except np.linalg.LinAlgError:
                    continue
                denom = z.sum()
                if not np.isfinite(denom) or abs(denom) < 1e-12:
                    continue
                vp = 1.0 / denom
                yC = vp * z
                xR = vp * w
                if np.min(yC) < -tol or np.min(xR) < -tol:
                    continue
                x = np.zeros(n)
                y = np.zeros(m)
                x[list(R)] = xR
                y[list(C)] = yC
                if np.max(x @ Mp) > vp + tol or np.min(Mp @ y) < vp - tol:
                    continue
                v = vp - shift
                np.maximum(x, 0.0, out=x)
                np.maximum(y, 0.0, out=y)
                x /= x.sum()
                y /= y.sum()
                return GameSolution(
                    value=float(v),
                    x=x,
                    y=y,
                    support_rows=np.array(R, dtype=np.int64),
                    support_cols=np.array(C, dtype=np.int64),
                    residuals=_residuals(M, v, x, y),
                    degenerate=False,
                    iterations=ones_checked,
                )
    raise DegenerateGameError(
        "no support pair passed the optimality certificate; game is degenerate"
    )


def verify_solution(
    M: np.ndarray, sol: GameSolution, tol: float = 1e-7
) -> VerificationReport:
    """Certificate check of a claimed solution against the matrix itself.

    Feasibility of x at value v on the column side and of y on the row side
    together certify that v is the game value to within ``tol``.
    """
    M = _check_matrix(M)
    r = _residuals(M, sol.value, sol.x, sol.y)
    neg_x = float(max(0.0, -np.min(sol.x)))
    neg_y = float(max(0.0, -np.min(sol.y)))
    ok = (
        r.primal_feas <= tol
        and r.dual_feas <= tol
        and r.simplex_sum_x <= tol
        and r.simplex_sum_y <= tol
        and neg_x <= tol
        and neg_y <= tol
    )
    return VerificationReport(
        ok=bool(ok),
        primal_feas=r.primal_feas,
        dual_feas=r.dual_feas,
        sum_x_defect=r.simplex_sum_x,
        sum_y_defect=r.simplex_sum_y,
        negativity_x=neg_x,
        negativity_y=neg_y,
        support_balanced=bool(sol.support_rows.size == sol.support_cols.size),
    )


def pure_saddle(M: np.ndarray) -> tuple[int, int, float] | None:
    """A pure saddle point (i, j, value) if one exists, else None.

    Indices are 0-based.  Exists iff max_j min_i M_ij == min_i max_j M_ij.
    """
    M = _check_matrix(M)
    row_max = M.max(axis=1)
    col_min = M.min(axis=0)
    minimax = row_max.min()
    maximin = col_min.max()
    if minimax != maximin:
        return None
    i = int(np.argmin(row_max))
    j = int(np.argmax(col_min))
    return i, j, float(M[i, j])


def value_symmetry_check(
    M: np.ndarray, opts: SolveOptions | None = None
) -> tuple[float, float]:
    """(v(M), v(-M')) computed by two independent solves.

    Swapping the players' roles negates the value, so the two numbers should
    sum to zero up to solver accuracy.
    """
    M = _check_matrix(M)
    return solve_game(M, opts).value, solve_game(-M.T, opts).value
