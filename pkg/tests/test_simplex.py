"""Dense simplex core: optima, duals, and failure modes."""

import numpy as np
import pytest
from scipy.optimize import linprog

from randgames import SimplexFailure, maximize
from randgames.ensembles import RandomSeed, sample_gaussian


def scipy_max(A, b, c):
    res = linprog(-c, A_ub=A, b_ub=b, method="highs")
    assert res.status == 0
    return -res.fun


class TestMaximize:
    def test_textbook_problem(self):
        # max 3q1 + 5q2 s.t. q1 <= 4, 2q2 <= 12, 3q1 + 2q2 <= 18.
        A = np.array([[1.0, 0.0], [0.0, 2.0], [3.0, 2.0]])
        b = np.array([4.0, 12.0, 18.0])
        c = np.array([3.0, 5.0])
        res = maximize(A, b, c)
        assert res.objective == pytest.approx(36.0, abs=1e-12)
        assert res.q == pytest.approx([2.0, 6.0], abs=1e-12)

    def test_dual_from_objective_row(self):
        A = np.array([[1.0, 0.0], [0.0, 2.0], [3.0, 2.0]])
        b = np.array([4.0, 12.0, 18.0])
        c = np.array([3.0, 5.0])
        res = maximize(A, b, c)
        # Strong duality: b'p equals the primal optimum, and A'p >= c.
        assert float(b @ res.p) == pytest.approx(res.objective, abs=1e-12)
        assert np.all(A.T @ res.p >= c - 1e-12)
        assert np.all(res.p >= 0.0)

    def test_matches_scipy_on_random_problems(self):
        for k in range(60):
            seed = RandomSeed(100, k)
            A = sample_gaussian(8, 6, seed) + 2.0
            b = np.abs(sample_gaussian(8, 1, RandomSeed(101, k))).ravel() + 0.5
            c = sample_gaussian(6, 1, RandomSeed(102, k)).ravel()
            res = maximize(A, b, c)
            assert res.objective == pytest.approx(scipy_max(A, b, c), abs=1e-8)
            assert np.all(A @ res.q <= b + 1e-9)
            assert float(b @ res.p) == pytest.approx(res.objective, abs=1e-8)

    def test_all_negative_costs_stay_at_origin(self):
        A = np.ones((2, 3))
        b = np.ones(2)
        c = np.array([-1.0, -2.0, -3.0])
        res = maximize(A, b, c)
        assert res.objective == 0.0
        assert res.iterations == 0

    def test_requires_positive_rhs(self):
        with pytest.raises(ValueError):
            maximize(np.ones((1, 1)), np.array([0.0]), np.ones(1))

    def test_unbounded_detected(self):
        # Feasible direction with negative row entries only: unbounded.
        A = np.array([[-1.0]])
        b = np.array([1.0])
        c = np.array([1.0])
        with pytest.raises(SimplexFailure):
            maximize(A, b, c)

    def test_pivot_budget(self):
        A = sample_gaussian(10, 10, RandomSeed(103)) + 3.0
        with pytest.raises(SimplexFailure) as exc:
            maximize(A, np.ones(10), np.ones(10), max_pivots=1)
        assert exc.value.iterations >= 1

    def test_degenerate_cycle_guard(self):
        # Beale's classical cycling example for Dantzig's rule; the
        # anti-cycling switch must still reach the optimum 0.05.
        A = np.array([
            [0.25, -8.0, -1.0, 9.0],
            [0.5, -12.0, -0.5, 3.0],
            [0.0, 0.0, 1.0, 0.0],
        ])
        b = np.array([1e-9, 1e-9, 1.0])
        c = np.array([0.75, -20.0, 0.5, -6.0])
        res = maximize(A + 0.0, np.array([1e-9, 1e-9, 1.0]), c, max_pivots=10_000)
        assert res.objective == pytest.approx(scipy_max(A, b, c), abs=1e-7)
