"""Game solver: exact values, oracle agreement, invariances, diagnostics."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from randgames import (
    DegenerateGameError,
    RandomSeed,
    SolveOptions,
    SolverFailure,
    pure_saddle,
    sample_gaussian,
    solve_by_support_enumeration,
    solve_game,
    value_symmetry_check,
    verify_solution,
)

MATCHING_PENNIES = np.array([[1.0, -1.0], [-1.0, 1.0]])
ROCK_PAPER_SCISSORS = np.array([[0.0, 1.0, -1.0], [-1.0, 0.0, 1.0], [1.0, -1.0, 0.0]])


class TestKnownGames:
    def test_matching_pennies(self):
        sol = solve_game(MATCHING_PENNIES)
        assert sol.value == pytest.approx(0.0, abs=1e-12)
        assert sol.x == pytest.approx([0.5, 0.5], abs=1e-12)
        assert sol.y == pytest.approx([0.5, 0.5], abs=1e-12)

    def test_rock_paper_scissors(self):
        sol = solve_game(ROCK_PAPER_SCISSORS)
        assert sol.value == pytest.approx(0.0, abs=1e-12)
        assert sol.x == pytest.approx([1 / 3] * 3, abs=1e-12)
        assert sol.y == pytest.approx([1 / 3] * 3, abs=1e-12)

    def test_saddle_point_game(self):
        M = np.array([[1.0, 2.0], [3.0, 4.0]])
        sol = solve_game(M)
        # Row minimizes: row 0 caps the loss at 2, reached at column 1.
        assert sol.value == pytest.approx(2.0, abs=1e-12)
        assert sol.x == pytest.approx([1.0, 0.0], abs=1e-12)
        assert sol.y == pytest.approx([0.0, 1.0], abs=1e-12)

    def test_known_mixed_2x2(self):
        # M = [[2, -1], [-1, 1]]: value by the 2x2 closed form
        # (ad - bc)/(a + d - b - c) = (2 - 1)/(2 + 1 + 1 + 1) = 1/5,
        # x = (d - c, a - b)/(a + d - b - c) = (2/5, 3/5).
        M = np.array([[2.0, -1.0], [-1.0, 1.0]])
        sol = solve_game(M)
        assert sol.value == pytest.approx(0.2, abs=1e-12)
        assert sol.x == pytest.approx([0.4, 0.6], abs=1e-12)
        assert sol.y == pytest.approx([0.4, 0.6], abs=1e-12)

    def test_one_by_one(self):
        sol = solve_game(np.array([[3.5]]))
        assert sol.value == pytest.approx(3.5, abs=1e-12)
        assert sol.x == pytest.approx([1.0])
        assert sol.y == pytest.approx([1.0])

    def test_single_row(self):
        # Row player has no choice; column player picks the best column.
        sol = solve_game(np.array([[1.0, 5.0, 3.0]]))
        assert sol.value == pytest.approx(5.0, abs=1e-12)
        assert sol.y == pytest.approx([0.0, 1.0, 0.0], abs=1e-12)

    def test_single_column(self):
        sol = solve_game(np.array([[1.0], [5.0], [3.0]]))
        assert sol.value == pytest.approx(1.0, abs=1e-12)
        assert sol.x == pytest.approx([1.0, 0.0, 0.0], abs=1e-12)


class TestOracleAgreement:
    def test_support_enumeration_matches_lp(self):
        hits = 0
        for k in range(150):
            n = 2 + k % 5
            m = 2 + (k // 5) % 5
            M = sample_gaussian(n, m, RandomSeed(200, k))
            lp = solve_game(M)
            try:
                enum = solve_by_support_enumeration(M)
            except DegenerateGameError:
                continue
            hits += 1
            assert lp.value == pytest.approx(enum.value, abs=1e-8)
            assert lp.x == pytest.approx(enum.x, abs=1e-7)
            assert lp.y == pytest.approx(enum.y, abs=1e-7)
        assert hits >= 140

    def test_enumeration_on_known_games(self):
        sol = solve_by_support_enumeration(MATCHING_PENNIES)
        assert sol.value == pytest.approx(0.0, abs=1e-12)
        sol = solve_by_support_enumeration(ROCK_PAPER_SCISSORS)
        assert sol.value == pytest.approx(0.0, abs=1e-12)
        assert sol.x == pytest.approx([1 / 3] * 3, abs=1e-10)

    def test_enumeration_size_cap(self):
        with pytest.raises(ValueError):
            solve_by_support_enumeration(np.zeros((9, 9)) + np.eye(9))


class TestInvariances:
    @settings(max_examples=50, derandomize=True, deadline=None)
    @given(
        stream=st.integers(0, 2**32),
        shift=st.floats(-5.0, 5.0, allow_nan=False),
        scale=st.floats(0.1, 4.0, allow_nan=False),
    )
    def test_shift_scale_equivariance(self, stream, shift, scale):
        M = sample_gaussian(5, 4, RandomSeed(201, stream))
        base = solve_game(M)
        moved = solve_game(scale * M + shift)
        assert moved.value == pytest.approx(scale * base.value + shift, abs=1e-7)

    def test_antisymmetry(self):
        for k in range(40):
            M = sample_gaussian(6, 6, RandomSeed(202, k))
            v, v_swapped = value_symmetry_check(M)
            assert abs(v + v_swapped) < 2e-9

    def test_skew_symmetric_value_zero(self):
        for k in range(20):
            A = sample_gaussian(7, 7, RandomSeed(203, k))
            M = A - A.T
            assert abs(solve_game(M).value) < 1e-9

    def test_row_permutation_invariance(self):
        M = sample_gaussian(6, 5, RandomSeed(204))
        perm = np.array([3, 1, 5, 0, 4, 2])
        a = solve_game(M)
        b = solve_game(M[perm])
        assert a.value == pytest.approx(b.value, abs=1e-10)
        assert np.sort(a.x) == pytest.approx(np.sort(b.x), abs=1e-8)


class TestSupports:
    def test_square_support_reconstruction(self):
        # On the support the subgame solves a square linear system; its
        # closed-form solution must rebuild the reported strategies.
        for k in range(30):
            M = sample_gaussian(5, 5, RandomSeed(205, k))
            sol = solve_game(M)
            if sol.degenerate:
                continue
            R, C = sol.support_rows, sol.support_cols
            assert R.size == C.size > 0
            shift = 1.0 + float(np.max(np.abs(M)))
            A = (M + shift)[np.ix_(R, C)]
            w = np.linalg.solve(A.T, np.ones(R.size))
            x_R = w / w.sum()
            assert sol.x[R] == pytest.approx(x_R, abs=1e-6)
            assert sol.x[np.setdiff1d(np.arange(5), R)] == pytest.approx(
                np.zeros(5 - R.size), abs=1e-8
            )

    def test_supports_are_sorted_and_consistent(self):
        sol = solve_game(sample_gaussian(8, 8, RandomSeed(206)))
        assert np.all(np.diff(sol.support_rows) > 0)
        assert np.all(np.diff(sol.support_cols) > 0)
        assert np.all(sol.x[sol.support_rows] > 0)
        assert np.all(sol.y[sol.support_cols] > 0)


class TestVerification:
    def test_accepts_true_solution(self):
        M = sample_gaussian(7, 6, RandomSeed(207))
        rep = verify_solution(M, solve_game(M))
        assert rep.ok

    def test_rejects_perturbed_value(self):
        M = sample_gaussian(7, 6, RandomSeed(208))
        sol = solve_game(M)
        bad = type(sol)(
            value=sol.value + 1e-3,
            x=sol.x, y=sol.y,
            support_rows=sol.support_rows, support_cols=sol.support_cols,
            residuals=sol.residuals, degenerate=sol.degenerate,
            iterations=sol.iterations,
        )
        rep = verify_solution(M, bad)
        assert not rep.ok
        assert rep.dual_feas > 1e-4

    def test_uniform_x_fails_on_column_side(self):
        M = sample_gaussian(10, 10, RandomSeed(209))
        sol = solve_game(M)
        lazy = type(sol)(
            value=sol.value,
            x=np.full(10, 0.1), y=sol.y,
            support_rows=sol.support_rows, support_cols=sol.support_cols,
            residuals=sol.residuals, degenerate=sol.degenerate,
            iterations=sol.iterations,
        )
        rep = verify_solution(M, lazy)
        assert not rep.ok
        assert rep.primal_feas > 1e-4

    def test_residuals_dict_keys(self):
        sol = solve_game(MATCHING_PENNIES)
        d = sol.residuals.as_dict()
        assert set(d) == {"primal_feas", "dual_feas", "simplex_sum_x", "simplex_sum_y"}
        assert all(v >= 0 for v in d.values())

    def test_solution_to_dict(self):
        d = solve_game(MATCHING_PENNIES).to_dict()
        assert d["value"] == pytest.approx(0.0, abs=1e-12)
        assert d["support_rows"] == [0, 1]
        assert isinstance(d["degenerate"], int)


class TestDiagnostics:
    def test_pure_saddle_found(self):
        assert pure_saddle(np.array([[1.0, 2.0], [3.0, 4.0]])) == (0, 1, 2.0)

    def test_pure_saddle_absent(self):
        assert pure_saddle(MATCHING_PENNIES) is None

    def test_pure_saddle_constant_matrix(self):
        i, j, v = pure_saddle(np.full((3, 4), 2.5))
        assert v == 2.5

    def test_degenerate_flag_on_ties(self):
        # Two identical rows tie; the solver must flag the degeneracy.
        M = np.array([[1.0, -1.0], [1.0, -1.0], [-1.0, 1.0]])
        sol = solve_game(M)
        assert sol.value == pytest.approx(0.0, abs=1e-10)
        assert sol.degenerate

    def test_errors_on_bad_input(self):
        with pytest.raises(ValueError):
            solve_game(np.array([[np.nan, 1.0], [0.0, 2.0]]))
        with pytest.raises(ValueError):
            solve_game(np.array([1.0, 2.0]))
        with pytest.raises(ValueError):
            solve_game(np.zeros((0, 3)))

    def test_pivot_budget_failure(self):
        M = sample_gaussian(12, 12, RandomSeed(210))
        with pytest.raises(SolverFailure):
            solve_game(M, SolveOptions(max_pivots=1))

    def test_options_validation(self):
        with pytest.raises(ValueError):
            SolveOptions(tolerance=0.0)
        with pytest.raises(ValueError):
            SolveOptions(tolerance=1e-6, support_threshold=1e-9)
        with pytest.raises(ValueError):
            SolveOptions(support_threshold=2.0)

    def test_value_in_entry_range(self):
        for k in range(25):
            M = sample_gaussian(6, 7, RandomSeed(211, k))
            v = solve_game(M).value
            assert M.min() - 1e-9 <= v <= M.max() + 1e-9
