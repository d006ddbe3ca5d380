"""Geometry of the circular cone family K(eps) and its game connection.

K(eps) = { z in R^n : z_i >= eps ||z|| for all i } interpolates between the
nonnegative orthant (eps = 0) and the ray through the all-ones vector
(eps = 1/sqrt(n)); beyond that it collapses to {0}.  The module provides
exact Euclidean projection onto K(eps), Monte Carlo and closed-form bounds
for its statistical dimension E ||proj(g)||^2, the threshold width used by
the kinematic intersection formula, and the orthant-sphere minimax value
whose sign decides whether a rotated copy of K(eps) meets the orthant
nontrivially.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import RandomSeed, derive_stream, sample_gaussian_vector, sample_haar_orthogonal
from .solver import SolveOptions, SolverFailure, solve_game


class IndeterminateIntersection(RuntimeError):
    """Uncertified minimax value too close to the decision threshold."""


@dataclass(frozen=True)
class ProjectionResult:
    point: np.ndarray
    sq_distance: float       # ||g - point||^2
    kkt_residual: float      # scaled optimality certificate, see project_cone
    iterations: int          # active-set candidates examined


@dataclass(frozen=True)
class CertifiedValue:
    value: float
    certified: bool          # True when the ball relaxation is positive
    strategy: np.ndarray     # unit-norm nonnegative maximizer (best found)
    ball_value: float        # optimum of the convex ball relaxation


def _check_eps(eps: float, n: int) -> float:
    lim = 1.0 / np.sqrt(n)
    if not (0.0 <= eps <= lim * (1.0 + 1e-12)):
        raise ValueError(f"eps must lie in [0, 1/sqrt(n)] = [0, {lim:.6g}]")
    return float(min(eps, lim))


def _cap_support(w: np.ndarray, eps: float) -> float:
    """max of w.z over z in K(eps) with ||z|| = 1.

    Nonpositive iff w lies in the polar cone of K(eps).  For eps = 0 this is
    ||w+||.  Otherwise the maximizer has the form z = max(eps, w / (2 nu))
    with nu > 0 tuned so ||z|| = 1, found by bisection; when w has no
    positive part the value is bounded by eps * sum(w), attained toward the
    cone's axis.
    """
    n = w.size
    if eps <= 0.0:
        return float(np.linalg.norm(np.maximum(w, 0.0)))
    if eps * eps * n >= 1.0 - 1e-14:
        # The cone is the single ray through the all-ones vector.
        return float(np.sum(w) / np.sqrt(n))
    if np.max(w) <= 0.0:
        # Every unit z in the cone has nonnegative coordinates at least eps,
        # so w.z <= eps * sum(w) <= 0; the exact value is not needed, only
        # its sign, and this upper bound is sound for the certificate.
        return float(eps * np.sum(w))
    lo, hi = 1e-12, 1.0
    while np.linalg.norm(np.maximum(w / (2.0 * hi), eps)) > 1.0:
        hi *= 2.0
        if hi > 1e18:
            break
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.linalg.norm(np.maximum(w / (2.0 * mid), eps)) > 1.0:
            lo = mid
        else:
            hi = mid
    z = np.maximum(w / (2.0 * hi), eps)
    nz = np.linalg.norm(z)
    if nz > 0:
        z = z / nz
    return float(w @ z)


def _moreau_residual(g: np.ndarray, z: np.ndarray, eps: float) -> float:
    """Optimality certificate for z = projection of g onto K(eps).

    z is optimal iff z is in the cone, g - z is in the polar cone, and the
    two are orthogonal.  The three violations are combined after scaling by
    1 + ||g|| (memberships) and 1 + ||g||^2 (orthogonality) so the result is
    comparable across magnitudes.
    """
    norm_g = float(np.linalg.norm(g))
    w = g - z
    memb = max(0.0, float(np.max(eps * np.linalg.norm(z) - z))) if z.size else 0.0
    orth = abs(float(w @ z))
    polar = max(0.0, _cap_support(w, eps))
    return max(memb / (1.0 + norm_g), orth / (1.0 + norm_g**2), polar / (1.0 + norm_g))


def project_cone(g: np.ndarray, eps: float) -> ProjectionResult:
    """Euclidean projection of g onto K(eps), solved exactly.

    By permutation symmetry the constraint set active at the optimum is a
    set of smallest coordinates; for each candidate count k the stationarity
    system is linear-quadratic with a closed-form solution, so scanning k
    and keeping the feasible candidate of least distance solves the program
    exactly.  ``kkt_residual`` reports the scaled three-part optimality
    certificate (cone membership, polar membership of the residual vector,
    orthogonality), and is tiny for every branch.
    """
    g = np.asarray(g, dtype=np.float64)
    if g.ndim != 1 or g.size == 0:
        raise ValueError("g must be a non-empty vector")
    if not np.all(np.isfinite(g)):
        raise ValueError("g contains non-finite entries")
    n = g.size
    eps = _check_eps(eps, n)

    if eps == 0.0:
        z = np.maximum(g, 0.0)
        return ProjectionResult(
            point=z,
            sq_distance=float(np.sum((g - z) ** 2)),
            kkt_residual=_moreau_residual(g, z, eps),
            iterations=0,
        )
    if eps * eps * n >= 1.0 - 1e-14:
        lam = max(0.0, float(np.sum(g)) / n)
        z = np.full(n, lam)
        return ProjectionResult(
            point=z,
            sq_distance=float(np.sum((g - z) ** 2)),
            kkt_residual=_moreau_residual(g, z, eps),
            iterations=0,
        )

    order = np.argsort(g)
    gs = g[order]                       # ascending; actives are prefixes
    sq_suffix = np.concatenate((np.cumsum((gs * gs)[::-1])[::-1], [0.0]))
    sum_prefix = np.concatenate(([0.0], np.cumsum(gs)))

    best_z = None
    best_d2 = np.inf
    scanned = 0
    for k in range(0, n):
        scanned += 1
        denom = 1.0 - k * eps * eps
        r = np.sqrt(sq_suffix[k] / denom)
        theta = eps * r
        if k > 0 and gs[k - 1] > theta + 1e-12:
            continue
        if gs[k] <= theta - 1e-12:
            continue
        t = r * denom + eps * sum_prefix[k]
        if t <= 0.0:
            continue
        u = r / t
        if u < 1.0 - 1e-9:
            continue
        z = np.empty(n)
        z[order[:k]] = eps * t
        z[order[k:]] = gs[k:] / u
        d2 = float(np.sum((g - z) ** 2))
        if d2 < best_d2:
            best_d2 = d2
            best_z = z
    if best_z is None:
        best_z = np.zeros(n)
        best_d2 = float(np.sum(g * g))
    return ProjectionResult(
        point=best_z,
        sq_distance=best_d2,
        kkt_residual=_moreau_residual(g, best_z, eps),
        iterations=scanned,
    )


def squared_distance_minorant(g: np.ndarray, eps: float) -> float:
    """Closed-form lower bound on dist(g, K(eps))^2 by Lagrangian duality.

    Evaluates the dual function at the multiplier 2 g-: the inner minimizer
    is z = 0 when ||g+|| <= eps sum(g-), else a shrunken positive part, and
    the dual value never exceeds the true squared distance.
    """
    g = np.asarray(g, dtype=np.float64)
    n = g.size
    eps = _check_eps(eps, n)
    gp = np.maximum(g, 0.0)
    gm_sum = float(np.sum(np.maximum(-g, 0.0)))
    gp_norm = float(np.linalg.norm(gp))
    if gp_norm <= eps * gm_sum:
        z = np.zeros(n)
    else:
        z = (1.0 - eps * gm_sum / gp_norm) * gp
    return float(np.sum((g - z) ** 2) + 2.0 * eps * gm_sum * np.linalg.norm(z))


def estimate_statistical_dimension(
    eps: float, n: int, batch: int, seed: RandomSeed
) -> tuple[float, float]:
    """Monte Carlo (mean, stderr) of ||proj_{K(eps)}(g)||^2 over Gaussian g."""
    if batch < 2:
        raise ValueError("batch must be >= 2")
    sq = np.empty(batch)
    for i in range(batch):
        g = sample_gaussian_vector(n, derive_stream(seed, i))
        z = project_cone(g, eps).point
        sq[i] = float(z @ z)
    mean = float(np.mean(sq))
    stderr = float(np.std(sq, ddof=1) / np.sqrt(batch))
    return mean, stderr


def statistical_dimension_bound(eps: float, n: int) -> float:
    """Closed-form upper bound n/2 - eps n sqrt(n)/8 + 2 eps^2 n^2."""
    eps = _check_eps(eps, n)
    return float(0.5 * n - eps * n * np.sqrt(n) / 8.0 + 2.0 * eps * eps * n * n)


def kinematic_threshold(eta: float) -> float:
    """Width a with 4 exp(-a^2 / 8) = eta; the failure budget of the
    kinematic intersection bound at confidence eta."""
    if not (0.0 < eta < 1.0):
        raise ValueError("eta must lie in (0, 1)")
    return float(np.sqrt(8.0 * np.log(4.0 / eta)))


@dataclass(frozen=True)
class OrthantMinimaxOptions:
    cert_tol: float = 1e-7       # ball value above this certifies positivity
    starts: int = 6              # random sphere starts for the fallback
    iterations: int = 300
    seed: RandomSeed = RandomSeed(0)


_SOCP_CACHE: dict[int, tuple] = {}


def _ball_relaxation(Q: np.ndarray) -> tuple[float, np.ndarray]:
    """max t s.t. Qy >= t, y >= 0, ||y|| <= 1 (convex; solved to ~1e-9)."""
    import cvxpy as cp

    n = Q.shape[0]
    entry = _SOCP_CACHE.get(n)
    if entry is None:
        Qp = cp.Parameter((n, n))
        y = cp.Variable(n)
        t = cp.Variable()
        prob = cp.Problem(
            cp.Maximize(t), [Qp @ y >= t, y >= 0, cp.norm2(y) <= 1]
        )
        entry = (Qp, y, t, prob)
        _SOCP_CACHE[n] = entry
    Qp, y, t, prob = entry
    Qp.value = Q
    prob.solve(solver="CLARABEL")
    if prob.status not in ("optimal", "optimal_inaccurate"):
        raise SolverFailure(f"ball relaxation ended with status {prob.status}")
    yv = np.asarray(y.value, dtype=np.float64).reshape(n)
    return float(prob.value), yv


def _sphere_ascent(Q: np.ndarray, y0: np.ndarray, iterations: int) -> tuple[float, np.ndarray]:
    """Projected supergradient ascent of min_i (Qy)_i on the unit sphere
    intersected with the orthant; returns the best iterate seen."""
    n = Q.shape[0]

    def proj(y: np.ndarray) -> np.ndarray:
        y = np.maximum(y, 0.0)
        nrm = np.linalg.norm(y)
        if nrm <= 1e-15:
            y = np.full(n, 1.0)
            nrm = np.linalg.norm(y)
        return y / nrm

    y = proj(y0)
    best_y = y
    best = float(np.min(Q @ y))
    for k in range(iterations):
        i = int(np.argmin(Q @ y))
        y = proj(y + 0.5 / np.sqrt(k + 1.0) * Q[i])
        val = float(np.min(Q @ y))
        if val > best:
            best = val
            best_y = y
    return best, best_y


def orthant_minimax(
    Q: np.ndarray, opts: OrthantMinimaxOptions | None = None
) -> CertifiedValue:
    """max over unit-norm y >= 0 of the smallest coordinate of Qy.

    The value is positive iff the orthant meets Q K(eps)' nontrivially for
    small eps, which is what downstream intersection tests consume.  The
    sphere constraint is relaxed to the unit ball: the relaxation is convex,
    and whenever its optimum is positive the two problems agree because
    scaling up to the sphere only improves a positive minimum.  A positive
    ball optimum therefore yields a certified value (reported from the
    recovered feasible point, accurate to ~1e-9).  Otherwise the true sphere
    value is nonpositive and a multi-start supergradient ascent reports a
    best-effort value with ``certified=False``.
    """
    Q = np.asarray(Q, dtype=np.float64)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1] or Q.size == 0:
        raise ValueError("Q must be square and non-empty")
    if not np.all(np.isfinite(Q)):
        raise ValueError("Q contains non-finite entries")
    if opts is None:
        opts = OrthantMinimaxOptions()
    n = Q.shape[0]

    ball_value, y_ball = _ball_relaxation(Q)
    if ball_value > opts.cert_tol:
        y = np.maximum(y_ball, 0.0)
        nrm = np.linalg.norm(y)
        if nrm <= 0.0:
            raise SolverFailure("ball relaxation returned a zero maximizer")
        y = y / nrm
        return CertifiedValue(
            value=float(np.min(Q @ y)),
            certified=True,
            strategy=y,
            ball_value=ball_value,
        )

    rng = opts.seed.generator()
    starts = [np.full(n, 1.0)]
    if np.linalg.norm(y_ball) > 1e-9:
        starts.append(np.maximum(y_ball, 0.0))
    starts.extend(np.abs(rng.standard_normal(n)) for _ in range(opts.starts))
    best = -np.inf
    best_y = np.full(n, 1.0 / np.sqrt(n))
    for y0 in starts:
        val, y = _sphere_ascent(Q, y0, opts.iterations)
        if val > best:
            best, best_y = val, y
    return CertifiedValue(
        value=float(best), certified=False, strategy=best_y, ball_value=ball_value
    )


def cones_intersect(
    Q: np.ndarray, eps: float, opts: OrthantMinimaxOptions | None = None
) -> bool:
    """Whether the orthant and the rotated cone Q' K(eps) share a ray.

    Equivalent to the orthant minimax value of Q reaching eps.  Only a
    certified positive value can return True; an uncertified value within
    1e-6 of eps raises ``IndeterminateIntersection`` instead of guessing.
    """
    Q = np.asarray(Q, dtype=np.float64)
    n = Q.shape[0] if Q.ndim == 2 else 0
    if n:
        eps_checked = _check_eps(eps, n)
        if eps_checked <= 0.0:
            raise ValueError("eps must be positive for the intersection test")
    res = orthant_minimax(Q, opts)
    if res.certified:
        return bool(res.value >= eps - 1e-7)
    if abs(res.value - eps) <= 1e-6:
        raise IndeterminateIntersection(
            f"uncertified value {res.value:.3e} within 1e-6 of eps={eps:.3e}"
        )
    return False


@dataclass(frozen=True)
class StrategyNormSummary:
    n: int
    batch: int
    failures: int                       # solver failures, excluded from stats
    freq_small_support: float           # fraction with support size <= n/20
    support_quantiles: dict             # quantiles of (support size) / n
    scaled_norm_quantiles: dict         # quantiles of sqrt(n) ||y||_2
    min_norm: float
    max_norm: float


def strategy_norm_experiment(
    n: int,
    batch: int,
    seed: RandomSeed,
    solve_opts: SolveOptions | None = None,
) -> StrategyNormSummary:
    """Support sizes and strategy norms of games with Haar-orthogonal payoffs.

    For each trial an n x n Haar rotation is solved as a zero-sum game and
    the column player's support size and Euclidean norm are recorded.  The
    summary reports how often the support is abnormally small and the
    distribution of sqrt(n) ||y||, which stays O(1) when the mass spreads.
    """
    if batch < 1:
        raise ValueError("batch must be >= 1")
    supports = []
    norms = []
    failures = 0
    for i in range(batch):
        Q = sample_haar_orthogonal(n, derive_stream(seed, i))
        try:
            sol = solve_game(Q, solve_opts)
        except SolverFailure:
            failures += 1
            continue
        supports.append(sol.support_cols.size)
        norms.append(float(np.linalg.norm(sol.y)))
    supports = np.asarray(supports, dtype=np.float64)
    norms = np.asarray(norms)
    qs = (1, 25, 50, 75, 99)
    scaled = np.sqrt(n) * norms
    return StrategyNormSummary(
        n=n,
        batch=batch,
        failures=failures,
        freq_small_support=float(np.mean(supports <= n / 20.0)),
        support_quantiles={q: float(np.percentile(supports / n, q)) for q in qs},
        scaled_norm_quantiles={q: float(np.percentile(scaled, q)) for q in qs},
        min_norm=float(np.min(norms)),
        max_norm=float(np.max(norms)),
    )
