"""Statistical summaries, closed-form bounds, and batch experiments.

Collects the numeric plumbing shared by the experiment drivers: moment
summaries with compensated aggregation, log-log slope fits, sign-probability
and tail formulas for random games, chi-distribution helpers, and the
rectangular-shape and sign-probability experiment loops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp
from scipy.stats import binom

from .ensembles import RandomSeed, derive_stream, sample_gaussian
from .solver import SolveOptions, solve_game

QUANTILES = (1, 25, 50, 75, 99)


@dataclass(frozen=True)
class SummaryStats:
    count: int
    mean: float
    variance: float        # unbiased
    stderr: float          # sqrt(variance / count)
    quantiles: dict        # percent -> value, at QUANTILES

    def as_dict(self) -> dict:
        return {
            "count": self.count,
            "mean": self.mean,
            "variance": self.variance,
            "stderr": self.stderr,
            "quantiles": {str(k): v for k, v in self.quantiles.items()},
        }


def summarize(samples: np.ndarray) -> SummaryStats:
    """Moment and quantile summary; the mean uses compensated summation so
    aggregation order cannot move the result at double precision."""
    x = np.asarray(samples, dtype=np.float64).ravel()
    if x.size < 2:
        raise ValueError("summarize needs at least two samples")
    if not np.all(np.isfinite(x)):
        raise ValueError("samples contain non-finite entries")
    count = int(x.size)
    mean = math.fsum(x) / count
    var = math.fsum((x - mean) ** 2) / (count - 1)
    return SummaryStats(
        count=count,
        mean=float(mean),
        variance=float(var),
        stderr=float(math.sqrt(var / count)),
        quantiles={q: float(np.percentile(x, q)) for q in QUANTILES},
    )


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    r_squared: float


def fit_log_slope(sizes: np.ndarray, values: np.ndarray) -> SlopeFit:
    """Least-squares line through (log size, log value) pairs."""
    sizes = np.asarray(sizes, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if sizes.shape != values.shape or sizes.ndim != 1 or sizes.size < 2:
        raise ValueError("need two equal-length vectors with >= 2 points")
    if np.min(sizes) <= 0 or np.min(values) <= 0:
        raise ValueError("log-log fit needs strictly positive data")
    lx = np.log(sizes)
    ly = np.log(values)
    slope, intercept = np.polyfit(lx, ly, 1)
    pred = slope * lx + intercept
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return SlopeFit(slope=float(slope), intercept=float(intercept), r_squared=float(r2))


def cover_sign_probability(n: int, m: int) -> float:
    """Sign-probability formula for a random n x m game:
    P(X <= m) with X binomial(n + m - 1, 1/2).

    Evaluated in log space from log-binomial coefficients, never by naive
    powers, so it stays exact to ~1e-12 well past n + m = 10^4.  Note the
    formula as stated is in tension with the exact symmetry P = 1/2 at
    n = m; the Monte Carlo adjudication below quantifies that gap.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    trials = n + m - 1
    if m >= trials:
        return 1.0
    k = np.arange(0, m + 1)
    logc = gammaln(trials + 1) - gammaln(k + 1) - gammaln(trials - k + 1)
    return float(np.exp(logsumexp(logc) - trials * math.log(2.0)))


def uniform_strategy_tail_bound(n: int, m: int, t: float) -> float:
    """Upper bound m exp(-n t^2 / 2) on P(value >= t), t >= 0.

    Comes from playing the uniform row strategy against every column and
    taking a union bound over columns."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    return float(m * math.exp(-n * t * t / 2.0))


def value_variance_lower_bound(n: int, m: int) -> float:
    """Lower bound 1/(nm) on the variance of a Gaussian game value."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    return 1.0 / (n * m)


def chi_mean(n: int) -> float:
    """Mean of the chi distribution with n degrees of freedom,
    sqrt(2) Gamma((n+1)/2) / Gamma(n/2), via log-gamma for stability."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return float(math.exp(0.5 * math.log(2.0) + gammaln((n + 1) / 2.0) - gammaln(n / 2.0)))


def positive_part_norm_bounds(n: int) -> tuple[float, float]:
    """(lower, upper) bounds on E ||g+|| for an n-dim standard Gaussian:
    sqrt(n/2) - 3/sqrt(n) and sqrt(n/2), with the lower clamped at 0."""
    if n < 1:
        raise ValueError("n must be >= 1")
    upper = math.sqrt(n / 2.0)
    return max(0.0, upper - 3.0 / math.sqrt(n)), upper


@dataclass(frozen=True)
class SupportCompareReport:
    n: int
    count: int
    mean: float
    variance: float
    expected_mean: float       # n/2 under the binomial(n, 1/2) reference
    expected_variance: float   # n/4
    tv_distance: float         # total variation to binomial(n, 1/2)
    freq_outside: float        # fraction outside [0.1 n, 0.9 n]


def binomial_support_compare(support_sizes: np.ndarray, n: int) -> SupportCompareReport:
    """Compare observed support sizes to the binomial(n, 1/2) reference."""
    k = np.asarray(support_sizes, dtype=np.float64).ravel()
    if k.size < 2:
        raise ValueError("need at least two support sizes")
    if np.min(k) < 0 or np.max(k) > n:
        raise ValueError("support sizes must lie in [0, n]")
    counts = np.bincount(k.astype(np.int64), minlength=n + 1)
    emp = counts / k.size
    ref = binom.pmf(np.arange(n + 1), n, 0.5)
    tv = 0.5 * float(np.sum(np.abs(emp - ref)))
    outside = float(np.mean((k < 0.1 * n) | (k > 0.9 * n)))
    return SupportCompareReport(
        n=n,
        count=int(k.size),
        mean=float(np.mean(k)),
        variance=float(np.var(k, ddof=1)),
        expected_mean=n / 2.0,
        expected_variance=n / 4.0,
        tv_distance=tv,
        freq_outside=outside,
    )


@dataclass(frozen=True)
class RectangularPoint:
    lam: float
    m: int                  # n + ceil(lam sqrt(n))
    mean: float
    stderr: float
    ratio: float            # mean * n / (sqrt(m) - sqrt(n)); nan when m == n


@dataclass(frozen=True)
class RectangularReport:
    n: int
    batch: int
    points: list[RectangularPoint]
    increasing: bool        # strict growth of the means along the lam grid


def rectangular_value_report(
    n: int,
    lambdas: list[float],
    batch: int,
    seed: RandomSeed,
    solve_opts: SolveOptions | None = None,
) -> RectangularReport:
    """Mean game value of n x (n + ceil(lam sqrt(n))) Gaussian games.

    The scaled ratio mean * n / (sqrt(m) - sqrt(n)) stays O(1) across the
    lam grid when the square-root edge law holds.
    """
    if batch < 2:
        raise ValueError("batch must be >= 2")
    points = []
    for j, lam in enumerate(lambdas):
        if lam < 0:
            raise ValueError("lam must be >= 0")
        m = n + int(math.ceil(lam * math.sqrt(n)))
        vals = np.empty(batch)
        for b in range(batch):
            M = sample_gaussian(n, m, derive_stream(seed, j * batch + b))
            vals[b] = solve_game(M, solve_opts).value
        s = summarize(vals)
        edge = math.sqrt(m) - math.sqrt(n)
        ratio = s.mean * n / edge if edge > 0 else float("nan")
        points.append(
            RectangularPoint(lam=float(lam), m=m, mean=s.mean, stderr=s.stderr, ratio=ratio)
        )
    means = [p.mean for p in points]
    increasing = all(b > a for a, b in zip(means, means[1:]))
    return RectangularReport(n=n, batch=batch, points=points, increasing=increasing)


@dataclass(frozen=True)
class CoverPoint:
    n: int
    m: int
    formula: float          # cover_sign_probability(n, m)
    mc_freq: float          # empirical P(value > 0)
    se: float               # binomial standard error of mc_freq
    discrepancy: float      # |formula - mc_freq|
    consistent: bool        # discrepancy <= 3 se


def cover_adjudication(
    pairs: list[tuple[int, int]],
    batch: int,
    seed: RandomSeed,
    solve_opts: SolveOptions | None = None,
) -> list[CoverPoint]:
    """Monte Carlo adjudication of the sign-probability formula.

    For each shape, the empirical frequency of a positive game value is
    tabulated against the closed-form number with a 3-standard-error
    consistency flag, making any systematic gap explicit.
    """
    if batch < 2:
        raise ValueError("batch must be >= 2")
    out = []
    for j, (n, m) in enumerate(pairs):
        pos = 0
        for b in range(batch):
            M = sample_gaussian(n, m, derive_stream(seed, j * batch + b))
            if solve_game(M, solve_opts).value > 0.0:
                pos += 1
        freq = pos / batch
        se = math.sqrt(max(freq * (1.0 - freq), 1.0 / batch) / batch)
        formula = cover_sign_probability(n, m)
        disc = abs(formula - freq)
        out.append(
            CoverPoint(
                n=n, m=m, formula=formula, mc_freq=freq, se=se,
                discrepancy=disc, consistent=bool(disc <= 3.0 * se),
            )
        )
    return out
