"""Command-line experiment drivers.

Subcommands
-----------
solve        value/strategies of one matrix from a CSV or JSON file
experiment   run the experiment described by a JSON config file
report       recompute summaries from a previously written trials CSV
scaling      square-size sweep of the value's standard deviation
gordon       tail comparison of game values against the vector surrogate
cones        statistical-dimension sweep of the circular cone family
supports     support-size statistics against the binomial reference
rectangular  mean value growth of slightly rectangular games

Every experiment is a pure function of (config, seed): trial i draws its
own child stream ``derive_stream(seed, i)``, workers never share state, and
rows are aggregated in trial order, so outputs are byte-identical across
runs and across ``--threads`` settings.  Wall-clock timing is logged to
stderr only; the ``wall_ms`` column is written as 0 to keep the files
deterministic.

Exit codes: 0 success, 1 bad configuration, 2 solver failures above 1% of
trials, 3 I/O or parse errors.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from .cones import estimate_statistical_dimension, statistical_dimension_bound
from .ensembles import (
    GAUSSIAN,
    EnsembleSpec,
    MatrixParseError,
    RandomSeed,
    derive_stream,
    matrix_from_csv,
    matrix_from_json,
    sample_matrix,
)
from .solver import SolveOptions, SolverFailure, solve_game
from .stats import (
    binomial_support_compare,
    fit_log_slope,
    rectangular_value_report,
    summarize,
)
from .surrogate import comparison_experiment, comparison_to_csv

TRIALS_HEADER = "trial_index,seed,n,m,ensemble,value,support_size,y_norm2,degenerate,iterations,wall_ms"
DELTA_HEADER = "epsilon,n,batch,delta_hat,stderr,upper_bound"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2
EXIT_IO = 3

_MODES = ("values", "scaling", "supports", "gordon", "cones", "rectangular")
_FAILURE_BUDGET = 0.01


class ConfigError(ValueError):
    pass


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str
    ensemble: EnsembleSpec = EnsembleSpec(GAUSSIAN)
    sizes: tuple = ((16, 16),)
    batch: int = 100
    seed: int = 0
    solver: SolveOptions = SolveOptions()
    t_grid: tuple = tuple(np.linspace(-0.5, 0.5, 21))
    lambdas: tuple = (1.0, 2.0, 4.0)
    epsilon_fractions: tuple = (0.0, 0.125, 0.25, 0.5, 0.75, 1.0)
    trials_path: str = "trials.csv"
    summary_path: str = "summary.json"

    def root_seed(self) -> RandomSeed:
        return RandomSeed(self.seed)


def _parse_config(obj: dict) -> ExperimentConfig:
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(obj) - {
        "mode", "ensemble", "sizes", "batch", "seed", "solver",
        "t_grid", "lambdas", "epsilon_fractions", "outputs",
    }
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    mode = obj.get("mode")
    if mode not in _MODES:
        raise ConfigError(f"mode must be one of {_MODES}, got {mode!r}")

    ens_obj = obj.get("ensemble", {"kind": GAUSSIAN})
    if not isinstance(ens_obj, dict) or "kind" not in ens_obj:
        raise ConfigError('ensemble must be an object with a "kind"')
    try:
        ensemble = EnsembleSpec(ens_obj["kind"], ens_obj.get("p"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    sizes_obj = obj.get("sizes", [[16, 16]])
    try:
        sizes = tuple((int(n), int(m)) for n, m in sizes_obj)
    except (TypeError, ValueError):
        raise ConfigError("sizes must be a list of [n, m] pairs") from None
    if not sizes or any(n < 1 or m < 1 for n, m in sizes):
        raise ConfigError("sizes must contain pairs of positive integers")

    batch = obj.get("batch", 100)
    if not isinstance(batch, int) or batch < 2:
        raise ConfigError("batch must be an integer >= 2")
    seed = obj.get("seed", 0)
    if not isinstance(seed, int) or not (0 <= seed < 2**64):
        raise ConfigError("seed must be an integer in [0, 2**64)")

    sol_obj = obj.get("solver", {})
    if not isinstance(sol_obj, dict):
        raise ConfigError("solver must be an object")
    try:
        solver = SolveOptions(
            tolerance=sol_obj.get("tolerance", 1e-9),
            support_threshold=sol_obj.get("support_threshold", 1e-8),
            max_pivots=sol_obj.get("max_pivots"),
            anti_cycling=sol_obj.get("anti_cycling", True),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    outputs = obj.get("outputs", {})
    if not isinstance(outputs, dict):
        raise ConfigError("outputs must be an object")

    kwargs = {}
    if "t_grid" in obj:
        kwargs["t_grid"] = tuple(float(t) for t in obj["t_grid"])
    if "lambdas" in obj:
        kwargs["lambdas"] = tuple(float(t) for t in obj["lambdas"])
        if any(t < 0 for t in kwargs["lambdas"]):
            raise ConfigError("lambdas must be >= 0")
    if "epsilon_fractions" in obj:
        kwargs["epsilon_fractions"] = tuple(float(t) for t in obj["epsilon_fractions"])
        if any(not 0 <= t <= 1 for t in kwargs["epsilon_fractions"]):
            raise ConfigError("epsilon_fractions must lie in [0, 1]")

    return ExperimentConfig(
        mode=mode,
        ensemble=ensemble,
        sizes=sizes,
        batch=batch,
        seed=seed,
        solver=solver,
        trials_path=outputs.get("trials_path", "trials.csv"),
        summary_path=outputs.get("summary_path", "summary.json"),
        **kwargs,
    )


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return _parse_config(obj)


# ---------------------------------------------------------------------------
# deterministic parallel trials

def _run_trial(args: tuple) -> tuple:
    """One solver trial; a pure function of its argument pack."""
    (idx, base, n, m, kind, p, tol, sthr, maxp, anti) = args
    seed = derive_stream(RandomSeed(base), idx)
    M = sample_matrix(EnsembleSpec(kind, p), n, m, seed)
    opts = SolveOptions(
        tolerance=tol, support_threshold=sthr, max_pivots=maxp, anti_cycling=anti
    )
    try:
        sol = solve_game(M, opts)
    except SolverFailure:
        return (idx, seed.stream_index, n, m, None, 0, 0.0, 0, 0)
    return (
        idx,
        seed.stream_index,
        n,
        m,
        sol.value,
        int(sol.support_cols.size),
        float(np.linalg.norm(sol.y)),
        int(sol.degenerate),
        sol.iterations,
    )


def run_trials(config: ExperimentConfig, threads: int) -> tuple[list[tuple], int]:
    """All (size x batch) trials, in trial-index order; returns (rows, failures).

    Trial i of size s has global index ``s * batch + i`` and derives its
    stream from the root seed alone, so scheduling cannot influence any row.
    """
    sol = config.solver
    packs = []
    for s, (n, m) in enumerate(config.sizes):
        for b in range(config.batch):
            idx = s * config.batch + b
            packs.append(
                (idx, config.seed, n, m, config.ensemble.kind, config.ensemble.p,
                 sol.tolerance, sol.support_threshold, sol.max_pivots, sol.anti_cycling)
            )
    if threads > 1:
        chunk = max(1, len(packs) // (8 * threads))
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as ex:
            rows = list(ex.map(_run_trial, packs, chunksize=chunk))
    else:
        rows = [_run_trial(p) for p in packs]
    rows.sort(key=lambda r: r[0])
    failures = sum(1 for r in rows if r[4] is None)
    return rows, failures


def trials_to_csv(rows: list[tuple], label: str) -> str:
    lines = [TRIALS_HEADER]
    for (idx, stream, n, m, value, support, ynorm, degen, iters) in rows:
        if value is None:
            continue
        lines.append(
            f"{idx},{stream},{n},{m},{label},{_fmt(value)},{support},"
            f"{_fmt(ynorm)},{degen},{iters},0"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# summaries

def _clean(x):
    """Make a structure JSON-safe: numpy scalars to python, NaN to None."""
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return None if math.isnan(x) else x
    if isinstance(x, (np.integer, int)):
        return int(x)
    return x


def _per_size_summaries(config: ExperimentConfig, rows: list[tuple]) -> list[dict]:
    out = []
    for s, (n, m) in enumerate(config.sizes):
        chunk = [r for r in rows if s * config.batch <= r[0] < (s + 1) * config.batch]
        values = np.array([r[4] for r in chunk if r[4] is not None])
        supports = np.array([r[5] for r in chunk if r[4] is not None])
        ynorms = np.array([r[6] for r in chunk if r[4] is not None])
        degens = sum(r[7] for r in chunk if r[4] is not None)
        entry = {
            "n": n,
            "m": m,
            "count": int(values.size),
            "degenerate": int(degens),
            "value": summarize(values).as_dict() if values.size >= 2 else None,
            "support_size": (
                summarize(supports.astype(float)).as_dict() if values.size >= 2 else None
            ),
            "y_norm2": summarize(ynorms).as_dict() if values.size >= 2 else None,
        }
        out.append(entry)
    return out


def _summary_skeleton(config: ExperimentConfig, failures: int, total: int) -> dict:
    return {
        "mode": config.mode,
        "ensemble": config.ensemble.label(),
        "sizes": [list(s) for s in config.sizes],
        "batch": config.batch,
        "seed": config.seed,
        "trials": total,
        "failures": failures,
    }


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _dump_summary(path: str, summary: dict) -> None:
    _write(path, json.dumps(_clean(summary), indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# experiment runners (return process exit code)

def _out_paths(config: ExperimentConfig, out_dir: str) -> tuple[str, str]:
    os.makedirs(out_dir, exist_ok=True)
    return (
        os.path.join(out_dir, config.trials_path),
        os.path.join(out_dir, config.summary_path),
    )


def _run_matrix_mode(config: ExperimentConfig, out_dir: str, threads: int) -> int:
    t0 = time.perf_counter()
    rows, failures = run_trials(config, threads)
    trials_path, summary_path = _out_paths(config, out_dir)
    _write(trials_path, trials_to_csv(rows, config.ensemble.label()))

    summary = _summary_skeleton(config, failures, len(rows))
    summary["per_size"] = _per_size_summaries(config, rows)

    if config.mode == "scaling":
        ns, sigmas, ses = [], [], []
        for entry in summary["per_size"]:
            if entry["value"] is None:
                continue
            sd = math.sqrt(entry["value"]["variance"])
            cnt = entry["count"]
            ns.append(entry["n"])
            sigmas.append(sd)
            ses.append(sd / math.sqrt(2.0 * (cnt - 1)))
        if len(ns) >= 2:
            fit = fit_log_slope(np.array(ns, dtype=float), np.array(sigmas))
            summary["fit"] = {
                "slope": fit.slope, "intercept": fit.intercept,
                "r_squared": fit.r_squared,
            }
        else:
            summary["fit"] = None
        summary["points"] = [
            {"n": n, "sigma": s, "se_sigma": e} for n, s, e in zip(ns, sigmas, ses)
        ]
    elif config.mode == "supports":
        for s, entry in enumerate(summary["per_size"]):
            chunk = [r for r in rows
                     if s * config.batch <= r[0] < (s + 1) * config.batch and r[4] is not None]
            if len(chunk) < 2:
                entry["binomial_compare"] = None
                continue
            ks = np.array([r[5] for r in chunk], dtype=float)
            rep = binomial_support_compare(ks, entry["n"])
            entry["binomial_compare"] = {
                "mean": rep.mean,
                "variance": rep.variance,
                "expected_mean": rep.expected_mean,
                "expected_variance": rep.expected_variance,
                "tv_distance": rep.tv_distance,
                "freq_outside": rep.freq_outside,
            }

    _dump_summary(summary_path, summary)
    print(
        f"{config.mode}: {len(rows)} trials, {failures} failures, "
        f"{time.perf_counter() - t0:.1f}s",
        file=sys.stderr,
    )
    return EXIT_SOLVER if failures > _FAILURE_BUDGET * max(1, len(rows)) else EXIT_OK


def _run_gordon(config: ExperimentConfig, out_dir: str) -> int:
    t0 = time.perf_counter()
    n, m = config.sizes[0]
    res = comparison_experiment(
        n, m, config.batch, np.array(config.t_grid), config.root_seed(),
        solve_opts=config.solver,
    )
    trials_path, summary_path = _out_paths(config, out_dir)
    _write(trials_path, comparison_to_csv(res.points))
    summary = _summary_skeleton(config, 0, config.batch)
    summary["resamples"] = res.resamples
    summary["value"] = summarize(res.values).as_dict()
    summary["surrogate_lower"] = summarize(res.lower).as_dict()
    summary["surrogate_estimate"] = summarize(res.estimate).as_dict()
    summary["sandwich_violations"] = int(np.sum(res.lower > res.estimate + 1e-8))
    _dump_summary(summary_path, summary)
    print(f"gordon: {config.batch} trials, {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    return EXIT_OK


def _run_cones(config: ExperimentConfig, out_dir: str) -> int:
    t0 = time.perf_counter()
    n = config.sizes[0][0]
    lim = 1.0 / math.sqrt(n)
    lines = [DELTA_HEADER]
    sweep = []
    for j, frac in enumerate(config.epsilon_fractions):
        eps = frac * lim
        mean, se = estimate_statistical_dimension(
            eps, n, config.batch, derive_stream(config.root_seed(), j)
        )
        bound = statistical_dimension_bound(eps, n)
        lines.append(
            f"{_fmt(eps)},{n},{config.batch},{_fmt(mean)},{_fmt(se)},{_fmt(bound)}"
        )
        sweep.append(
            {"epsilon": eps, "delta_hat": mean, "stderr": se, "upper_bound": bound,
             "within_bound": bool(mean <= bound + 3.0 * se)}
        )
    trials_path, summary_path = _out_paths(config, out_dir)
    _write(trials_path, "\n".join(lines) + "\n")
    summary = _summary_skeleton(config, 0, config.batch * len(config.epsilon_fractions))
    summary["sweep"] = sweep
    _dump_summary(summary_path, summary)
    print(f"cones: sweep of {len(sweep)} epsilons, {time.perf_counter() - t0:.1f}s",
          file=sys.stderr)
    return EXIT_OK


def _run_rectangular(config: ExperimentConfig, out_dir: str, threads: int) -> int:
    t0 = time.perf_counter()
    n = config.sizes[0][0]
    sizes = tuple(
        (n, n + int(math.ceil(lam * math.sqrt(n)))) for lam in config.lambdas
    )
    widened = ExperimentConfig(
        mode="values", ensemble=config.ensemble, sizes=sizes, batch=config.batch,
        seed=config.seed, solver=config.solver,
        trials_path=config.trials_path, summary_path=config.summary_path,
    )
    rows, failures = run_trials(widened, threads)
    trials_path, summary_path = _out_paths(config, out_dir)
    _write(trials_path, trials_to_csv(rows, config.ensemble.label()))

    summary = _summary_skeleton(config, failures, len(rows))
    points = []
    means = []
    for s, lam in enumerate(config.lambdas):
        chunk = [r for r in rows
                 if s * config.batch <= r[0] < (s + 1) * config.batch and r[4] is not None]
        m = sizes[s][1]
        if len(chunk) < 2:
            points.append({"lambda": lam, "m": m, "mean": None, "stderr": None,
                           "ratio": None})
            means.append(float("nan"))
            continue
        values = np.array([r[4] for r in chunk])
        stat = summarize(values)
        edge = math.sqrt(m) - math.sqrt(n)
        points.append(
            {"lambda": lam, "m": m, "mean": stat.mean, "stderr": stat.stderr,
             "ratio": stat.mean * n / edge if edge > 0 else float("nan")}
        )
        means.append(stat.mean)
    summary["points"] = points
    summary["increasing"] = bool(all(b > a for a, b in zip(means, means[1:])))
    _dump_summary(summary_path, summary)
    print(f"rectangular: {len(rows)} trials, {failures} failures, "
          f"{time.perf_counter() - t0:.1f}s", file=sys.stderr)
    return EXIT_SOLVER if failures > _FAILURE_BUDGET * max(1, len(rows)) else EXIT_OK


def run_experiment(config: ExperimentConfig, out_dir: str, threads: int) -> int:
    if config.mode in ("values", "scaling", "supports"):
        return _run_matrix_mode(config, out_dir, threads)
    if config.mode == "gordon":
        return _run_gordon(config, out_dir)
    if config.mode == "cones":
        return _run_cones(config, out_dir)
    if config.mode == "rectangular":
        return _run_rectangular(config, out_dir, threads)
    raise ConfigError(f"unhandled mode {config.mode!r}")


# ---------------------------------------------------------------------------
# report: recompute summaries from a trials CSV

def read_trials_csv(path: str) -> list[tuple]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise MatrixParseError(f"cannot read trials file: {exc}") from None
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MatrixParseError("trials file is empty")
    if lines[0] != TRIALS_HEADER:
        raise MatrixParseError(f"unexpected header: {lines[0]!r}", line=1)
    rows = []
    for lineno, ln in enumerate(lines[1:], start=2):
        cells = ln.split(",")
        if len(cells) != 11:
            raise MatrixParseError(f"expected 11 columns, got {len(cells)}", line=lineno)
        try:
            rows.append(
                (int(cells[0]), int(cells[1]), int(cells[2]), int(cells[3]),
                 float(cells[5]), int(cells[6]), float(cells[7]), int(cells[8]),
                 int(cells[9]), cells[4])
            )
        except ValueError as exc:
            raise MatrixParseError(str(exc), line=lineno) from None
    if not rows:
        raise MatrixParseError("trials file has a header but no rows")
    return rows


def run_report(trials_path: str, mode: str, out_dir: str) -> int:
    rows = read_trials_csv(trials_path)
    os.makedirs(out_dir, exist_ok=True)
    by_size: dict[tuple[int, int], list] = {}
    for r in rows:
        by_size.setdefault((r[2], r[3]), []).append(r)

    per_size = []
    for (n, m), chunk in sorted(by_size.items()):
        values = np.array([r[4] for r in chunk])
        supports = np.array([r[5] for r in chunk], dtype=float)
        ynorms = np.array([r[6] for r in chunk])
        entry = {
            "n": n, "m": m, "count": len(chunk),
            "degenerate": int(sum(r[7] for r in chunk)),
            "value": summarize(values).as_dict(),
            "support_size": summarize(supports).as_dict(),
            "y_norm2": summarize(ynorms).as_dict(),
        }
        if mode == "supports":
            rep = binomial_support_compare(supports, n)
            entry["binomial_compare"] = {
                "mean": rep.mean, "variance": rep.variance,
                "expected_mean": rep.expected_mean,
                "expected_variance": rep.expected_variance,
                "tv_distance": rep.tv_distance, "freq_outside": rep.freq_outside,
            }
        per_size.append(entry)

    summary = {"mode": mode, "source": os.path.basename(trials_path), "per_size": per_size}
    if mode == "scaling":
        ns = np.array([e["n"] for e in per_size], dtype=float)
        sigmas = np.array([math.sqrt(e["value"]["variance"]) for e in per_size])
        fit = fit_log_slope(ns, sigmas)
        summary["fit"] = {
            "slope": fit.slope, "intercept": fit.intercept, "r_squared": fit.r_squared
        }
        plot = ["n,sigma_hat,se_sigma"]
        for e, sd in zip(per_size, sigmas):
            se = sd / math.sqrt(2.0 * (e["count"] - 1))
            plot.append(f"{e['n']},{_fmt(sd)},{_fmt(se)}")
        _write(os.path.join(out_dir, "plot.csv"), "\n".join(plot) + "\n")

    _dump_summary(os.path.join(out_dir, "summary.json"), summary)
    return EXIT_OK


# ---------------------------------------------------------------------------
# solve: one matrix from disk

def _load_matrix(path: str) -> np.ndarray:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise MatrixParseError(f"cannot read matrix file: {exc}") from None
    if path.endswith(".json") or text.lstrip().startswith("{"):
        return matrix_from_json(text)
    return matrix_from_csv(text)


def run_solve(path: str, tolerance: float) -> int:
    M = _load_matrix(path)
    try:
        opts = SolveOptions(tolerance=tolerance)
        sol = solve_game(M, opts)
    except (ValueError, SolverFailure) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    print(json.dumps(_clean(sol.to_dict()), indent=2, sort_keys=True))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def _default_config_for(mode: str, args: argparse.Namespace) -> ExperimentConfig:
    defaults = {
        "scaling": {"sizes": ((8, 8), (16, 16), (32, 32), (64, 64), (128, 128)),
                    "batch": 400},
        "gordon": {"sizes": ((20, 20),), "batch": 2000},
        "cones": {"sizes": ((64, 64),), "batch": 2000},
        "supports": {"sizes": ((64, 64),), "batch": 400},
        "rectangular": {"sizes": ((64, 64),), "batch": 1000},
    }[mode]
    sizes = defaults["sizes"]
    if args.n is not None:
        if args.n < 1:
            raise ConfigError("--n must be >= 1")
        if mode == "scaling":
            # --n caps the dyadic sweep so the log-log fit keeps >= 2 points.
            swept = tuple((k, k) for k in (8, 16, 32, 64, 128) if k <= args.n)
            sizes = swept if len(swept) >= 2 else ((args.n, args.n),)
        else:
            sizes = ((args.n, args.n),)
    batch = args.batch if args.batch is not None else defaults["batch"]
    if batch < 2:
        raise ConfigError("batch must be >= 2")
    if args.seed is not None and not (0 <= args.seed < 2**64):
        raise ConfigError("seed must be in [0, 2**64)")
    return ExperimentConfig(
        mode=mode,
        sizes=sizes,
        batch=batch,
        seed=args.seed if args.seed is not None else 0,
    )


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="randgames",
        description="Solvers and experiments for random zero-sum matrix games.",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("solve", help="solve one matrix from a CSV or JSON file")
    p.add_argument("--matrix", required=True, help="path to the payoff matrix")
    p.add_argument("--tolerance", type=float, default=1e-9)

    p = sub.add_parser("experiment", help="run an experiment from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("report", help="summaries from an existing trials CSV")
    p.add_argument("--trials", required=True)
    p.add_argument("--mode", choices=("values", "scaling", "supports"), default="values")
    p.add_argument("--out", default=".")

    for mode in ("scaling", "gordon", "cones", "supports", "rectangular"):
        p = sub.add_parser(mode, help=f"run the default {mode} experiment")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--batch", type=int, default=None)
        p.add_argument("--n", type=int, default=None, help="override the square size")
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--out", default=".")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    threads = getattr(args, "threads", None)
    if threads is None:
        threads = os.cpu_count() or 1
    if threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.cmd == "solve":
            return run_solve(args.matrix, args.tolerance)
        if args.cmd == "experiment":
            config = load_config(args.config)
            if args.seed is not None:
                if not (0 <= args.seed < 2**64):
                    raise ConfigError("seed must be in [0, 2**64)")
                config = ExperimentConfig(
                    **{**config.__dict__, "seed": args.seed}
                )
            return run_experiment(config, args.out, threads)
        if args.cmd == "report":
            return run_report(args.trials, args.mode, args.out)
        config = _default_config_for(args.cmd, args)
        return run_experiment(config, args.out, threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MatrixParseError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
