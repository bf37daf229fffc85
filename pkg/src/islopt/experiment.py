"""Seeded multi-run batches, learning-curve CSVs and policy replay."""
from __future__ import annotations

import csv
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from joblib import Parallel, delayed

from .baselines import ga_run, random_search_run
from .config import ConfigError, ExperimentConfig, dump_config, load_config
from .evaluation import evaluate, test_seeds, write_trace
from .optimizer import RunReport, run
from .policy import PolicySpec, VectorSpec, load_params, save_params
from .problems import DirectObjective, make_problem

logger = logging.getLogger(__name__)

CURVE_COLUMNS = (
    "generation", "cumulative_steps", "best_fitness", "test_fitness_mean", "test_fitness_std",
    "wall_time_s", "best_style", "archive_best", "optimizer",
)
AGGREGATE_COLUMNS = (
    "generation", "n_runs", "cumulative_steps_mean", "best_fitness_mean", "best_fitness_std",
    "test_fitness_mean", "test_fitness_std", "archive_best_mean", "archive_best_std",
)
SUMMARY_COLUMNS = ("optimizer", "problem", "num_seeds", "completed", "max_test_fitness_mean",
                   "max_test_fitness_std")

_RUNNERS = {
    "isl": lambda cfg, seed, n_jobs, problem: run(cfg.run_config(seed, n_jobs), problem),
    "ga": lambda cfg, seed, n_jobs, problem: ga_run(cfg.run_config(seed, n_jobs), problem, cfg.ga_config()),
    "random": lambda cfg, seed, n_jobs, problem: random_search_run(cfg.run_config(seed, n_jobs), problem,
                                                                   cfg.pop_num),
}


def _fmt(x) -> str:
    return repr(float(x))


def curve_rows(report: RunReport, record_timing: bool = True) -> list[list[str]]:
    rows = []
    for r in report.records:
        rows.append([
            str(r.generation), str(r.cumulative_steps), _fmt(r.best_fitness), _fmt(r.test_fitness_mean),
            _fmt(r.test_fitness_std), f"{r.wall_time_s:.3f}" if record_timing else "", r.best_style,
            _fmt(r.archive_best), report.optimizer,
        ])
    return rows


def write_curve(path, report: RunReport, record_timing: bool = True) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CURVE_COLUMNS)
        w.writerows(curve_rows(report, record_timing))


def _finite_stats(values):
    vals = np.array([v for v in values if math.isfinite(v)], dtype=float)
    if vals.size == 0:
        return math.nan, math.nan
    return float(vals.mean()), float(vals.std())


def aggregate_rows(reports: list[RunReport]) -> list[list[str]]:
    """Per-generation mean and population std across runs, aligned by generation index."""
    rows = []
    length = max((len(r.records) for r in reports), default=0)
    for g in range(length):
        recs = [r.records[g] for r in reports if g < len(r.records)]
        steps = float(np.mean([x.cumulative_steps for x in recs]))
        bf = _finite_stats([x.best_fitness for x in recs])
        tf = _finite_stats([x.test_fitness_mean for x in recs])
        ab = _finite_stats([x.archive_best for x in recs])
        rows.append([str(g), str(len(recs)), _fmt(steps), *map(_fmt, (*bf, *tf, *ab))])
    return rows


def write_aggregate(path, reports: list[RunReport]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(AGGREGATE_COLUMNS)
        w.writerows(aggregate_rows(reports))


@dataclass
class ExperimentSummary:
    optimizer: str
    problem: str
    reports: dict[int, RunReport]
    failures: dict[int, str] = field(default_factory=dict)
    wall_time_s: float = 0.0
    output_dir: Path | None = None

    @property
    def max_test_fitness(self) -> list[float]:
        return [r.best.test_fitness for r in self.reports.values() if r.best is not None]

    @property
    def mean_std(self) -> tuple[float, float]:
        return _finite_stats(self.max_test_fitness)

    def table(self) -> str:
        mean, std = self.mean_std
        head = f"{'optimizer':<10} {'problem':<12} {'max test_fitness (mean ± std)':<32} {'wall time [s]':>13}"
        line = f"{self.optimizer:<10} {self.problem:<12} {f'{mean:.4f} ± {std:.4f}':<32} {self.wall_time_s:>13.1f}"
        return head + "\n" + line


def _one_run(cfg: ExperimentConfig, seed: int, n_jobs: int):
    try:
        return seed, _RUNNERS[cfg.optimizer](cfg, seed, n_jobs, cfg.make_problem()), None
    except Exception as exc:  # batch continues past a failed run
        logger.exception("run with seed %d failed", seed)
        return seed, None, f"{type(exc).__name__}: {exc}"


def run_experiment(cfg: ExperimentConfig, out_dir=None, echo=print) -> ExperimentSummary:
    """Run ``num_seeds`` seeds (``seed + k``) and write the output tree.

    Files written under ``out_dir`` (default ``cfg.output_dir``)::

        config.txt            resolved configuration
        run_seed<S>.csv       learning curve of each run
        best_seed<S>.params   archive-best policy of each run
        trace_seed<S>.csv     per-step trace of the best policy (debug_trace only)
        aggregate.csv         per-generation mean/std across runs
        summary.csv           max test fitness mean/std across runs
        failures.txt          only when a run raised
    """
    out = Path(out_dir if out_dir is not None else cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(dump_config(cfg))
    seeds = [cfg.seed + k for k in range(cfg.num_seeds)]
    t0 = time.perf_counter()
    if cfg.parallel_runs and cfg.workers > 1 and len(seeds) > 1:
        outer = min(cfg.workers, len(seeds))
        inner = max(1, cfg.workers // outer)
        results = Parallel(n_jobs=outer)(delayed(_one_run)(cfg, s, inner) for s in seeds)
    else:
        results = [_one_run(cfg, s, cfg.workers) for s in seeds]
    summary = ExperimentSummary(cfg.optimizer, cfg.problem, {}, output_dir=out)
    for seed, report, err in results:
        if err is not None:
            summary.failures[seed] = err
            continue
        summary.reports[seed] = report
        write_curve(out / f"run_seed{seed}.csv", report, cfg.record_timing)
        if report.best is not None:
            save_params(out / f"best_seed{seed}.params", report.spec, report.best.params)
            if cfg.debug_trace:
                rows = []
                evaluate(cfg.make_problem(), report.spec, report.best.params, seed, cfg.deterministic_eval, rows)
                write_trace(out / f"trace_seed{seed}.csv", rows)
    summary.wall_time_s = time.perf_counter() - t0
    write_aggregate(out / "aggregate.csv", list(summary.reports.values()))
    mean, std = summary.mean_std
    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        w.writerow([cfg.optimizer, cfg.problem, cfg.num_seeds, len(summary.reports), _fmt(mean), _fmt(std)])
    if summary.failures:
        (out / "failures.txt").write_text("".join(f"seed {s}: {m}\n" for s, m in sorted(summary.failures.items())))
    if echo is not None:
        echo(summary.table())
    return summary


def _problem_dims(problem):
    if isinstance(problem, DirectObjective):
        return VectorSpec(problem.dim)
    return problem.spec.obs_dim, problem.spec.act_dim


def replay(params_path, problem, episodes: int = 1, seed: int = 0, deterministic: bool = False,
           trace_path=None) -> list[float]:
    """Run a stored policy for ``episodes`` episodes (seeds ``seed + k``)."""
    if episodes < 1:
        raise ValueError("episodes must be >= 1")
    if isinstance(problem, str):
        problem = make_problem(problem)
    spec, params = load_params(params_path)
    if isinstance(problem, DirectObjective):
        if not isinstance(spec, VectorSpec) or spec.dim != problem.dim:
            raise ConfigError(f"{params_path}: stored parameters do not fit {problem!r}")
    elif not isinstance(spec, PolicySpec) or (spec.obs_dim, spec.act_dim) != _problem_dims(problem):
        raise ConfigError(
            f"{params_path}: stored policy dims do not match problem {problem.name!r} "
            f"(obs_dim={problem.spec.obs_dim}, act_dim={problem.spec.act_dim})")
    trace = [] if trace_path is not None else None
    scores = [evaluate(problem, spec, params, s, deterministic, trace).fitness for s in test_seeds(seed, episodes)]
    if trace_path is not None:
        write_trace(trace_path, trace)
    return scores


__all__ = ["AGGREGATE_COLUMNS", "CURVE_COLUMNS", "ExperimentSummary", "aggregate_rows", "curve_rows",
           "load_config", "replay", "run_experiment", "write_aggregate", "write_curve"]
