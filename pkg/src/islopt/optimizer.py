"""Generational social-learning search with a test-averaged elite archive."""
from __future__ import annotations

import logging
import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .evaluation import (
    ROLE_INIT,
    ROLE_STYLE,
    ROLE_TEST,
    derive_seed,
    evaluate_population,
    param_spec_for,
    test_scores,
)
from .levy import alpha_at
from .policy import ParameterSet, init_params
from .problems import make_problem
from .styles import StyleConfig, style_phase

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    problem: str = "sphere"
    n_learn: int = 5
    n_imitate: int = 3
    n_selfstudy: int = 2
    max_step: int = 100_000
    sampling_num: int = 3
    test_num: int = 5
    seed: int = 0
    hidden: tuple[int, ...] = (64, 64)
    activation: str = "tanh"
    style: StyleConfig = field(default_factory=StyleConfig)
    deterministic_eval: bool = False
    n_jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))
        if min(self.n_learn, self.n_imitate, self.n_selfstudy) < 1:
            raise ValueError("every cohort needs at least one agent")
        if self.max_step <= 0:
            raise ValueError("max_step must be positive")
        if self.sampling_num < 0:
            raise ValueError("sampling_num must be >= 0")
        if self.test_num < 1:
            raise ValueError("test_num must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.n_jobs == 0:
            raise ValueError("n_jobs must be non-zero")

    @property
    def pop_num(self) -> int:
        return self.n_learn + self.n_imitate + self.n_selfstudy


@dataclass(frozen=True)
class ArchiveEntry:
    params: ParameterSet
    test_fitness: float
    generation: int


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    cumulative_steps: int
    best_fitness: float
    test_fitness_mean: float
    test_fitness_std: float
    archive_best: float
    best_style: str
    wall_time_s: float = field(default=0.0, compare=False)


@dataclass
class RunReport:
    optimizer: str
    problem: str
    spec: object
    records: list[GenerationRecord]
    archive: list[ArchiveEntry]
    best: Optional[ArchiveEntry]
    seed: int

    @property
    def total_steps(self) -> int:
        return self.records[-1].cumulative_steps if self.records else 0

    @property
    def generations(self) -> int:
        return len(self.records)


def select_best(fitnesses: Sequence[float]) -> Optional[int]:
    """Index of the largest finite fitness, lowest index on ties.

    Returns None when every entry is a failure sentinel.
    """
    best, best_idx = -math.inf, None
    for i, f in enumerate(fitnesses):
        if math.isfinite(f) and (best_idx is None or f > best):
            best, best_idx = f, i
    return best_idx


def archive_best(archive: Sequence[ArchiveEntry]) -> ArchiveEntry:
    """Entry with the highest test fitness; the earliest one wins ties."""
    if not archive:
        raise ValueError("archive is empty")
    best = archive[0]
    for entry in archive[1:]:
        if entry.test_fitness > best.test_fitness:
            best = entry
    return best


class GenerationLoop:
    """Budget accounting, evaluation, test averaging and archival shared by all optimizers."""

    def __init__(self, optimizer: str, problem, spec, *, max_step: int, test_num: int, seed: int,
                 n_jobs: int = 1, deterministic: bool = False):
        self.optimizer = optimizer
        self.problem = problem
        self.spec = spec
        self.max_step = max_step
        self.test_num = test_num
        self.seed = seed
        self.n_jobs = n_jobs
        self.deterministic = deterministic
        self.steps = 0
        self.generation = 0
        self.archive: list[ArchiveEntry] = []
        self.records: list[GenerationRecord] = []
        self._best: Optional[ArchiveEntry] = None
        self._t0 = time.perf_counter()

    @property
    def done(self) -> bool:
        return self.steps >= self.max_step

    @property
    def best(self) -> Optional[ArchiveEntry]:
        return self._best

    def init_population(self, size: int) -> list[ParameterSet]:
        g = self.generation
        return [init_params(self.spec, np.random.default_rng([self.seed, g, ROLE_INIT, i])) for i in range(size)]

    def agent_rngs(self, size: int) -> list[np.random.Generator]:
        g = self.generation
        return [np.random.default_rng([self.seed, g, ROLE_STYLE, i]) for i in range(size)]

    def step(self, population: list[ParameterSet], styles: Sequence[str]) -> list[float]:
        """Evaluate one generation, archive its tested best, return raw fitnesses."""
        g = self.generation
        results = evaluate_population(self.problem, self.spec, population, self.seed, g,
                                      self.n_jobs, self.deterministic)
        self.steps += sum(r.steps for r in results)
        fitness = [r.fitness for r in results]
        idx = select_best(fitness)
        best_fit, mean, std, style = -math.inf, math.nan, math.nan, "none"
        if idx is None:
            logger.warning("generation %d degenerate: every agent failed", g)
        else:
            scores = test_scores(self.problem, self.spec, population[idx], self.test_num,
                                 derive_seed(self.seed, g, ROLE_TEST), self.deterministic)
            best_fit, style = fitness[idx], styles[idx]
            mean, std = float(np.mean(scores)), float(np.std(scores))
            if math.isfinite(mean):
                entry = ArchiveEntry(population[idx], mean, g)
                self.archive.append(entry)
                if self._best is None or entry.test_fitness > self._best.test_fitness:
                    self._best = entry
            else:
                logger.warning("generation %d: test episodes failed; best not archived", g)
        self.records.append(GenerationRecord(
            generation=g,
            cumulative_steps=self.steps,
            best_fitness=best_fit,
            test_fitness_mean=mean,
            test_fitness_std=std,
            archive_best=self._best.test_fitness if self._best else -math.inf,
            best_style=style,
            wall_time_s=time.perf_counter() - self._t0,
        ))
        if g == 0 and self.steps > self.max_step:
            warnings.warn(f"budget max_step={self.max_step} is smaller than one generation "
                          f"({self.steps} steps); stopping after one generation", RuntimeWarning)
        self.generation += 1
        return fitness

    def report(self) -> RunReport:
        name = getattr(self.problem, "name", type(self.problem).__name__)
        return RunReport(self.optimizer, name, self.spec, list(self.records), list(self.archive),
                         self._best, self.seed)


def run(config: RunConfig, problem=None) -> RunReport:
    """Run the social-learning search until ``max_step`` environment steps are spent.

    The first ``sampling_num`` generations draw fresh standard-normal agents.
    Afterwards each generation builds three cohorts from the archive's best
    entry: the learning cohort persists across generations and takes Lévy
    steps, the imitation and self-study cohorts are regenerated from the best
    every generation. Test episodes do not count against the budget.
    """
    problem = problem if problem is not None else make_problem(config.problem)
    spec = param_spec_for(problem, config.hidden, config.activation)
    loop = GenerationLoop("isl", problem, spec, max_step=config.max_step, test_num=config.test_num,
                          seed=config.seed, n_jobs=config.n_jobs, deterministic=config.deterministic_eval)
    sched = config.style.schedule(config.max_step)
    n, p, q = config.n_learn, config.n_imitate, config.n_selfstudy
    styles = ["learn"] * n + ["imitate"] * p + ["selfstudy"] * q
    learners: list[ParameterSet] = []
    while not loop.done:
        if loop.generation < config.sampling_num or loop.best is None:
            pop = loop.init_population(config.pop_num)
            loop.step(pop, ["sample"] * config.pop_num)
            learners = pop[:n]
            continue
        alpha = alpha_at(sched, loop.steps)
        out = style_phase(learners, loop.best.params, p, q, alpha, config.style,
                          loop.agent_rngs(config.pop_num))
        learners = out.learners
        loop.step(out.learners + out.imitators + out.self_studiers, styles)
    return loop.report()
