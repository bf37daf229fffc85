"""Budget-matched comparison optimizers: a simple GA and pure random search.

Both reuse :class:`~islopt.optimizer.GenerationLoop`, so step accounting,
test averaging and reporting are identical to the social-learning search.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .evaluation import param_spec_for
from .optimizer import GenerationLoop, RunConfig, RunReport
from .policy import flatten, unflatten
from .problems import make_problem


@dataclass(frozen=True)
class GaConfig:
    pop_size: int = 10
    elite_fraction: float = 0.2
    tournament_size: int = 3
    mutation_prob: float = 0.9
    mutation_scale: float = 0.1

    def __post_init__(self):
        if self.pop_size < 2:
            raise ValueError("pop_size must be >= 2")
        if not (0.0 < self.elite_fraction < 1.0):
            raise ValueError("elite_fraction must lie in (0, 1)")
        if self.tournament_size < 2:
            raise ValueError("tournament_size must be >= 2")
        if not (0.0 <= self.mutation_prob <= 1.0):
            raise ValueError("mutation_prob must lie in [0, 1]")
        if self.mutation_scale < 0:
            raise ValueError("mutation_scale must be >= 0")

    @property
    def n_elite(self) -> int:
        return min(self.pop_size, max(1, int(math.floor(self.elite_fraction * self.pop_size + 0.5))))


def _loop(name, config: RunConfig, problem):
    problem = problem if problem is not None else make_problem(config.problem)
    spec = param_spec_for(problem, config.hidden, config.activation)
    return GenerationLoop(name, problem, spec, max_step=config.max_step, test_num=config.test_num,
                          seed=config.seed, n_jobs=config.n_jobs, deterministic=config.deterministic_eval)


def _tournament(fitness, k, rng):
    entrants = rng.choice(len(fitness), size=min(k, len(fitness)), replace=False)
    # ties go to the lower index
    return int(min(entrants, key=lambda i: (-fitness[i], i)))


def ga_run(config: RunConfig, problem=None, ga: GaConfig = GaConfig()) -> RunReport:
    """Generational GA: elitism, tournament selection, Gaussian mutation, no crossover."""
    loop = _loop("ga", config, problem)
    pop = loop.init_population(ga.pop_size)
    styles = ["sample"] * ga.pop_size
    n_elite = ga.n_elite
    while not loop.done:
        fitness = loop.step(pop, styles)
        key = [f if math.isfinite(f) else -math.inf for f in fitness]
        order = sorted(range(len(pop)), key=lambda i: (-key[i], i))
        nxt = [pop[i] for i in order[:n_elite]]
        for rng in loop.agent_rngs(ga.pop_size - n_elite):
            parent = pop[_tournament(key, ga.tournament_size, rng)]
            if rng.random() < ga.mutation_prob:
                flat = flatten(parent) + rng.normal(0.0, ga.mutation_scale, size=parent.size)
                parent = unflatten(loop.spec, flat)
            nxt.append(parent)
        pop = nxt
        styles = ["elite"] * n_elite + ["offspring"] * (ga.pop_size - n_elite)
    return loop.report()


def random_search_run(config: RunConfig, problem=None, pop_size: int | None = None) -> RunReport:
    """Fresh standard-normal agents every generation; the archive keeps the best."""
    loop = _loop("random", config, problem)
    size = pop_size or config.pop_num
    while not loop.done:
        loop.step(loop.init_population(size), ["random"] * size)
    return loop.report()
