"""Episode rollouts, test averaging and population evaluation.

Every rollout is driven by an integer episode seed: the environment is reset
with it and the policy's action noise comes from a separate stream derived
from it. Agent seeds are hashed from ``(root, generation, index)``, so
population results never depend on how work is spread across workers.
"""
from __future__ import annotations

import csv
import hashlib
import logging
import math
import struct
from dataclasses import dataclass
from typing import Optional

import numpy as np
from joblib import Parallel, delayed

from .policy import PolicySpec, VectorSpec, flatten, forward, sample_action
from .problems import DirectObjective

logger = logging.getLogger(__name__)

FAILED = -math.inf

# role tags mixed into derived seeds
ROLE_AGENT = 0
ROLE_TEST = 1
ROLE_STYLE = 2
ROLE_INIT = 3

_SEED_MOD = 2 ** 32


@dataclass(frozen=True)
class EpisodeResult:
    fitness: float
    steps: int
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None or self.fitness == FAILED


def derive_seed(*keys: int) -> int:
    """Hash non-negative integer keys into a 32-bit seed."""
    data = struct.pack(f"<{len(keys)}Q", *(int(k) for k in keys))
    return int.from_bytes(hashlib.blake2b(data, digest_size=4).digest(), "little")


def param_spec_for(problem, hidden=(64, 64), activation="tanh"):
    if isinstance(problem, DirectObjective):
        return VectorSpec(problem.dim)
    return PolicySpec(problem.spec.obs_dim, problem.spec.act_dim, tuple(hidden), activation)


def evaluate(problem, spec, params, seed: int, deterministic: bool = False,
             trace: Optional[list] = None) -> EpisodeResult:
    """Roll ``params`` through one episode and return (fitness, steps).

    Direct objectives count as a single step. A non-finite reward aborts the
    episode and yields the ``-inf`` failure sentinel with an error message.
    When ``trace`` is a list, one dict per step is appended to it.
    """
    if isinstance(problem, DirectObjective):
        if spec.n_params != problem.dim:
            raise ValueError(f"spec has {spec.n_params} parameters, objective needs {problem.dim}")
        x = flatten(params)
        fitness = problem(x)
        if trace is not None:
            trace.append({"step": 0, "obs": [], "action": x.tolist(), "reward": fitness})
        if not math.isfinite(fitness):
            return EpisodeResult(FAILED, 1, f"non-finite objective value {fitness}")
        return EpisodeResult(fitness, 1)

    env = problem.clone()
    if (spec.obs_dim, spec.act_dim) != (env.spec.obs_dim, env.spec.act_dim):
        raise ValueError(
            f"policy dims ({spec.obs_dim}, {spec.act_dim}) do not match problem "
            f"({env.spec.obs_dim}, {env.spec.act_dim})")
    low = np.asarray(env.spec.action_low, dtype=float)
    high = np.asarray(env.spec.action_high, dtype=float)
    rng = np.random.default_rng([seed % _SEED_MOD, 1])
    obs = env.reset(seed % _SEED_MOD)
    fitness, t, done = 0.0, 0, False
    while not done:
        dist = forward(spec, params, obs)
        action = sample_action(dist, rng, low, high, deterministic=deterministic)
        next_obs, reward, done = env.step(action)
        t += 1
        if trace is not None:
            trace.append({"step": t - 1, "obs": obs.tolist(), "action": action.tolist(), "reward": reward})
        if not math.isfinite(reward):
            logger.warning("%s returned non-finite reward %r at step %d", env.name, reward, t)
            return EpisodeResult(FAILED, t, f"non-finite reward {reward!r} at step {t}")
        fitness += reward
        obs = next_obs
    return EpisodeResult(fitness, t)


def test_seeds(seed: int, test_num: int) -> list[int]:
    return [(seed + k) % _SEED_MOD for k in range(test_num)]


def test_scores(problem, spec, params, test_num: int, seed: int, deterministic=False) -> list[float]:
    """Fitness of ``test_num`` episodes using consecutive seeds from ``seed``."""
    if test_num < 1:
        raise ValueError("test_num must be >= 1")
    return [evaluate(problem, spec, params, s, deterministic).fitness for s in test_seeds(seed, test_num)]


def test_average(problem, spec, params, test_num: int, seed: int, deterministic=False) -> float:
    """Mean fitness over ``test_num`` independent episodes (budget-free)."""
    return float(np.mean(test_scores(problem, spec, params, test_num, seed, deterministic)))


def _safe_evaluate(problem, spec, params, seed, deterministic):
    try:
        return evaluate(problem, spec, params, seed, deterministic)
    except Exception as exc:  # recorded per slot, siblings continue
        logger.warning("evaluation failed: %s", exc)
        return EpisodeResult(FAILED, 0, f"{type(exc).__name__}: {exc}")


def agent_seed(root: int, generation: int, index: int) -> int:
    return derive_seed(root, generation, ROLE_AGENT, index)


def evaluate_population(problem, spec, population, root: int, generation: int = 0,
                        n_jobs: int = 1, deterministic: bool = False) -> list[EpisodeResult]:
    """Evaluate every agent once; results are aligned with ``population``.

    Agent ``i`` uses the seed derived from ``(root, generation, i)``, so the
    output is identical for any ``n_jobs``.
    """
    population = list(population)
    if not population:
        raise ValueError("population must be non-empty")
    seeds = [agent_seed(root, generation, i) for i in range(len(population))]
    if n_jobs == 1 or len(population) == 1:
        return [_safe_evaluate(problem, spec, p, s, deterministic) for p, s in zip(population, seeds)]
    return Parallel(n_jobs=n_jobs)(
        delayed(_safe_evaluate)(problem, spec, p, s, deterministic) for p, s in zip(population, seeds))


def write_trace(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "obs", "action", "reward"])
        for r in rows:
            w.writerow([r["step"], " ".join(repr(float(v)) for v in r["obs"]),
                        " ".join(repr(float(v)) for v in r["action"]), repr(float(r["reward"]))])
