from __future__ import annotations

import copy
import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnvSpec:
    obs_dim: int
    act_dim: int
    action_low: tuple[float, ...]
    action_high: tuple[float, ...]
    episode_cap: int
    discount: float = 1.0

    def __post_init__(self):
        low = np.asarray(self.action_low, dtype=float)
        high = np.asarray(self.action_high, dtype=float)
        if low.shape != (self.act_dim,) or high.shape != (self.act_dim,):
            raise ValueError("action bounds must have length act_dim")
        if not np.all(low < high):
            raise ValueError("action_low must be < action_high element-wise")
        if self.episode_cap < 1:
            raise ValueError("episode_cap must be >= 1")
        if self.discount != 1.0:
            raise ValueError("only undiscounted episodes are supported")


class Env:
    """Episodic environment with a gym-like ``reset``/``step`` pair.

    Subclasses set ``name`` and ``spec`` and implement ``_reset`` and
    ``_step``. Instances are single-threaded; use :meth:`clone` to give each
    worker its own copy.
    """

    name = "env"
    spec: EnvSpec

    def __init__(self):
        self.t = 0
        self._low = np.asarray(self.spec.action_low, dtype=float)
        self._high = np.asarray(self.spec.action_high, dtype=float)

    def clone(self):
        return copy.deepcopy(self)

    def reset(self, seed=None) -> np.ndarray:
        self.t = 0
        return self._reset(np.random.default_rng(seed))

    def step(self, action):
        a = np.asarray(action, dtype=float).reshape(self.spec.act_dim)
        clipped = np.clip(a, self._low, self._high)
        if not np.array_equal(clipped, a):
            logger.debug("%s: action %s clamped to bounds", self.name, a)
        obs, reward, done = self._step(clipped)
        self.t += 1
        if self.t >= self.spec.episode_cap:
            done = True
        return obs, reward, done

    def _reset(self, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def _step(self, action: np.ndarray):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}()"
