"""Mantegna sampling of Lévy-stable step lengths and the cosine step-size schedule."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_BETA = 1.5


def sigma_u(beta: float) -> float:
    """Scale of the numerator draw in Mantegna's algorithm.

    Parameters
    ----------
    beta : float
        Power-law index, ``1 <= beta <= 2``.

    Raises
    ------
    ValueError
        If ``beta`` lies outside ``[1, 2]``.
    """
    if not (1.0 <= beta <= 2.0):
        raise ValueError(f"beta must lie in [1, 2], got {beta!r}")
    num = math.gamma(1.0 + beta) * math.sin(math.pi * beta / 2.0)
    den = math.gamma((1.0 + beta) / 2.0) * beta * 2.0 ** ((beta - 1.0) / 2.0)
    return (num / den) ** (1.0 / beta)


@dataclass(frozen=True)
class LevyConfig:
    beta: float = DEFAULT_BETA
    sigma_u: float = field(init=False)
    sigma_v: float = field(init=False, default=1.0)

    def __post_init__(self):
        if not (1.0 < self.beta <= 2.0):
            raise ValueError(f"LevyConfig.beta must lie in (1, 2], got {self.beta!r}")
        object.__setattr__(self, "sigma_u", sigma_u(self.beta))


def mantegna_step(u, v, beta):
    """``u / |v|**(1/beta)``, element-wise."""
    return np.asarray(u, dtype=float) / np.abs(np.asarray(v, dtype=float)) ** (1.0 / beta)


def sample_levy(cfg: LevyConfig, rng: np.random.Generator, size=None):
    """Draw Lévy step lengths with Mantegna's ratio of normals.

    Zero draws of the denominator are redrawn from the same stream, so the
    result stays finite and reproducible under seeding. Returns a float when
    ``size`` is None, else an array of that shape.
    """
    u = rng.normal(0.0, cfg.sigma_u, size=size)
    v = np.atleast_1d(np.asarray(rng.normal(0.0, cfg.sigma_v, size=size), dtype=float))
    zero = v == 0.0
    while zero.any():
        v[zero] = rng.normal(0.0, cfg.sigma_v, size=int(zero.sum()))
        zero = v == 0.0
    out = mantegna_step(u, v.reshape(np.shape(u)), cfg.beta)
    if size is None:
        return float(out)
    return out


@dataclass(frozen=True)
class AlphaSchedule:
    """Cosine-squared decay of the learning-style step size over the step budget."""

    alpha_min: float = 0.01
    alpha_max: float = 0.1
    max_step: int = 1_000_000

    def __post_init__(self):
        if not (0.0 < self.alpha_min <= self.alpha_max):
            raise ValueError("need 0 < alpha_min <= alpha_max")
        if self.max_step <= 0:
            raise ValueError("max_step must be positive")


def alpha_at(sched: AlphaSchedule, step: int) -> float:
    if step < 0:
        raise ValueError(f"step must be non-negative, got {step}")
    # overshoot by up to one generation is expected with generation-granular budgets
    if step >= sched.max_step:
        return sched.alpha_min
    # cos^2(x) = (1 + cos 2x) / 2; exact 1/2 at the midpoint
    c2 = 0.5 * (1.0 + math.cos(math.pi * step / sched.max_step))
    return sched.alpha_min + (sched.alpha_max - sched.alpha_min) * c2
