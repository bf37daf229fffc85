"""The three social-learning update rules and the bounds that confine them.

* learning: Lévy-flight step scaled by the distance to the best agent;
* imitation: multiplicative perturbation of the best agent, either of the
  whole vector or of a contiguous slice of the flattened parameters;
* self-study: per-layer resampling from a normal fitted to the best agent.

The individual updates do not clamp; :func:`style_phase` produces all three
cohorts and clamps them against the best agent's bounds.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .levy import AlphaSchedule, LevyConfig, sample_levy
from .policy import ParameterSet, flatten

VAR_FLOOR = 1e-6


@dataclass(frozen=True)
class StyleConfig:
    alpha_min: float = 0.01
    alpha_max: float = 0.1
    levy: LevyConfig = field(default_factory=LevyConfig)
    perturb_low: float = -1.0
    perturb_high: float = 1.0
    full_perturb_prob: float = 0.5
    clamp_factor: float = 1.5
    clamp_mode: str = "contain"
    var_floor: float = VAR_FLOOR

    def __post_init__(self):
        if self.perturb_low > self.perturb_high:
            raise ValueError("perturb_low must be <= perturb_high")
        if not (0.0 <= self.full_perturb_prob <= 1.0):
            raise ValueError("full_perturb_prob must lie in [0, 1]")
        if self.clamp_factor <= 1.0:
            raise ValueError("clamp_factor must be > 1")
        if self.clamp_mode not in ("contain", "literal"):
            raise ValueError("clamp_mode must be 'contain' or 'literal'")
        if self.var_floor <= 0:
            raise ValueError("var_floor must be positive")
        AlphaSchedule(self.alpha_min, self.alpha_max, 1)  # validates the pair

    def schedule(self, max_step: int) -> AlphaSchedule:
        return AlphaSchedule(self.alpha_min, self.alpha_max, max_step)


@dataclass(frozen=True)
class BestBounds:
    lb: float
    ub: float


def _check_shapes(a: ParameterSet, b: ParameterSet):
    if a.shapes != b.shapes:
        raise ValueError(f"parameter shapes differ: {a.shapes} vs {b.shapes}")


def _map_layers(params: ParameterSet, fn) -> ParameterSet:
    return ParameterSet([[fn(a) for a in layer] for layer in params.layers])


def _from_flat_like(template: ParameterSet, flat: np.ndarray) -> ParameterSet:
    layers, pos = [], 0
    for layer in template.layers:
        arrs = []
        for a in layer:
            arrs.append(flat[pos:pos + a.size].reshape(a.shape).copy())
            pos += a.size
        layers.append(arrs)
    return ParameterSet(layers)


def learn_update(params: ParameterSet, best: ParameterSet, alpha: float, levy: LevyConfig,
                 rng: np.random.Generator) -> ParameterSet:
    """``theta + alpha * lambda * (theta - theta_best)`` with one Lévy draw per element."""
    _check_shapes(params, best)
    diff = flatten(params) - flatten(best)
    step = sample_levy(levy, rng, size=diff.size)
    return _from_flat_like(params, flatten(params) + alpha * step * diff)


def imitate_flat(best_flat: np.ndarray, cfg: StyleConfig, rng: np.random.Generator):
    """Perturb a flat vector; returns ``(new_flat, slice)``.

    ``slice`` is None when the whole vector was perturbed, else the inclusive
    index pair ``(ind1, ind2)`` of the perturbed range.
    """
    out = np.array(best_flat, dtype=float, copy=True)
    if rng.random() < cfg.full_perturb_prob:
        out *= 1.0 + rng.uniform(cfg.perturb_low, cfg.perturb_high, size=out.size)
        return out, None
    ind1, ind2 = sorted(int(i) for i in rng.integers(0, out.size, size=2))
    n = ind2 - ind1 + 1
    out[ind1:ind2 + 1] *= 1.0 + rng.uniform(cfg.perturb_low, cfg.perturb_high, size=n)
    return out, (ind1, ind2)


def imitate_update(best: ParameterSet, cfg: StyleConfig, rng: np.random.Generator) -> ParameterSet:
    flat, _ = imitate_flat(flatten(best), cfg, rng)
    return _from_flat_like(best, flat)


def layer_moments(best: ParameterSet) -> list[tuple[float, float]]:
    """Mean and population variance of each layer, weights and bias pooled."""
    out = []
    for layer in best.layers:
        pooled = np.concatenate([a.ravel() for a in layer])
        out.append((float(pooled.mean()), float(pooled.var())))
    return out


def selfstudy_update(best: ParameterSet, rng: np.random.Generator, var_floor: float = VAR_FLOOR) -> ParameterSet:
    layers = []
    for layer, (mu, var) in zip(best.layers, layer_moments(best)):
        sd = np.sqrt(max(var, var_floor))
        layers.append([rng.normal(mu, sd, size=a.shape) for a in layer])
    return ParameterSet(layers)


def bounds_of(best: ParameterSet) -> BestBounds:
    flat = flatten(best)
    return BestBounds(float(flat.min()), float(flat.max()))


def clamp_interval(bounds: BestBounds, factor: float = 1.5, mode: str = "contain") -> tuple[float, float]:
    if bounds.lb > bounds.ub:
        raise ValueError("bounds must satisfy lb <= ub")
    if mode == "literal":
        return factor * bounds.lb, factor * bounds.ub
    if mode != "contain":
        raise ValueError(f"unknown clamp mode {mode!r}")
    # widen away from the best agent's range on both sides so it is never clipped
    lo = factor * bounds.lb if bounds.lb < 0 else bounds.lb / factor
    hi = factor * bounds.ub if bounds.ub > 0 else bounds.ub / factor
    return lo, hi


def clamp_params(params: ParameterSet, bounds: BestBounds, factor: float = 1.5,
                 mode: str = "contain") -> ParameterSet:
    lo, hi = clamp_interval(bounds, factor, mode)
    return _map_layers(params, lambda a: np.clip(a, lo, hi))


@dataclass
class StyleOutput:
    learners: list[ParameterSet]
    imitators: list[ParameterSet]
    self_studiers: list[ParameterSet]
    bounds: BestBounds
    alpha: float


def style_phase(learners: list[ParameterSet], best: ParameterSet, n_imitate: int, n_selfstudy: int,
                alpha: float, cfg: StyleConfig, rngs: list[np.random.Generator],
                bounds: Optional[BestBounds] = None) -> StyleOutput:
    """Produce the three cohorts from the historical best and clamp them.

    ``rngs`` supplies one independent stream per output agent, in cohort
    order (learners, imitators, self-studiers).
    """
    n_learn = len(learners)
    if len(rngs) != n_learn + n_imitate + n_selfstudy:
        raise ValueError("need one random stream per output agent")
    bounds = bounds or bounds_of(best)

    def clamp(p):
        return clamp_params(p, bounds, cfg.clamp_factor, cfg.clamp_mode)

    a = [clamp(learn_update(p, best, alpha, cfg.levy, r)) for p, r in zip(learners, rngs[:n_learn])]
    b = [clamp(imitate_update(best, cfg, r)) for r in rngs[n_learn:n_learn + n_imitate]]
    c = [clamp(selfstudy_update(best, r, cfg.var_floor)) for r in rngs[n_learn + n_imitate:]]
    return StyleOutput(a, b, c, bounds, alpha)
