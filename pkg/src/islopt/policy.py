"""Fully-connected Gaussian policies and their parameter containers.

A :class:`ParameterSet` is an ordered tuple of layers, each layer a tuple of
arrays. Policy layers are ``(weight[out, in], bias[out])``; the flat vector
used by direct objectives is a single one-array layer. Flattening walks the
layers in order and, within a layer, each array in row-major order (weights
before bias), which is the canonical index space for slice perturbations.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

LOG_VAR_MIN = -5.0
LOG_VAR_MAX = 2.0

_ACTIVATIONS = {"tanh": np.tanh, "relu": lambda x: np.maximum(x, 0.0)}

FORMAT_HEADER = "# islopt-params v1"


@dataclass(frozen=True)
class PolicySpec:
    obs_dim: int
    act_dim: int
    hidden: tuple[int, ...] = (64, 64)
    activation: str = "tanh"

    def __post_init__(self):
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))
        if self.obs_dim < 1 or self.act_dim < 1:
            raise ValueError("obs_dim and act_dim must be >= 1")
        if any(h < 1 for h in self.hidden):
            raise ValueError(f"hidden widths must be >= 1, got {self.hidden}")
        if self.activation not in _ACTIVATIONS:
            raise ValueError(f"activation must be one of {sorted(_ACTIVATIONS)}, got {self.activation!r}")

    def layer_shapes(self) -> list[tuple[tuple[int, ...], ...]]:
        widths = [self.obs_dim, *self.hidden, 2 * self.act_dim]
        return [((o, i), (o,)) for i, o in zip(widths[:-1], widths[1:])]

    @property
    def n_params(self) -> int:
        return sum(int(np.prod(s)) for layer in self.layer_shapes() for s in layer)


@dataclass(frozen=True)
class VectorSpec:
    """Layout for a plain decision vector (direct objectives)."""

    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")

    def layer_shapes(self) -> list[tuple[tuple[int, ...], ...]]:
        return [((self.dim,),)]

    @property
    def n_params(self) -> int:
        return self.dim


class ParameterSet:
    """Immutable-by-convention container of per-layer parameter arrays."""

    __slots__ = ("layers",)

    def __init__(self, layers: Sequence[Sequence[np.ndarray]]):
        self.layers = tuple(tuple(np.asarray(a, dtype=float) for a in layer) for layer in layers)

    def __eq__(self, other):
        if not isinstance(other, ParameterSet) or len(self.layers) != len(other.layers):
            return NotImplemented
        return all(
            len(a) == len(b) and all(x.shape == y.shape and np.array_equal(x, y) for x, y in zip(a, b))
            for a, b in zip(self.layers, other.layers)
        )

    __hash__ = None

    def __repr__(self):
        shapes = [tuple(a.shape for a in layer) for layer in self.layers]
        return f"ParameterSet({shapes})"

    @property
    def shapes(self):
        return [tuple(a.shape for a in layer) for layer in self.layers]

    @property
    def size(self) -> int:
        return sum(a.size for layer in self.layers for a in layer)


def init_params(spec, rng: np.random.Generator) -> ParameterSet:
    """Draw every weight and bias i.i.d. from a standard normal."""
    return ParameterSet([[rng.standard_normal(s) for s in layer] for layer in spec.layer_shapes()])


def zeros_like_spec(spec) -> ParameterSet:
    return ParameterSet([[np.zeros(s) for s in layer] for layer in spec.layer_shapes()])


def flatten(params: ParameterSet) -> np.ndarray:
    return np.concatenate([a.ravel() for layer in params.layers for a in layer])


def unflatten(spec, flat) -> ParameterSet:
    flat = np.asarray(flat, dtype=float)
    if flat.ndim != 1 or flat.size != spec.n_params:
        raise ValueError(f"expected a flat vector of length {spec.n_params}, got shape {flat.shape}")
    layers, pos = [], 0
    for layer in spec.layer_shapes():
        arrs = []
        for shape in layer:
            n = int(np.prod(shape))
            arrs.append(flat[pos:pos + n].reshape(shape).copy())
            pos += n
        layers.append(arrs)
    return ParameterSet(layers)


def check_params(spec, params: ParameterSet) -> None:
    expected = [tuple(layer) for layer in spec.layer_shapes()]
    if params.shapes != expected:
        raise ValueError(f"parameter shapes {params.shapes} do not match spec {expected}")


@dataclass(frozen=True)
class ActionDistribution:
    mean: np.ndarray
    log_var: np.ndarray

    @property
    def var(self):
        return np.exp(self.log_var)


def forward(spec: PolicySpec, params: ParameterSet, obs) -> ActionDistribution:
    """Feed-forward pass producing the mean and clamped log-variance heads."""
    x = np.asarray(obs, dtype=float)
    if x.shape != (spec.obs_dim,):
        raise ValueError(f"observation must have shape ({spec.obs_dim},), got {x.shape}")
    if len(params.layers) != len(spec.hidden) + 1:
        raise ValueError("parameter set does not match the policy spec")
    act = _ACTIVATIONS[spec.activation]
    last = len(params.layers) - 1
    for k, (w, b) in enumerate(params.layers):
        x = w @ x + b
        if k < last:
            x = act(x)
    if x.shape != (2 * spec.act_dim,):
        raise ValueError("parameter set does not match the policy spec")
    mean = x[:spec.act_dim]
    log_var = np.clip(x[spec.act_dim:], LOG_VAR_MIN, LOG_VAR_MAX)
    return ActionDistribution(mean, log_var)


def squash(raw, low, high):
    """Map an unbounded action into ``[low, high]`` through tanh."""
    low = np.asarray(low, dtype=float)
    high = np.asarray(high, dtype=float)
    return low + 0.5 * (np.tanh(raw) + 1.0) * (high - low)


def sample_action(dist: ActionDistribution, rng: np.random.Generator, low=-1.0, high=1.0,
                  deterministic=False, squashed=True):
    """Sample ``a ~ N(mean, exp(log_var))`` and squash it into the action bounds.

    With ``deterministic=True`` the mean is used instead of a draw. Setting
    ``squashed=False`` returns the raw Gaussian draw.
    """
    if deterministic:
        raw = dist.mean
    else:
        raw = dist.mean + np.exp(0.5 * dist.log_var) * rng.standard_normal(dist.mean.shape)
    if not squashed:
        return raw
    return squash(raw, low, high)


# -- serialization -----------------------------------------------------------

def spec_header(spec) -> dict[str, str]:
    if isinstance(spec, PolicySpec):
        return {
            "kind": "policy",
            "obs_dim": str(spec.obs_dim),
            "act_dim": str(spec.act_dim),
            "hidden": ",".join(str(h) for h in spec.hidden),
            "activation": spec.activation,
        }
    if isinstance(spec, VectorSpec):
        return {"kind": "vector", "dim": str(spec.dim)}
    raise TypeError(f"unsupported spec type {type(spec).__name__}")


def spec_from_header(header: dict[str, str]):
    kind = header.get("kind")
    if kind == "policy":
        hidden = tuple(int(h) for h in header["hidden"].split(",") if h)
        return PolicySpec(int(header["obs_dim"]), int(header["act_dim"]), hidden, header["activation"])
    if kind == "vector":
        return VectorSpec(int(header["dim"]))
    raise ValueError(f"unknown parameter file kind {kind!r}")


def save_params(path, spec, params: ParameterSet) -> None:
    """Write ``params`` as a text file: header lines, then one value per line.

    Layout::

        # islopt-params v1
        kind policy
        obs_dim 3
        act_dim 1
        hidden 64,64
        activation tanh
        n_params 4610
        ---
        <n_params lines, canonical flatten order, repr() floats>

    ``repr`` of a Python float round-trips exactly.
    """
    check_params(spec, params)
    lines = [FORMAT_HEADER]
    lines += [f"{k} {v}" for k, v in spec_header(spec).items()]
    lines.append(f"n_params {spec.n_params}")
    lines.append("---")
    lines += [repr(float(x)) for x in flatten(params)]
    Path(path).write_text("\n".join(lines) + "\n")


def load_params(path):
    """Inverse of :func:`save_params`; returns ``(spec, params)``."""
    text = Path(path).read_text().splitlines()
    if not text or text[0].strip() != FORMAT_HEADER:
        raise ValueError(f"{path}: not an islopt parameter file")
    header, body = {}, None
    for i, line in enumerate(text[1:], start=1):
        if line.strip() == "---":
            body = text[i + 1:]
            break
        key, _, value = line.partition(" ")
        header[key] = value.strip()
    if body is None:
        raise ValueError(f"{path}: missing '---' separator")
    spec = spec_from_header(header)
    n = int(header.get("n_params", -1))
    values = [float(v) for v in body if v.strip()]
    if n != spec.n_params or len(values) != n:
        raise ValueError(f"{path}: expected {spec.n_params} values, header says {n}, found {len(values)}")
    return spec, unflatten(spec, np.array(values))
