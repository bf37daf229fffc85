"""Closed-form test functions used as direct (single-step) problems.

Fitness is ``-f(x)`` so that larger is better, matching the optimizers.
"""
from __future__ import annotations

import numpy as np


def sphere(x):
    x = np.asarray(x, dtype=float)
    return float(np.dot(x, x))


def rastrigin(x):
    x = np.asarray(x, dtype=float)
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


def rosenbrock(x):
    x = np.asarray(x, dtype=float)
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


OBJECTIVES = {"sphere": sphere, "rastrigin": rastrigin, "rosenbrock": rosenbrock}


def direct_objective(name: str, flat) -> float:
    try:
        f = OBJECTIVES[name]
    except KeyError:
        raise ValueError(f"unknown objective {name!r}; choose from {sorted(OBJECTIVES)}") from None
    x = np.asarray(flat, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("objective input must be finite")
    return -f(x)


class DirectObjective:
    """A test function exposed as a one-step problem over a ``dim``-vector."""

    def __init__(self, name: str = "sphere", dim: int = 10):
        if name not in OBJECTIVES:
            raise ValueError(f"unknown objective {name!r}; choose from {sorted(OBJECTIVES)}")
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.name = name
        self.dim = int(dim)

    def __call__(self, flat) -> float:
        return direct_objective(self.name, flat)

    def clone(self):
        return self

    def __repr__(self):
        return f"DirectObjective({self.name!r}, dim={self.dim})"
