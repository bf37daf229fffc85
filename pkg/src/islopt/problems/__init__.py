"""Problem registry: episodic environments and direct objectives by name."""
from __future__ import annotations

from .base import Env, EnvSpec
from .cartpole import CartPole
from .objectives import OBJECTIVES, DirectObjective, direct_objective
from .pendulum import Pendulum
from .pickplace import (
    PickPlace,
    PickPlaceConfig,
    PickPlaceState,
    Stage,
    composite_reward,
    guided_reward,
    sparse_reward,
)
from .reacher import Reacher, reacher_fk

ENVIRONMENTS = {
    "pendulum": Pendulum,
    "cartpole": CartPole,
    "reacher": Reacher,
    "pickplace": PickPlace,
}


def list_problems() -> list[str]:
    return sorted([*ENVIRONMENTS, *OBJECTIVES])


def make_problem(name: str, dim: int = 10, pickplace: PickPlaceConfig | None = None):
    """Build a problem instance by name.

    ``dim`` applies to direct objectives, ``pickplace`` to the pick-and-place
    environment; both are ignored otherwise.
    """
    if name in OBJECTIVES:
        return DirectObjective(name, dim)
    if name == "pickplace":
        return PickPlace(pickplace)
    if name in ENVIRONMENTS:
        return ENVIRONMENTS[name]()
    raise ValueError(f"unknown problem {name!r}; choose from {list_problems()}")


__all__ = [
    "CartPole", "DirectObjective", "ENVIRONMENTS", "Env", "EnvSpec", "OBJECTIVES", "Pendulum",
    "PickPlace", "PickPlaceConfig", "PickPlaceState", "Reacher", "Stage", "composite_reward",
    "direct_objective", "guided_reward", "list_problems", "make_problem", "reacher_fk",
    "sparse_reward",
]
