"""Kinematic pick-and-place with a staged composite reward.

The arm has a base yaw joint and three pitch joints acting in the vertical
plane. Stage 1 drives the gripper to the cube; entering the per-axis grasp
region attaches the cube and switches to stage 2, which drives the gripper
to the placement dot. Entering the placement region ends the episode.

Rewards at each step:

* guided: negative Euclidean distance from gripper to the stage's target;
* sparse: 1 when the gripper is within tolerance on all three axes, else 0;
* composite: their sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .base import Env, EnvSpec


class Stage(IntEnum):
    GRASP = 1
    PLACE = 2


def _vec3(v, name):
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"{name} must have 3 components, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class PickPlaceConfig:
    p_cube: tuple[float, float, float] = (0.30, 0.10, 0.02)
    p_dot: tuple[float, float, float] = (0.10, -0.30, 0.02)
    near1: tuple[float, float, float] = (0.05, 0.05, 0.05)
    near2: tuple[float, float, float] = (0.05, 0.05, 0.05)
    links: tuple[float, float, float] = (0.25, 0.20, 0.10)
    base_height: float = 0.10
    init_joints: tuple[float, float, float, float] = (0.0, 0.8, -1.2, -0.5)
    max_delta: float = 0.05
    jitter: float = 0.0
    episode_cap: int = 300

    def __post_init__(self):
        for name in ("p_cube", "p_dot", "near1", "near2", "links"):
            object.__setattr__(self, name, tuple(float(x) for x in _vec3(getattr(self, name), name)))
        object.__setattr__(self, "init_joints", tuple(float(x) for x in self.init_joints))
        if len(self.init_joints) != 4:
            raise ValueError("init_joints must have 4 entries")
        if min(self.near1) <= 0 or min(self.near2) <= 0:
            raise ValueError("near1 and near2 must be positive on every axis")
        if min(self.links) <= 0:
            raise ValueError("link lengths must be positive")
        reach = sum(self.links)
        shoulder = np.array([0.0, 0.0, self.base_height])
        for name in ("p_cube", "p_dot"):
            d = np.linalg.norm(np.asarray(getattr(self, name)) - shoulder) + self.jitter * math.sqrt(3)
            if d > reach:
                raise ValueError(f"{name} lies outside the arm's reach ({d:.3f} > {reach:.3f})")
        if self.max_delta <= 0:
            raise ValueError("max_delta must be positive")
        if self.episode_cap < 1:
            raise ValueError("episode_cap must be >= 1")


def arm_fk(joints, links, base_height):
    """Gripper position for joints ``(yaw, pitch1, pitch2, pitch3)``."""
    yaw, a1, a2, a3 = joints
    l1, l2, l3 = links
    c1, c12, c123 = a1, a1 + a2, a1 + a2 + a3
    r = l1 * math.cos(c1) + l2 * math.cos(c12) + l3 * math.cos(c123)
    z = base_height + l1 * math.sin(c1) + l2 * math.sin(c12) + l3 * math.sin(c123)
    return np.array([r * math.cos(yaw), r * math.sin(yaw), z])


@dataclass
class PickPlaceState:
    p_robot: np.ndarray
    p_cube: np.ndarray
    p_dot: np.ndarray
    stage: Stage = Stage.GRASP
    joints: np.ndarray = field(default_factory=lambda: np.zeros(4))

    def target(self):
        return self.p_cube if self.stage == Stage.GRASP else self.p_dot


def guided_reward(state: PickPlaceState) -> float:
    return -float(np.linalg.norm(np.asarray(state.p_robot) - np.asarray(state.target())))


def in_region(state: PickPlaceState, cfg: PickPlaceConfig) -> bool:
    near = cfg.near1 if state.stage == Stage.GRASP else cfg.near2
    gap = np.abs(np.asarray(state.p_robot) - np.asarray(state.target()))
    return bool(np.all(gap <= np.asarray(near)))


def sparse_reward(state: PickPlaceState, cfg: PickPlaceConfig) -> float:
    return 1.0 if in_region(state, cfg) else 0.0


def composite_reward(state: PickPlaceState, cfg: PickPlaceConfig) -> float:
    return guided_reward(state) + sparse_reward(state, cfg)


class PickPlace(Env):
    """Observation: displacement to the current target (3) and joint angles (4).
    Action: joint-angle increments bounded by ``max_delta``.
    """

    name = "pickplace"

    def __init__(self, config: PickPlaceConfig | None = None):
        self.config = config or PickPlaceConfig()
        d = self.config.max_delta
        self.spec = EnvSpec(7, 4, (-d,) * 4, (d,) * 4, self.config.episode_cap)
        self.state = self._initial_state(np.asarray(self.config.p_cube), np.asarray(self.config.p_dot))
        self.placed = False
        super().__init__()

    def _initial_state(self, p_cube, p_dot):
        joints = np.array(self.config.init_joints)
        p = arm_fk(joints, self.config.links, self.config.base_height)
        return PickPlaceState(p, p_cube.copy(), p_dot.copy(), Stage.GRASP, joints)

    def _obs(self):
        s = self.state
        return np.concatenate([s.target() - s.p_robot, s.joints])

    def _reset(self, rng):
        cfg = self.config
        p_cube, p_dot = np.asarray(cfg.p_cube), np.asarray(cfg.p_dot)
        if cfg.jitter > 0:
            p_cube = p_cube + rng.uniform(-cfg.jitter, cfg.jitter, size=3)
            p_dot = p_dot + rng.uniform(-cfg.jitter, cfg.jitter, size=3)
        self.state = self._initial_state(p_cube, p_dot)
        self.placed = False
        return self._obs()

    def _step(self, action):
        cfg, s = self.config, self.state
        s.joints = np.clip(s.joints + action, -math.pi, math.pi)
        s.p_robot = arm_fk(s.joints, cfg.links, cfg.base_height)
        if s.stage == Stage.PLACE:
            s.p_cube = s.p_robot.copy()  # cube travels with the gripper
        r1 = guided_reward(s)
        r2 = sparse_reward(s, cfg)
        done = False
        if r2 == 1.0:
            if s.stage == Stage.GRASP:
                s.stage = Stage.PLACE
                s.p_cube = s.p_robot.copy()
            else:
                self.placed = True
                done = True
        return self._obs(), r1 + r2, done
