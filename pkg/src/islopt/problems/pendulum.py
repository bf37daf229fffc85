from __future__ import annotations

import math

import numpy as np

from .base import Env, EnvSpec


def angle_normalize(x):
    return ((x + math.pi) % (2.0 * math.pi)) - math.pi


class Pendulum(Env):
    """Torque-limited point-mass pendulum swing-up; ``theta = 0`` is upright.

    Integrated with semi-implicit Euler. Reward penalizes angle from upright,
    angular velocity and torque.
    """

    name = "pendulum"

    def __init__(self, dt=0.02, g=10.0, m=1.0, length=1.0, max_torque=2.0, max_speed=8.0,
                 episode_cap=200):
        self.dt, self.g, self.m, self.length = dt, g, m, length
        self.max_torque, self.max_speed = max_torque, max_speed
        self.spec = EnvSpec(3, 1, (-max_torque,), (max_torque,), episode_cap)
        self.theta = 0.0
        self.theta_dot = 0.0
        super().__init__()

    def _obs(self):
        return np.array([math.cos(self.theta), math.sin(self.theta), self.theta_dot])

    def _reset(self, rng):
        self.theta = float(rng.uniform(-math.pi, math.pi))
        self.theta_dot = float(rng.uniform(-1.0, 1.0))
        return self._obs()

    def set_state(self, theta, theta_dot):
        self.theta, self.theta_dot = float(theta), float(theta_dot)
        return self._obs()

    def energy(self):
        """Mechanical energy per unit mass (potential measured from the pivot)."""
        return 0.5 * (self.length * self.theta_dot) ** 2 + self.g * self.length * math.cos(self.theta)

    def _step(self, action):
        u = float(action[0])
        th, thd = self.theta, self.theta_dot
        cost = angle_normalize(th) ** 2 + 0.1 * thd * thd + 0.001 * u * u
        acc = self.g / self.length * math.sin(th) + u / (self.m * self.length ** 2)
        thd = min(max(thd + self.dt * acc, -self.max_speed), self.max_speed)
        self.theta = th + self.dt * thd
        self.theta_dot = thd
        return self._obs(), -cost, False
