from __future__ import annotations

import math

import numpy as np

from .base import Env, EnvSpec


class CartPole(Env):
    """Cart-pole balancing with a continuous force; +1 reward per upright step."""

    name = "cartpole"

    def __init__(self, dt=0.02, gravity=9.8, mass_cart=1.0, mass_pole=0.1, half_length=0.5,
                 max_force=10.0, x_limit=2.4, theta_limit=12 * 2 * math.pi / 360, episode_cap=500):
        self.dt, self.gravity = dt, gravity
        self.mass_cart, self.mass_pole, self.half_length = mass_cart, mass_pole, half_length
        self.max_force, self.x_limit, self.theta_limit = max_force, x_limit, theta_limit
        self.spec = EnvSpec(4, 1, (-max_force,), (max_force,), episode_cap)
        self.state = np.zeros(4)
        super().__init__()

    def _reset(self, rng):
        self.state = rng.uniform(-0.05, 0.05, size=4)
        return self.state.copy()

    def _step(self, action):
        x, x_dot, th, th_dot = (float(v) for v in self.state)
        force = float(action[0])
        total = self.mass_cart + self.mass_pole
        pml = self.mass_pole * self.half_length
        cos, sin = math.cos(th), math.sin(th)
        temp = (force + pml * th_dot * th_dot * sin) / total
        th_acc = (self.gravity * sin - cos * temp) / (
            self.half_length * (4.0 / 3.0 - self.mass_pole * cos * cos / total))
        x_acc = temp - pml * th_acc * cos / total
        x_dot += self.dt * x_acc
        x += self.dt * x_dot
        th_dot += self.dt * th_acc
        th += self.dt * th_dot
        self.state = np.array([x, x_dot, th, th_dot])
        done = abs(x) > self.x_limit or abs(th) > self.theta_limit
        return self.state.copy(), 1.0, done
