from __future__ import annotations

import math

import numpy as np

from .base import Env, EnvSpec


def reacher_fk(q1, q2, l1, l2):
    """Fingertip position of a planar two-link arm."""
    return np.array([
        l1 * math.cos(q1) + l2 * math.cos(q1 + q2),
        l1 * math.sin(q1) + l2 * math.sin(q1 + q2),
    ])


class Reacher(Env):
    """Two-link planar arm driving its fingertip to a random target.

    Joints behave as damped double integrators driven by normalized torques.
    Reward per step is ``-|tip - target| - ctrl_cost * |a|^2``.
    """

    name = "reacher"

    def __init__(self, l1=0.1, l2=0.11, dt=0.02, gain=20.0, damping=2.0, ctrl_cost=0.1,
                 target_radius=0.2, episode_cap=200):
        if target_radius > l1 + l2:
            raise ValueError("target_radius exceeds the arm's reach")
        self.l1, self.l2, self.dt = l1, l2, dt
        self.gain, self.damping, self.ctrl_cost = gain, damping, ctrl_cost
        self.target_radius = target_radius
        self.spec = EnvSpec(10, 2, (-1.0, -1.0), (1.0, 1.0), episode_cap)
        self.q = np.zeros(2)
        self.dq = np.zeros(2)
        self.target = np.zeros(2)
        super().__init__()

    def fingertip(self):
        return reacher_fk(self.q[0], self.q[1], self.l1, self.l2)

    def _obs(self):
        tip = self.fingertip()
        return np.concatenate([np.cos(self.q), np.sin(self.q), self.target, self.dq, tip - self.target])

    def _reset(self, rng):
        self.q = rng.uniform(-0.1, 0.1, size=2)
        self.dq = rng.uniform(-0.005, 0.005, size=2)
        r = self.target_radius * math.sqrt(rng.uniform())
        phi = rng.uniform(0.0, 2.0 * math.pi)
        self.target = np.array([r * math.cos(phi), r * math.sin(phi)])
        return self._obs()

    def _step(self, action):
        dist = float(np.linalg.norm(self.fingertip() - self.target))
        reward = -dist - self.ctrl_cost * float(action @ action)
        self.dq = self.dq + self.dt * (self.gain * action - self.damping * self.dq)
        self.q = self.q + self.dt * self.dq
        return self._obs(), reward, False
