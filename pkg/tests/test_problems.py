import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from islopt.problems import (
    CartPole,
    DirectObjective,
    EnvSpec,
    Pendulum,
    PickPlace,
    Reacher,
    direct_objective,
    list_problems,
    make_problem,
    reacher_fk,
)


def test_registry():
    assert list_problems() == ["cartpole", "pendulum", "pickplace", "rastrigin", "reacher", "rosenbrock", "sphere"]
    assert isinstance(make_problem("sphere", dim=4), DirectObjective)
    assert make_problem("sphere", dim=4).dim == 4
    with pytest.raises(ValueError):
        make_problem("halfcheetah")


def test_env_spec_validation():
    with pytest.raises(ValueError):
        EnvSpec(2, 1, (1.0,), (1.0,), 10)
    with pytest.raises(ValueError):
        EnvSpec(2, 1, (-1.0,), (1.0,), 0)
    with pytest.raises(ValueError):
        EnvSpec(2, 2, (-1.0,), (1.0,), 10)


@pytest.mark.parametrize("name,cap", [("pendulum", 200), ("reacher", 200), ("cartpole", 500), ("pickplace", 300)])
def test_episode_caps(name, cap):
    assert make_problem(name).spec.episode_cap == cap


@pytest.mark.parametrize("name", ["pendulum", "cartpole", "reacher", "pickplace"])
def test_reset_and_replay_deterministic(name):
    env = make_problem(name)
    rng = np.random.default_rng(0)
    actions = rng.uniform(env.spec.action_low, env.spec.action_high, size=(50, env.spec.act_dim))

    def rollout():
        e = env.clone()
        out = [e.reset(seed=123)]
        for a in actions:
            obs, r, done = e.step(a)
            out.append(np.append(obs, [r, done]))
            if done:
                break
        return out

    a, b = rollout(), rollout()
    assert len(a) == len(b) and all(np.array_equal(x, y) for x, y in zip(a, b))
    assert a[0].shape == (env.spec.obs_dim,)


def test_pendulum_reset_deterministic():
    p = Pendulum()
    p.reset(seed=7)
    th = p.theta
    p.reset(seed=7)
    assert p.theta == th
    p.reset(seed=8)
    assert p.theta != th


def test_pendulum_upright_equilibrium():
    p = Pendulum()
    p.set_state(0.0, 0.0)
    obs, _, _ = p.step([0.0])
    assert p.theta == 0.0 and p.theta_dot == 0.0
    assert np.array_equal(obs, [1.0, 0.0, 0.0])


def _one_step_error(dt, theta0=0.01):
    p = Pendulum(dt=dt)
    p.set_state(theta0, 0.0)
    p.step([0.0])
    omega = math.sqrt(p.g / p.length)
    return abs(p.theta - theta0 * math.cosh(omega * dt))


def test_pendulum_linearized_free_fall():
    theta0, g = 0.01, 10.0
    for dt in (0.02, 0.01, 0.005):
        assert _one_step_error(dt, theta0) <= theta0 * g * dt ** 2
    ratio = _one_step_error(0.02) / _one_step_error(0.01)
    assert 3.0 < ratio < 5.0  # second order in dt


@pytest.mark.parametrize("theta0", [math.pi - 0.5, math.pi - 1.5, 1.0, 0.3])
def test_pendulum_energy_drift(theta0):
    p = Pendulum()
    p.set_state(theta0, 0.0)
    energies = [p.energy()]
    for _ in range(1000):
        p.step([0.0])
        energies.append(p.energy())
    e = np.array(energies)
    scale = p.g * p.length
    # secular drift: windowed means at the start and end of the run
    assert abs(e[-250:].mean() - e[:250].mean()) / scale < 0.01


def test_pendulum_small_oscillation_energy_pointwise():
    p = Pendulum()
    p.set_state(math.pi - 0.5, 0.0)
    e0 = p.energy()
    for _ in range(1000):
        p.step([0.0])
    assert abs(p.energy() - e0) / abs(e0) < 0.01


def test_action_clamped_not_error():
    p = Pendulum()
    p.set_state(0.5, 0.0)
    q = p.clone()
    p.step([100.0])
    q.step([p.max_torque])
    assert p.theta == q.theta and p.theta_dot == q.theta_dot


def test_cartpole_terminates_when_falling():
    env = CartPole()
    env.reset(seed=0)
    done, t = False, 0
    while not done:
        _, r, done = env.step([10.0])
        assert r == 1.0
        t += 1
    assert t < env.spec.episode_cap


def test_reacher_fk_identity():
    assert np.array_equal(reacher_fk(0.0, 0.0, 0.1, 0.11), [0.1 + 0.11, 0.0])
    assert np.allclose(reacher_fk(math.pi / 2, 0.0, 1.0, 1.0), [0.0, 2.0], atol=1e-15)
    assert np.allclose(reacher_fk(math.pi / 4, -math.pi / 2, 1.0, 1.0), [math.sqrt(2), 0.0], atol=1e-15)


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_reacher_reach_bound(q1, q2):
    assert np.linalg.norm(reacher_fk(q1, q2, 0.1, 0.11)) <= 0.21 + 1e-12


def test_reacher_targets_vary_within_disk():
    env = Reacher()
    targets = []
    for seed in range(50):
        env.reset(seed=seed)
        targets.append(env.target.copy())
    targets = np.array(targets)
    assert np.all(np.linalg.norm(targets, axis=1) <= env.target_radius)
    assert len(np.unique(targets[:, 0])) == 50


def test_direct_objectives():
    assert direct_objective("sphere", np.zeros(10)) == 0.0
    assert direct_objective("rastrigin", np.zeros(10)) == 0.0
    assert direct_objective("sphere", [1.0, 1.0]) == -2.0
    assert direct_objective("rosenbrock", np.ones(5)) == 0.0
    assert direct_objective("rastrigin", [1.0]) == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        direct_objective("ackley", np.zeros(2))
    with pytest.raises(ValueError):
        direct_objective("sphere", [np.nan])


def test_pickplace_starts_in_stage_one():
    from islopt.problems import Stage
    env = PickPlace()
    for seed in range(3):
        env.reset(seed=seed)
        assert env.state.stage == Stage.GRASP
