import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from islopt.levy import LevyConfig
from islopt.policy import ParameterSet, PolicySpec, VectorSpec, flatten, init_params, unflatten
from islopt.styles import (
    BestBounds,
    StyleConfig,
    bounds_of,
    clamp_interval,
    clamp_params,
    imitate_flat,
    imitate_update,
    layer_moments,
    learn_update,
    selfstudy_update,
    style_phase,
)

SPEC = PolicySpec(3, 2, (4,))


def _params(seed):
    return init_params(SPEC, np.random.default_rng(seed))


def _vec(values):
    return unflatten(VectorSpec(len(values)), np.asarray(values, dtype=float))


# learning

def test_learn_fixed_point_at_best():
    best = _params(0)
    out = learn_update(best, best, 0.1, LevyConfig(), np.random.default_rng(1))
    assert out == best


def test_learn_zero_alpha_is_identity():
    p, best = _params(0), _params(1)
    assert learn_update(p, best, 0.0, LevyConfig(), np.random.default_rng(2)) == p


def test_learn_scalar_with_unit_step(pinned_rng):
    # u = v = 1 gives a unit Lévy step: 2 + 0.1 * 1 * (2 - 1)
    out = learn_update(_vec([2.0]), _vec([1.0]), 0.1, LevyConfig(), pinned_rng(1.0))
    assert flatten(out)[0] == 2.0 + 0.1 * (2.0 - 1.0)


def test_learn_shape_mismatch():
    with pytest.raises(ValueError):
        learn_update(_vec([1.0, 2.0]), _vec([1.0]), 0.1, LevyConfig(), np.random.default_rng(0))


# imitation

def test_imitate_zero_interval_is_identity():
    cfg = StyleConfig(perturb_low=0.0, perturb_high=0.0)
    best = _params(3)
    for s in range(20):
        assert imitate_update(best, cfg, np.random.default_rng(s)) == best


def test_imitate_unit_interval_doubles_full_branch():
    cfg = StyleConfig(perturb_low=1.0, perturb_high=1.0, full_perturb_prob=1.0)
    flat = flatten(_params(4))
    out, sl = imitate_flat(flat, cfg, np.random.default_rng(0))
    assert sl is None
    np.testing.assert_array_equal(out, 2.0 * flat)


def test_imitate_branch_frequency():
    cfg = StyleConfig()
    rng = np.random.default_rng(123)
    flat = np.arange(1.0, 31.0)
    full = sum(imitate_flat(flat, cfg, rng)[1] is None for _ in range(10_000))
    assert 0.48 <= full / 10_000 <= 0.52


def test_imitate_partial_branch_touches_only_slice():
    cfg = StyleConfig(full_perturb_prob=0.0)
    flat = np.random.default_rng(0).normal(size=50)
    for s in range(50):
        out, (i1, i2) = imitate_flat(flat, cfg, np.random.default_rng(s))
        assert 0 <= i1 <= i2 < flat.size
        outside = np.ones(flat.size, bool)
        outside[i1:i2 + 1] = False
        np.testing.assert_array_equal(out[outside], flat[outside])
        ratio = out[i1:i2 + 1] / flat[i1:i2 + 1]
        assert np.all((ratio >= 0.0) & (ratio <= 2.0))


def test_imitate_does_not_mutate_input():
    flat = np.ones(5)
    imitate_flat(flat, StyleConfig(full_perturb_prob=1.0), np.random.default_rng(0))
    np.testing.assert_array_equal(flat, np.ones(5))


# self-study

def test_selfstudy_constant_layer_uses_variance_floor():
    c, eps = 0.7, 1e-6
    best = _vec(np.full(2000, c))
    out = flatten(selfstudy_update(best, np.random.default_rng(0), eps))
    assert np.all(np.abs(out - c) <= 5 * np.sqrt(eps))
    assert np.std(out) == pytest.approx(np.sqrt(eps), rel=0.1)


def test_layer_moments_pool_weights_and_bias():
    best = ParameterSet([[np.array([[0.0]]), np.array([2.0])]])
    assert layer_moments(best) == [(1.0, 1.0)]


def test_selfstudy_matches_layer_moments():
    spec = PolicySpec(50, 2, (40,))
    best = init_params(spec, np.random.default_rng(1))
    out = selfstudy_update(best, np.random.default_rng(2))
    assert out.shapes == best.shapes
    for layer, (mu, var) in zip(out.layers, layer_moments(best)):
        pooled = np.concatenate([a.ravel() for a in layer])
        assert abs(pooled.mean() - mu) < 4 * np.sqrt(var / pooled.size)


# clamping

def test_bounds_of():
    assert bounds_of(_vec([-2.0, 0.5, 3.0])) == BestBounds(-2.0, 3.0)
    assert bounds_of(_vec([1.0, 4.0])) == BestBounds(1.0, 4.0)


def test_clamp_interval_modes():
    assert clamp_interval(BestBounds(-1.0, 2.0)) == (-1.5, 3.0)
    assert clamp_interval(BestBounds(1.5, 3.0)) == (1.0, 4.5)
    assert clamp_interval(BestBounds(-3.0, -1.5)) == (-4.5, -1.0)
    assert clamp_interval(BestBounds(1.5, 3.0), mode="literal") == (1.5 * 1.5, 4.5)
    with pytest.raises(ValueError):
        clamp_interval(BestBounds(1.0, 0.0))
    with pytest.raises(ValueError):
        clamp_interval(BestBounds(0.0, 1.0), mode="other")


def test_clamp_examples():
    out = clamp_params(_vec([5.0, 0.0, -4.0]), BestBounds(-1.0, 2.0))
    np.testing.assert_array_equal(flatten(out), [3.0, 0.0, -1.5])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-100, 100), min_size=1, max_size=20),
       st.floats(-10, 10), st.floats(0, 10))
def test_clamp_idempotent_and_contains_best(values, lb, width):
    bounds = BestBounds(lb, lb + width)
    once = clamp_params(_vec(values), bounds)
    assert clamp_params(once, bounds) == once
    lo, hi = clamp_interval(bounds)
    assert lo <= bounds.lb and bounds.ub <= hi


def test_style_phase_outputs_within_interval():
    cfg = StyleConfig()
    best = _params(0)
    learners = [_params(s) for s in range(1, 6)]
    rngs = [np.random.default_rng(s) for s in range(10)]
    out = style_phase(learners, best, 3, 2, 0.1, cfg, rngs)
    assert (len(out.learners), len(out.imitators), len(out.self_studiers)) == (5, 3, 2)
    lo, hi = clamp_interval(bounds_of(best))
    for p in out.learners + out.imitators + out.self_studiers:
        f = flatten(p)
        assert p.shapes == best.shapes
        assert f.min() >= lo and f.max() <= hi
    with pytest.raises(ValueError):
        style_phase(learners, best, 3, 2, 0.1, cfg, rngs[:9])


def test_style_config_validation():
    for kw in ({"perturb_low": 1.0, "perturb_high": 0.0}, {"full_perturb_prob": 1.5},
               {"clamp_factor": 1.0}, {"clamp_mode": "x"}, {"var_floor": 0.0},
               {"alpha_min": 0.2, "alpha_max": 0.1}):
        with pytest.raises(ValueError):
            StyleConfig(**kw)
