"""scikit-learn compatible wrappers around the policy-search optimizers.

``fit`` takes a problem (instance or registered name) instead of ``X, y``;
``predict`` maps observations to deterministic actions of the best policy.
Hyperparameters follow the usual estimator conventions, so ``get_params``,
``set_params`` and :func:`sklearn.base.clone` work as expected.
"""
from __future__ import annotations

import numbers

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .baselines import GaConfig, ga_run, random_search_run
from .evaluation import test_average
from .levy import LevyConfig
from .optimizer import RunConfig, run
from .policy import PolicySpec, flatten, forward, squash
from .problems import DirectObjective, make_problem
from .styles import StyleConfig


def check_problem(problem):
    """Accept a problem instance or a registered problem name."""
    if isinstance(problem, str):
        return make_problem(problem)
    if isinstance(problem, DirectObjective) or hasattr(problem, "spec") and hasattr(problem, "step"):
        return problem
    raise TypeError(f"expected a problem instance or name, got {type(problem).__name__}")


def check_seed(random_state) -> int:
    if random_state is None:
        return 0
    if isinstance(random_state, numbers.Integral) and random_state >= 0:
        return int(random_state)
    raise ValueError(f"random_state must be a non-negative int or None, got {random_state!r}")


class _PolicySearch(BaseEstimator):
    def _run(self, config: RunConfig, problem):
        raise NotImplementedError

    def _base_config(self, **extra) -> RunConfig:
        return RunConfig(max_step=self.max_step, test_num=self.test_num, seed=check_seed(self.random_state),
                         hidden=tuple(self.hidden), activation=self.activation,
                         deterministic_eval=self.deterministic_eval, n_jobs=self.n_jobs, **extra)

    def fit(self, problem, y=None):
        problem = check_problem(problem)
        self.report_ = self._run(self._config(), problem)
        if self.report_.best is None:
            raise RuntimeError("every generation failed; no policy was archived")
        self.problem_ = problem
        self.spec_ = self.report_.spec
        self.best_params_ = self.report_.best.params
        self.best_score_ = self.report_.best.test_fitness
        self.n_steps_ = self.report_.total_steps
        return self

    @property
    def best_x_(self):
        """Flat parameter vector of the best agent."""
        check_is_fitted(self, "best_params_")
        return flatten(self.best_params_)

    def predict(self, X):
        """Deterministic (mean) actions for a batch of observations."""
        check_is_fitted(self, "best_params_")
        if not isinstance(self.spec_, PolicySpec):
            raise TypeError("predict is only defined for episodic problems; use best_x_")
        X = check_array(X, ensure_all_finite=True)
        if X.shape[1] != self.spec_.obs_dim:
            raise ValueError(f"X has {X.shape[1]} features, policy expects {self.spec_.obs_dim}")
        low, high = self.problem_.spec.action_low, self.problem_.spec.action_high
        return np.stack([squash(forward(self.spec_, self.best_params_, x).mean, low, high) for x in X])

    def score(self, problem=None, episodes: int = 5, seed: int = 0):
        """Mean episode fitness of the best policy (on the fitted problem by default)."""
        check_is_fitted(self, "best_params_")
        problem = self.problem_ if problem is None else check_problem(problem)
        return test_average(problem, self.spec_, self.best_params_, episodes, seed, self.deterministic_eval)


class ISLSearch(_PolicySearch):
    """Social-learning policy search (learning, imitation and self-study cohorts)."""

    def __init__(self, n_learn=5, n_imitate=3, n_selfstudy=2, max_step=100_000, sampling_num=3,
                 test_num=5, hidden=(64, 64), activation="tanh", alpha_min=0.01, alpha_max=0.1,
                 levy_beta=1.5, perturb_low=-1.0, perturb_high=1.0, full_perturb_prob=0.5,
                 clamp_factor=1.5, clamp_mode="contain", deterministic_eval=False, n_jobs=1,
                 random_state=None):
        self.n_learn = n_learn
        self.n_imitate = n_imitate
        self.n_selfstudy = n_selfstudy
        self.max_step = max_step
        self.sampling_num = sampling_num
        self.test_num = test_num
        self.hidden = hidden
        self.activation = activation
        self.alpha_min = alpha_min
        self.alpha_max = alpha_max
        self.levy_beta = levy_beta
        self.perturb_low = perturb_low
        self.perturb_high = perturb_high
        self.full_perturb_prob = full_perturb_prob
        self.clamp_factor = clamp_factor
        self.clamp_mode = clamp_mode
        self.deterministic_eval = deterministic_eval
        self.n_jobs = n_jobs
        self.random_state = random_state

    def _config(self):
        style = StyleConfig(self.alpha_min, self.alpha_max, LevyConfig(self.levy_beta), self.perturb_low,
                            self.perturb_high, self.full_perturb_prob, self.clamp_factor, self.clamp_mode)
        return self._base_config(n_learn=self.n_learn, n_imitate=self.n_imitate,
                                 n_selfstudy=self.n_selfstudy, sampling_num=self.sampling_num, style=style)

    def _run(self, config, problem):
        return run(config, problem)


class GASearch(_PolicySearch):
    """Elitist genetic algorithm with tournament selection and Gaussian mutation."""

    def __init__(self, pop_size=10, elite_fraction=0.2, tournament_size=3, mutation_prob=0.9,
                 mutation_scale=0.1, max_step=100_000, test_num=5, hidden=(64, 64), activation="tanh",
                 deterministic_eval=False, n_jobs=1, random_state=None):
        self.pop_size = pop_size
        self.elite_fraction = elite_fraction
        self.tournament_size = tournament_size
        self.mutation_prob = mutation_prob
        self.mutation_scale = mutation_scale
        self.max_step = max_step
        self.test_num = test_num
        self.hidden = hidden
        self.activation = activation
        self.deterministic_eval = deterministic_eval
        self.n_jobs = n_jobs
        self.random_state = random_state

    def _config(self):
        return self._base_config()

    def _run(self, config, problem):
        ga = GaConfig(self.pop_size, self.elite_fraction, self.tournament_size, self.mutation_prob,
                      self.mutation_scale)
        return ga_run(config, problem, ga)


class RandomSearch(_PolicySearch):
    def __init__(self, pop_size=10, max_step=100_000, test_num=5, hidden=(64, 64), activation="tanh",
                 deterministic_eval=False, n_jobs=1, random_state=None):
        self.pop_size = pop_size
        self.max_step = max_step
        self.test_num = test_num
        self.hidden = hidden
        self.activation = activation
        self.deterministic_eval = deterministic_eval
        self.n_jobs = n_jobs
        self.random_state = random_state

    def _config(self):
        return self._base_config()

    def _run(self, config, problem):
        return random_search_run(config, problem, self.pop_size)
