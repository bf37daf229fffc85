"""Derivative-free policy search by social learning.

The core entry points are :func:`islopt.optimizer.run` and the estimator
classes in :mod:`islopt.estimators`; baselines live in
:mod:`islopt.baselines` and the experiment harness in :mod:`islopt.cli`.
"""
from .baselines import GaConfig, ga_run, random_search_run
from .estimators import GASearch, ISLSearch, RandomSearch
from .levy import AlphaSchedule, LevyConfig, alpha_at, sample_levy, sigma_u
from .optimizer import ArchiveEntry, GenerationRecord, RunConfig, RunReport, archive_best, run, select_best
from .policy import ParameterSet, PolicySpec, VectorSpec
from .problems import list_problems, make_problem
from .styles import StyleConfig

__version__ = "0.1.0"

__all__ = [
    "AlphaSchedule", "ArchiveEntry", "GASearch", "GaConfig", "GenerationRecord", "ISLSearch",
    "LevyConfig", "ParameterSet", "PolicySpec", "RandomSearch", "RunConfig", "RunReport",
    "StyleConfig", "VectorSpec", "alpha_at", "archive_best", "ga_run", "list_problems",
    "make_problem", "random_search_run", "run", "sample_levy", "select_best", "sigma_u",
]
