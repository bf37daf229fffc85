"""Experiment configuration files.

The format is one ``key = value`` pair per line; ``#`` starts a comment and
blank lines are ignored. Values are typed by key: integers, floats,
booleans (``true``/``false``), strings, or comma-separated lists. Every key
except ``problem`` and ``optimizer`` has a default; unknown keys are
rejected. Example::

    # 10-D sphere, ISL, five seeds
    problem = sphere
    optimizer = isl
    max_step = 200000
    pop_n = 5
    pop_p = 3
    pop_q = 2
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Union, get_type_hints

from .baselines import GaConfig
from .levy import LevyConfig
from .optimizer import RunConfig
from .problems import PickPlaceConfig, list_problems, make_problem
from .styles import StyleConfig

OPTIMIZERS = ("isl", "ga", "random")
REQUIRED = ("problem", "optimizer")


class ConfigError(ValueError):
    """Invalid experiment configuration; ``key`` names the offending entry."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str
    optimizer: str
    seed: int = 0
    num_seeds: int = 5
    max_step: int = 100_000
    pop_num: int = 10
    pop_n: int = 5
    pop_p: int = 3
    pop_q: int = 2
    sampling_num: int = 3
    test_num: int = 5
    hidden: tuple[int, ...] = (64, 64)
    activation: str = "tanh"
    alpha_min: float = 0.01
    alpha_max: float = 0.1
    levy_beta: float = 1.5
    perturb_low: float = -1.0
    perturb_high: float = 1.0
    full_perturb_prob: float = 0.5
    clamp_factor: float = 1.5
    clamp_mode: str = "contain"
    var_floor: float = 1e-6
    deterministic_eval: bool = False
    workers: int = 1
    parallel_runs: bool = False
    output_dir: str = "runs"
    record_timing: bool = False
    debug_trace: bool = False
    problem_dim: int = 10
    ga_elite_fraction: float = 0.2
    ga_tournament_size: int = 3
    ga_mutation_prob: float = 0.9
    ga_mutation_scale: float = 0.1
    pickplace_p_cube: tuple[float, ...] = (0.30, 0.10, 0.02)
    pickplace_p_dot: tuple[float, ...] = (0.10, -0.30, 0.02)
    pickplace_near1: tuple[float, ...] = (0.05, 0.05, 0.05)
    pickplace_near2: tuple[float, ...] = (0.05, 0.05, 0.05)
    pickplace_links: tuple[float, ...] = (0.25, 0.20, 0.10)
    pickplace_jitter: float = 0.0

    def __post_init__(self):
        _validate(self)

    def style_config(self) -> StyleConfig:
        return StyleConfig(
            alpha_min=self.alpha_min, alpha_max=self.alpha_max, levy=LevyConfig(self.levy_beta),
            perturb_low=self.perturb_low, perturb_high=self.perturb_high,
            full_perturb_prob=self.full_perturb_prob, clamp_factor=self.clamp_factor,
            clamp_mode=self.clamp_mode, var_floor=self.var_floor)

    def run_config(self, seed: int | None = None, n_jobs: int | None = None) -> RunConfig:
        return RunConfig(
            problem=self.problem, n_learn=self.pop_n, n_imitate=self.pop_p, n_selfstudy=self.pop_q,
            max_step=self.max_step, sampling_num=self.sampling_num, test_num=self.test_num,
            seed=self.seed if seed is None else seed, hidden=self.hidden, activation=self.activation,
            style=self.style_config(), deterministic_eval=self.deterministic_eval,
            n_jobs=self.workers if n_jobs is None else n_jobs)

    def ga_config(self) -> GaConfig:
        return GaConfig(self.pop_num, self.ga_elite_fraction, self.ga_tournament_size,
                        self.ga_mutation_prob, self.ga_mutation_scale)

    def pickplace_config(self) -> PickPlaceConfig:
        return PickPlaceConfig(p_cube=self.pickplace_p_cube, p_dot=self.pickplace_p_dot,
                               near1=self.pickplace_near1, near2=self.pickplace_near2,
                               links=self.pickplace_links, jitter=self.pickplace_jitter)

    def make_problem(self):
        return make_problem(self.problem, dim=self.problem_dim, pickplace=self.pickplace_config())

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)


_FIELDS = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
_TYPES = get_type_hints(ExperimentConfig)

# (keys, builder) pairs used to surface sub-config errors under a key name
_CHECKS = (
    (("levy_beta",), lambda c: LevyConfig(c.levy_beta)),
    (("alpha_min", "alpha_max", "perturb_low", "perturb_high", "full_perturb_prob", "clamp_factor",
      "clamp_mode", "var_floor"), lambda c: c.style_config()),
    (("ga_elite_fraction", "ga_tournament_size", "ga_mutation_prob", "ga_mutation_scale"),
     lambda c: c.ga_config()),
    (("pickplace_p_cube", "pickplace_p_dot", "pickplace_near1", "pickplace_near2", "pickplace_links",
      "pickplace_jitter"), lambda c: c.pickplace_config()),
    (("max_step", "sampling_num", "test_num", "seed", "hidden", "activation", "workers"),
     lambda c: c.run_config()),
)


def _validate(cfg: ExperimentConfig) -> None:
    if cfg.problem not in list_problems():
        raise ConfigError(f"problem: unknown problem {cfg.problem!r}; choose from {list_problems()}", "problem")
    if cfg.optimizer not in OPTIMIZERS:
        raise ConfigError(f"optimizer: must be one of {OPTIMIZERS}, got {cfg.optimizer!r}", "optimizer")
    if cfg.num_seeds < 1:
        raise ConfigError("num_seeds: must be >= 1", "num_seeds")
    for key in ("pop_num", "pop_n", "pop_p", "pop_q", "problem_dim"):
        if getattr(cfg, key) < 1:
            raise ConfigError(f"{key}: must be >= 1", key)
    if cfg.pop_n + cfg.pop_p + cfg.pop_q != cfg.pop_num:
        raise ConfigError(
            f"pop_n + pop_p + pop_q must equal pop_num ({cfg.pop_n} + {cfg.pop_p} + {cfg.pop_q} != {cfg.pop_num})",
            "pop_num")
    if cfg.workers < 1:
        raise ConfigError("workers: must be >= 1", "workers")
    if cfg.activation not in ("tanh", "relu"):
        raise ConfigError(f"activation: must be 'tanh' or 'relu', got {cfg.activation!r}", "activation")
    for keys, build in _CHECKS:
        try:
            build(cfg)
        except ConfigError:
            raise
        except (ValueError, TypeError) as exc:
            key = _blame(keys, str(exc))
            raise ConfigError(f"{key}: {exc}", key) from None


def _blame(keys, message: str) -> str:
    """Pick the key whose (unprefixed) name appears first in a sub-config error message."""
    hits = []
    for key in keys:
        bare = key.split("_", 1)[1] if key.startswith(("ga_", "pickplace_")) else key
        if bare in message:
            hits.append((message.index(bare), -len(bare), key))
    return min(hits)[2] if hits else keys[0]


def _parse_value(key: str, raw: str):
    typ = _TYPES[key]
    try:
        if typ is bool:
            low = raw.lower()
            if low not in ("true", "false"):
                raise ValueError("expected true or false")
            return low == "true"
        if typ is int:
            return int(raw)
        if typ is float:
            return float(raw)
        if typ is str:
            if not raw:
                raise ValueError("empty value")
            return raw
        item = typ.__args__[0]  # tuple[int|float, ...]
        return tuple(item(v.strip()) for v in raw.split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {raw!r} ({exc})", key) from None


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if not sep or not key:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        if key not in _FIELDS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}", key)
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}", key)
        values[key] = _parse_value(key, raw)
    for key in REQUIRED:
        if key not in values:
            raise ConfigError(f"{source}: missing required key {key!r}", key)
    return ExperimentConfig(**values)


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, str(path))


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ",".join(_format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dump_config(cfg: ExperimentConfig) -> str:
    """Serialize every key in declaration order; ``parse_config`` inverts it."""
    lines = [f"{name} = {_format_value(getattr(cfg, name))}" for name in _FIELDS]
    return "\n".join(lines) + "\n"
