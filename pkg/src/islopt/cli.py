"""Command-line entry point: ``islopt run|replay|list-problems|validate``.

Exit codes: 0 success, 1 configuration error, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .config import ConfigError, dump_config, load_config
from .experiment import replay, run_experiment
from .problems import list_problems, make_problem

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2

DESCRIPTIONS = {
    "cartpole": "cart-pole balancing, continuous force, 500-step cap",
    "pendulum": "torque-limited pendulum swing-up, 200-step cap",
    "pickplace": "kinematic 4-joint arm, staged grasp-then-place reward, 300-step cap",
    "reacher": "2-link planar arm reaching a random target, 200-step cap",
    "rastrigin": "direct objective, -rastrigin(x)",
    "rosenbrock": "direct objective, -rosenbrock(x)",
    "sphere": "direct objective, -|x|^2",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="islopt", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a seeded batch from a config file")
    p.add_argument("config")
    p.add_argument("--seed", type=int)
    p.add_argument("--num-seeds", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out")
    p.add_argument("--deterministic-eval", action="store_true", default=None)
    p.add_argument("--debug-trace", action="store_true", default=None)
    p.add_argument("--parallel-runs", action="store_true", default=None)

    p = sub.add_parser("replay", help="run a stored policy on a problem")
    p.add_argument("params")
    p.add_argument("problem")
    p.add_argument("--episodes", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="config file supplying problem settings (dim, pick-and-place geometry)")
    p.add_argument("--dim", type=int, help="dimension of a direct objective")
    p.add_argument("--deterministic-eval", action="store_true")
    p.add_argument("--debug-trace", metavar="CSV", help="write a per-step trace to this file")

    sub.add_parser("list-problems", help="list available problems")

    p = sub.add_parser("validate", help="check a config file and print it fully resolved")
    p.add_argument("config")
    return parser


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    overrides = {
        "seed": args.seed, "num_seeds": args.num_seeds, "workers": args.workers, "output_dir": args.out,
        "deterministic_eval": args.deterministic_eval, "debug_trace": args.debug_trace,
        "parallel_runs": args.parallel_runs,
    }
    cfg = cfg.replace(**{k: v for k, v in overrides.items() if v is not None})
    summary = run_experiment(cfg)
    for seed, msg in sorted(summary.failures.items()):
        print(f"seed {seed} failed: {msg}", file=sys.stderr)
    return EXIT_RUNTIME if not summary.reports else EXIT_OK


def _cmd_replay(args) -> int:
    if args.config:
        cfg = load_config(args.config).replace(problem=args.problem)
        if args.dim is not None:
            cfg = cfg.replace(problem_dim=args.dim)
        problem = cfg.make_problem()
    else:
        if args.problem not in list_problems():
            raise ConfigError(f"unknown problem {args.problem!r}; choose from {list_problems()}", "problem")
        problem = make_problem(args.problem, dim=args.dim or 10)
    scores = replay(args.params, problem, args.episodes, args.seed, args.deterministic_eval, args.debug_trace)
    for k, s in enumerate(scores):
        print(f"episode {k}: {s!r}")
    print(f"mean: {float(np.mean(scores))!r}")
    return EXIT_OK


def _cmd_list(args) -> int:
    for name in list_problems():
        print(f"{name:<12} {DESCRIPTIONS.get(name, '')}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    print(dump_config(load_config(args.config)), end="")
    return EXIT_OK


_COMMANDS = {"run": _cmd_run, "replay": _cmd_replay, "list-problems": _cmd_list, "validate": _cmd_validate}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
