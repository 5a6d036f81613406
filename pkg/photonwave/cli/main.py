"""Batch front end: ``photonwave <task> --config <path> [--out DIR] [--seed N] [--tol-scale F]``.

Exit status: 0 every check passed, 1 a check missed its tolerance (summary still written),
2 the configuration is invalid (nothing written), 3 a grid or lattice exceeds its size cap.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from photonwave.cli import suites
from photonwave.cli.schemas import TASKS, ConfigError, RunConfig, load_run_config
from photonwave.grid import BudgetExceeded
from photonwave.quantum import greens, quantization

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class ToleranceFailure(RuntimeError):
    def __init__(self, failed: list[suites.CheckResult]):
        self.failed = failed
        names = ", ".join(result.name for result in failed)
        super().__init__(f"{len(failed)} check(s) outside tolerance: {names}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="photonwave", description=__doc__)
    parser.add_argument("task", choices=TASKS, help="Which suite or simulation to run.")
    parser.add_argument("--config", type=Path, required=True, help="TOML run configuration.")
    parser.add_argument("--out", type=Path, help="Output directory (overrides the config).")
    parser.add_argument("--seed", type=int, help="Random seed (overrides the config).")
    parser.add_argument(
        "--tol-scale", dest="tol_scale", type=float, help="Multiply every residual tolerance."
    )
    return parser


def preflight(config: RunConfig) -> None:
    """Raise ``BudgetExceeded`` or ``ConfigError`` before anything is written."""

    suites.build_box(config)
    if config.task in ("check", "propagator"):
        greens.check_lattice_budget(suites.propagator_lattice(config))
    if config.task in ("check", "quantize"):
        try:
            quantization.FockModel.from_labels(
                suites.build_box(config), config.quantize.labels, config.quantize.n_max
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def configure_logging(out: Path, level: str = "INFO") -> logging.Handler:
    root = logging.getLogger()
    root.setLevel(level)
    file_handler = logging.FileHandler(out / "run.log", mode="w")
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(file_handler)
    if not any(type(h) is logging.StreamHandler for h in root.handlers):
        stream = logging.StreamHandler()
        stream.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(stream)
    return file_handler


def summary_document(config: RunConfig, results: list[suites.CheckResult]) -> str:
    document = {
        "task": config.task,
        "parameters": config.model_dump(mode="json", exclude={"out"}),
        "checks": [result.as_dict() for result in results],
        "passed": all(result.passed for result in results),
    }
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def execute(config: RunConfig) -> list[suites.CheckResult]:
    out = config.out
    started = time.perf_counter()
    results = suites.run_suites(config)
    artifacts = suites.TASK_ARTIFACTS.get(config.task)
    if artifacts is not None:
        results.extend(artifacts(config, out))
    (out / "summary.json").write_text(summary_document(config, results))
    elapsed = time.perf_counter() - started
    logger.info("Task %s finished %d checks in %.2fs", config.task, len(results), elapsed)
    failed = [result for result in results if not result.passed]
    if failed:
        raise ToleranceFailure(failed)
    return results


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_run_config(
            args.config, task=args.task, out=args.out, seed=args.seed, tol_scale=args.tol_scale
        )
        preflight(config)
    except ConfigError as exc:
        print(f"photonwave: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExceeded as exc:
        print(f"photonwave: {exc}", file=sys.stderr)
        return EXIT_BUDGET

    config.out.mkdir(parents=True, exist_ok=True)
    handler = configure_logging(config.out, config.log_level)
    try:
        execute(config)
    except ToleranceFailure as exc:
        logger.error("%s", exc)
        return EXIT_TOLERANCE
    except BudgetExceeded as exc:
        logger.error("%s", exc)
        return EXIT_BUDGET
    finally:
        logging.getLogger().removeHandler(handler)
        handler.close()
    return EXIT_OK


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
