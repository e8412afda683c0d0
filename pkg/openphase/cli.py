"""
Command-line entry point.

    openphase point  CONFIG [--a A] [--b B]        one report as JSON on stdout
    openphase sweep  CONFIG [-o DIR] [--workers W]  CSV/JSON table over the grid
    openphase duality [CONFIG] [--n-sites N]       pass/fail duality table

Exit code is 1 when any sweep row recorded an error or any duality
point failed, 2 for an unusable configuration, 0 otherwise.
"""
import argparse
import json
import os
import sys
from typing import List, Optional

from loguru import logger

from openphase.core.base.lattice import Boundary, LatticeSpec
from openphase.core.base.settings import (GridConfig, SweepConfig,
                                          SweepConfigException)
from openphase.core.duality import DUALITY_TOL, DualityException
from openphase.core.launcher import Launcher
from openphase.core.observables import ObservableException
from openphase.core.pipeline import run_duality_audit, run_sweep
from openphase.core.spectral import SpectrumException
from openphase.loaders.config_loader import load_sweep_config

EXIT_OK: int = 0
EXIT_FAILED_ROWS: int = 1
EXIT_BAD_INPUT: int = 2


def _add_overrides(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-o", "--output", dest="directory", default=None, help="output directory")
    parser.add_argument("-N", "--n-sites", type=int, default=None, help="override the number of unit cells")
    parser.add_argument("--boundary", choices=[b.value for b in Boundary], default=None)
    parser.add_argument("--a-steps", type=int, default=None)
    parser.add_argument("--b-steps", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None, help="seed of the iterative solver")
    parser.add_argument("-w", "--workers", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="openphase",
                                     description="Phase diagrams of open qubit chains from Liouvillian spectra.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging and per-run log files")
    commands = parser.add_subparsers(dest="command", required=True)

    point = commands.add_parser("point", help="evaluate a single (a, b) point")
    point.add_argument("config", help="sweep YAML file")
    point.add_argument("--a", type=float, default=None, help="defaults to the model block value")
    point.add_argument("--b", type=float, default=None, help="defaults to the model block value")
    _add_overrides(point)

    sweep = commands.add_parser("sweep", help="evaluate the (a, b) grid")
    sweep.add_argument("config", help="sweep YAML file")
    _add_overrides(sweep)

    duality = commands.add_parser("duality", help="check the domain-wall duality over the grid")
    duality.add_argument("config", nargs="?", default=None, help="optional sweep YAML file for N and the grid")
    duality.add_argument("--tol", type=float, default=DUALITY_TOL)
    _add_overrides(duality)
    return parser


def _configure_logging(verbose: bool) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else "WARNING")


def _config(args: argparse.Namespace) -> SweepConfig:
    config = load_sweep_config(args.config) if getattr(args, "config", None) else SweepConfig()
    return config.with_overrides(n_sites=args.n_sites, boundary=args.boundary, a_steps=args.a_steps,
                                 b_steps=args.b_steps, seed=args.seed, workers=args.workers,
                                 directory=args.directory, debug=True if args.verbose else None).validate()


def _run_point(args: argparse.Namespace, config: SweepConfig) -> int:
    launcher = Launcher(config.model, config.solver, config.observables, debug=config.debug,
                        dumps_path=config.output.directory, dump_spectra=config.output.dump_spectra,
                        dump_superops=config.output.dump_superops)
    a = config.model.a if args.a is None else args.a
    b = config.model.b if args.b is None else args.b
    try:
        report = launcher.run_point(a, b)
    except (SpectrumException, ObservableException) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_FAILED_ROWS
    finally:
        launcher.close()
    print(json.dumps(report.to_dict(), indent=1))
    return EXIT_OK


def _run_sweep(config: SweepConfig) -> int:
    result = run_sweep(config)
    for path in result.paths:
        print(path)
    failed = [report for report in result.reports if report.failed]
    for report in failed:
        logger.warning(f"a={report.a:g} b={report.b:g}: {report.error}")
    return EXIT_FAILED_ROWS if failed else EXIT_OK


def _run_duality(args: argparse.Namespace, config: SweepConfig) -> int:
    lattice = LatticeSpec(config.model.n_sites, Boundary.parse(args.boundary or 'periodic'))
    grid: GridConfig = config.grid
    table = run_duality_audit(lattice, grid, tol=args.tol)
    if config.output.directory is not None:
        os.makedirs(config.output.directory, exist_ok=True)
        path = f'{config.output.directory}/duality.csv'
        table.to_csv(path, index=False, float_format='%.17g')
        print(path)
    else:
        print(table.to_csv(index=False, float_format='%.17g'), end='')
    return EXIT_OK if bool(table['passed'].all()) else EXIT_FAILED_ROWS


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        config = _config(args)
        if args.command == "point":
            return _run_point(args, config)
        if args.command == "sweep":
            return _run_sweep(config)
        return _run_duality(args, config)
    except (SweepConfigException, DualityException, OSError) as e:
        logger.error(str(e))
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
