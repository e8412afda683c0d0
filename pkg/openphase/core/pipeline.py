import os
from abc import ABC, abstractmethod
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from io import StringIO
from typing import Dict, List, Optional

import mlflow
import numpy as np
import pandas as pd
from loguru import logger
from sklearn.model_selection import ParameterGrid
from tqdm import tqdm

from openphase.core.base.config import DEFAULT_POLICY, SizePolicy
from openphase.core.base.lattice import LatticeSpec
from openphase.core.base.logger import DefaultLogger
from openphase.core.base.settings import (GridConfig, MLFlowConfig,
                                          SweepConfig)
from openphase.core.duality import DUALITY_TOL, check_duality
from openphase.core.launcher import Launcher
from openphase.loaders.config_loader import save_sweep_config
from openphase.loaders.report_loader import emit
from openphase.loaders.structs import PointReport, PointTable

METRICS = ('gap', 'K_abs', 'UU', 'string_order', 'EE')


def _grid_points(grid: GridConfig) -> List[Dict[str, float]]:
    """
    Grid points in a fixed order: b varies fastest.
    """
    return sorted(ParameterGrid(grid.params_grid()), key=lambda p: (p['a'], p['b']))


def _run_grid_point(config: SweepConfig, policy: SizePolicy, dumps_path: Optional[str],
                    a: float, b: float) -> PointReport:
    """
    Worker entry point; failures become the row's error message.
    """
    launcher = Launcher(config.model, config.solver, config.observables, policy, dumps_path=dumps_path,
                        dump_spectra=config.output.dump_spectra, dump_superops=config.output.dump_superops)
    try:
        return launcher.run_point(a, b)
    except Exception as e:  # pylint: disable=broad-except
        lattice = config.model.lattice()
        return PointReport(a=a, b=b, N=lattice.n_sites, boundary=lattice.boundary.value,
                           error=f"{type(e).__name__}: {e}")
    finally:
        launcher.close()


@dataclass
class SweepResult:
    """
    Reports of a sweep in grid order and the files written for them.
    """
    reports: List[PointReport]
    paths: List[str] = field(default_factory=list)

    @property
    def has_errors(self) -> bool:
        return any(report.failed for report in self.reports)

    def to_dataframe(self) -> pd.DataFrame:
        return PointTable(self.reports)


class Pipeline(ABC):
    """
    Pipeline for running experiments over a parameter grid.
    """
    def __init__(self, config: SweepConfig, mlflow_config: Optional[MLFlowConfig] = None) -> None:
        """
        Initialize the pipeline.

        Args:
            config (SweepConfig): Sweep description.
            mlflow_config (Optional[MLFlowConfig]): MLFlow configuration to store metrics and artifacts;
                falls back to the sweep's own mlflow block.
        """
        self._config: SweepConfig = config
        self._mlflow_config: Optional[MLFlowConfig] = mlflow_config if mlflow_config is not None else config.mlflow
        if self._mlflow_config is not None:
            self.__connect_mlflow()

    def __connect_mlflow(self) -> None:
        """
        Connect to MLFlow server.
        """
        os.environ["AWS_ACCESS_KEY_ID"] = self._mlflow_config.aws_access_key_id or ''
        os.environ["AWS_SECRET_ACCESS_KEY"] = self._mlflow_config.aws_secret_access_key or ''
        mlflow.set_tracking_uri(self._mlflow_config.mlflow_uri)
        # check if the experiment already exists
        experiment = mlflow.get_experiment_by_name(self._mlflow_config.experiment_name)
        if experiment is None:
            mlflow.create_experiment(name=self._mlflow_config.experiment_name, tags=self._mlflow_config.tags)
        mlflow.set_experiment(self._mlflow_config.experiment_name)

    @abstractmethod
    def grid_step(self, params: Dict[str, float]) -> PointReport:
        """
        Run one grid point.

        Args:
            params (Dict[str, float]): Values of a and b.
        """
        raise NotImplementedError

    @abstractmethod
    def run(self) -> SweepResult:
        """
        Run steps through the grid of parameters.
        """
        raise NotImplementedError


class SweepPipeline(Pipeline):
    """
    Phase-diagram sweep over the (a, b) grid. Points are independent; with
    more than one worker they run in a process pool. Failed points keep
    their row with the error message instead of aborting the sweep.
    """
    def __init__(self, config: SweepConfig, mlflow_config: Optional[MLFlowConfig] = None,
                 policy: SizePolicy = DEFAULT_POLICY, base_artifacts_path: Optional[str] = None) -> None:
        config.validate(policy)
        super().__init__(config, mlflow_config)
        self._policy: SizePolicy = policy
        self._base_artifacts_path: Optional[str] = base_artifacts_path
        self._logger: Optional[DefaultLogger] = None

    @property
    def logger(self) -> DefaultLogger:
        if self._logger is None:
            self._logger = DefaultLogger(self._base_artifacts_path, class_name=self.__class__.__name__)
        return self._logger

    @property
    def output_directory(self) -> str:
        return self._config.output.directory or self.logger.datasets_path

    def _dumps_path(self) -> Optional[str]:
        output = self._config.output
        if not (output.dump_spectra or output.dump_superops):
            return None
        return f'{self.output_directory}/dumps'

    def grid_step(self, params: Dict[str, float]) -> PointReport:
        report = _run_grid_point(self._config, self._policy, self._dumps_path(), params['a'], params['b'])
        self._track(report)
        return report

    def _track(self, report: PointReport) -> None:
        if report.failed:
            logger.debug(f"point a={report.a:g} b={report.b:g} failed: {report.error}")
            if self._config.debug:
                self.logger.debug(f"a={report.a:g} b={report.b:g} | error={report.error}")
        elif self._config.debug:
            self.logger.debug(f"a={report.a:g} b={report.b:g} | gap={report.gap:.10g} | wall_ms={report.wall_ms:.1f}")

    def _log_mlflow(self, reports: List[PointReport]) -> None:
        table: pd.DataFrame = PointTable(reports)
        csv_buffer = StringIO()
        table.to_csv(csv_buffer, index=False, float_format='%.17g')
        for report in reports:
            run_name = None
            params = {'a': report.a, 'b': report.b, 'N': report.N, 'boundary': report.boundary}
            if self._mlflow_config.run_name_formatter:
                run_name = self._mlflow_config.run_name_formatter(params)
            with mlflow.start_run(run_name=run_name):
                mlflow.log_params(params)
                metrics = {name: getattr(report, name) for name in METRICS if np.isfinite(getattr(report, name))}
                mlflow.log_metrics(metrics)
                if report.failed:
                    mlflow.set_tag('error', report.error)
                mlflow.log_text(csv_buffer.getvalue(), "sweep.csv")
                if self._config.debug and self._logger is not None:
                    mlflow.log_artifact(self._logger.logs_path)

    def _run_pool(self, points: List[Dict[str, float]]) -> List[PointReport]:
        reports: List[Optional[PointReport]] = [None] * len(points)
        dumps_path = self._dumps_path()
        # tracking settings may hold callables that do not pickle
        config = replace(self._config, mlflow=None)
        with ProcessPoolExecutor(max_workers=self._config.workers) as executor:
            futures = {
                executor.submit(_run_grid_point, config, self._policy, dumps_path, p['a'], p['b']): i
                for i, p in enumerate(points)
            }
            for future in tqdm(as_completed(futures), total=len(futures), desc="sweep", disable=not self._config.debug):
                index = futures[future]
                reports[index] = future.result()
                self._track(reports[index])
        return reports

    def run(self) -> SweepResult:
        """
        Evaluate every grid point, write the configured formats and return
        the reports in grid order (a ascending, then b ascending).
        """
        points = _grid_points(self._config.grid)
        logger.debug(f"sweep over {len(points)} points with {self._config.workers} worker(s)")
        try:
            if self._config.workers > 1:
                reports = self._run_pool(points)
            else:
                reports = [self.grid_step(p) for p in tqdm(points, desc="sweep", disable=not self._config.debug)]
            paths = emit(reports, self.output_directory, self._config.output.formats)
            paths.append(save_sweep_config(self._config, self.output_directory))
            if self._mlflow_config is not None:
                self._log_mlflow(reports)
        finally:
            self.close()
        return SweepResult(reports, paths)

    def close(self) -> None:
        """
        Release the run logger's file sink, if one was created.
        """
        if self._logger is not None:
            self._logger.close()
            self._logger = None


def run_sweep(config: SweepConfig, policy: SizePolicy = DEFAULT_POLICY) -> SweepResult:
    return SweepPipeline(config, policy=policy).run()


def run_duality_audit(lattice: LatticeSpec, grid: GridConfig, tol: float = DUALITY_TOL,
                      policy: SizePolicy = DEFAULT_POLICY) -> pd.DataFrame:
    """
    Duality check at every grid point, as a pass/fail table with distances.
    """
    rows = []
    for params in _grid_points(grid):
        check = check_duality(params['a'], params['b'], lattice, policy=policy)
        rows.append({
            'a': check.a, 'b': check.b, 'N': check.n_sites,
            'distance': check.distance, 'intertwining': check.intertwining,
            'gap': check.gap, 'dual_gap': check.dual_gap, 'passed': check.passed(tol),
        })
    return pd.DataFrame(rows, columns=['a', 'b', 'N', 'distance', 'intertwining', 'gap', 'dual_gap', 'passed'])
