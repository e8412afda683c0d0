"""
Configuration of single points and (a, b) sweeps.

The dataclasses mirror the blocks of a sweep YAML file; see
docs/source/configuration.rst for the file syntax.
"""
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from openphase.core.base.config import DEFAULT_POLICY, SizePolicy
from openphase.core.base.generator import LindbladGenerator
from openphase.core.base.lattice import Boundary, LatticeException, LatticeSpec
from openphase.core.models import (Corner, GibbsSpec, InterpolationParams,
                                   ModelException, build_corner,
                                   build_interpolated, build_stabilizer_gibbs,
                                   cluster_gibbs_spec)

MODEL_KINDS: Tuple[str, ...] = ('corner', 'interpolated', 'gibbs')
SOLVER_METHODS: Tuple[str, ...] = ('auto', 'dense', 'iterative')
OUTPUT_FORMATS: Tuple[str, ...] = ('csv', 'json')
OBSERVABLE_LABELS: Tuple[str, ...] = ('K_abs', 'UU', 'string_order', 'EE', 'ES_degeneracy', 'GSD', 'xi1', 'xi2')
OBSERVABLE_ALIASES: Dict[str, str] = {
    'strong_indicator_K': 'K_abs',
    'weak_indicator_U': 'UU',
    'entanglement_entropy': 'EE',
    'entanglement_spectrum': 'ES_degeneracy',
    'gsd': 'GSD',
    'xi_linear': 'xi1',
    'xi_renyi2': 'xi2',
}


class SweepConfigException(Exception):
    """
    Exception raised for invalid configuration values or unknown keys.
    """


@dataclass
class ModelConfig:
    """
    Model block.

    Attributes:
        kind (str): 'corner', 'interpolated' or 'gibbs'.
        n_sites (int): Number of unit cells N.
        boundary (str): 'periodic' or 'open'.
        corner (Optional[str]): Corner label for kind 'corner'.
        a (float): Fixed a for single points.
        b (float): Fixed b for single points.
        beta_T (Optional[float]): Inverse temperature for kind 'gibbs'.
        stabilizers (Optional[List[str]]): Explicit stabilizer words for kind 'gibbs'.
        excitations (Optional[List[str]]): Explicit excitation words for kind 'gibbs'.
    """
    kind: str = 'interpolated'
    n_sites: int = 3
    boundary: str = 'periodic'
    corner: Optional[str] = None
    a: float = 0.0
    b: float = 0.0
    beta_T: Optional[float] = None
    stabilizers: Optional[List[str]] = None
    excitations: Optional[List[str]] = None

    def validate(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise SweepConfigException(f"Unknown model kind {self.kind!r}, expected one of {MODEL_KINDS}.")
        try:
            self.lattice()
            if self.kind == 'corner':
                if self.corner is None:
                    raise SweepConfigException("Model kind 'corner' needs a 'corner' value.")
                Corner.parse(self.corner)
            if self.kind == 'interpolated':
                InterpolationParams(self.a, self.b)
        except (LatticeException, ModelException) as e:
            raise SweepConfigException(str(e)) from e
        if self.kind == 'gibbs':
            if self.beta_T is None or not self.beta_T > 0:
                raise SweepConfigException(f"Model kind 'gibbs' needs a positive beta_T, got {self.beta_T}.")
            if (self.stabilizers is None) != (self.excitations is None):
                raise SweepConfigException("Explicit stabilizers and excitations must be given together.")

    def lattice(self) -> LatticeSpec:
        return LatticeSpec(int(self.n_sites), Boundary.parse(self.boundary))

    def generator(self, a: Optional[float] = None, b: Optional[float] = None) -> LindbladGenerator:
        """
        Build the generator at (a, b), defaulting to the block's own values.
        """
        lattice = self.lattice()
        if self.kind == 'corner':
            return build_corner(self.corner, lattice)
        if self.kind == 'interpolated':
            a = self.a if a is None else a
            b = self.b if b is None else b
            return build_interpolated(InterpolationParams(a, b), lattice)
        if self.stabilizers is not None:
            return build_stabilizer_gibbs(GibbsSpec.from_words(self.stabilizers, self.excitations, self.beta_T))
        return build_stabilizer_gibbs(cluster_gibbs_spec(lattice, self.beta_T))


@dataclass
class SolverConfig:
    """
    Solver block.

    Attributes:
        method (str): 'dense', 'iterative' or 'auto' (dense up to dimension 4096).
        k (int): Eigenpairs requested from the iterative solver.
        seed (int): Seed of the iterative start vector.
        tol (float): Iterative solver tolerance.
        maxiter (Optional[int]): Iterative solver iteration cap.
        degeneracy_tol (float): Relative tolerance for ground-level degeneracy.
    """
    method: str = 'auto'
    k: int = 8
    seed: int = 0
    tol: float = 1e-10
    maxiter: Optional[int] = None
    degeneracy_tol: float = 1e-7

    def validate(self) -> None:
        if self.method not in SOLVER_METHODS:
            raise SweepConfigException(f"Unknown solver method {self.method!r}, expected one of {SOLVER_METHODS}.")
        if self.k < 1:
            raise SweepConfigException(f"Solver k must be at least 1, got {self.k}.")
        if not self.tol > 0 or not self.degeneracy_tol > 0:
            raise SweepConfigException("Solver tolerances must be positive.")


@dataclass
class ObservablesConfig:
    """
    Observables block.

    Attributes:
        labels (Tuple[str, ...]): Observables to evaluate, by report column or alias.
        letter (str): Pauli letter of the σ correlators used for ξ fits.
        cut_site (Optional[int]): Entanglement cut; defaults to N // 2.
    """
    labels: Tuple[str, ...] = ('K_abs', 'UU', 'string_order', 'EE', 'ES_degeneracy', 'xi1', 'xi2')
    letter: str = 'Z'
    cut_site: Optional[int] = None

    def __post_init__(self):
        self.labels = tuple(OBSERVABLE_ALIASES.get(label, label) for label in self.labels)

    def validate(self) -> None:
        unknown = [label for label in self.labels if label not in OBSERVABLE_LABELS]
        if unknown:
            raise SweepConfigException(f"Unknown observables {unknown}, expected labels from {OBSERVABLE_LABELS}.")
        if self.letter not in ('X', 'Y', 'Z'):
            raise SweepConfigException(f"Correlator letter must be X, Y or Z, got {self.letter!r}.")

    def wants(self, label: str) -> bool:
        return label in self.labels


@dataclass
class GridConfig:
    """
    Grid block: `a_steps` points over `a_range` and `b_steps` over `b_range`, ends included.
    """
    a_range: Tuple[float, float] = (0.0, 1.0)
    b_range: Tuple[float, float] = (0.0, 1.0)
    a_steps: int = 11
    b_steps: int = 11

    def validate(self) -> None:
        for name, bounds in (('a_range', self.a_range), ('b_range', self.b_range)):
            if len(bounds) != 2 or not 0.0 <= bounds[0] <= bounds[1] <= 1.0:
                raise SweepConfigException(f"{name} must satisfy 0 <= lo <= hi <= 1, got {bounds}.")
        if self.a_steps < 1 or self.b_steps < 1:
            raise SweepConfigException(f"Step counts must be at least 1, got {self.a_steps}, {self.b_steps}.")

    def axis(self, name: str) -> np.ndarray:
        lo, hi = self.a_range if name == 'a' else self.b_range
        steps = self.a_steps if name == 'a' else self.b_steps
        return np.linspace(lo, hi, steps) if steps > 1 else np.array([lo])

    def params_grid(self) -> Dict[str, List[float]]:
        return {'a': [float(v) for v in self.axis('a')], 'b': [float(v) for v in self.axis('b')]}

    @property
    def size(self) -> int:
        return self.a_steps * self.b_steps


@dataclass
class OutputConfig:
    """
    Output block.

    Attributes:
        directory (Optional[str]): Output directory; the run's datasets folder when unset.
        formats (Tuple[str, ...]): Any of 'csv' and 'json'.
        dump_spectra (bool): Write one "Re Im" spectrum file per point.
        dump_superops (bool): Write one binary superoperator file per point.
    """
    directory: Optional[str] = None
    formats: Tuple[str, ...] = ('csv', 'json')
    dump_spectra: bool = False
    dump_superops: bool = False

    def validate(self) -> None:
        unknown = [f for f in self.formats if f not in OUTPUT_FORMATS]
        if unknown:
            raise SweepConfigException(f"Unknown output formats {unknown}, expected {OUTPUT_FORMATS}.")


@dataclass
class MLFlowConfig:
    """
    MLFlow configuration for sweep tracking.

    Attributes:
        experiment_name (str): Name of the experiment.
        mlflow_uri (str): URI of the MLFlow server.
        tags (Optional[Dict[str, str]]): Tags for the experiment.
        aws_access_key_id (Optional[str]): AWS access key ID for artifact storage.
        aws_secret_access_key (Optional[str]): AWS secret access key.
        run_name_formatter (Optional[Callable[[Dict], str]]): Formatter for run names.
    """
    experiment_name: str
    mlflow_uri: str
    tags: Optional[Dict[str, str]] = None
    aws_access_key_id: Optional[str] = ''
    aws_secret_access_key: Optional[str] = ''
    run_name_formatter: Optional[Callable[[Dict], str]] = None


_BLOCKS = {
    'model': ModelConfig,
    'grid': GridConfig,
    'solver': SolverConfig,
    'observables': ObservablesConfig,
    'output': OutputConfig,
}


def _block(name: str, cls, data: Optional[Dict[str, Any]]):
    data = dict(data or {})
    allowed = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise SweepConfigException(f"Unknown keys {unknown} in block '{name}', allowed: {sorted(allowed)}.")
    try:
        for key in ('a_range', 'b_range', 'formats', 'labels'):
            if key in data and data[key] is not None:
                data[key] = tuple(data[key])
        return cls(**data)
    except TypeError as e:
        raise SweepConfigException(f"Invalid block '{name}': {e}") from e


@dataclass
class SweepConfig:
    """
    Full description of a phase-diagram sweep.
    """
    model: ModelConfig = field(default_factory=ModelConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    observables: ObservablesConfig = field(default_factory=ObservablesConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    workers: int = 1
    mlflow: Optional[MLFlowConfig] = None
    debug: bool = False

    def validate(self, policy: SizePolicy = DEFAULT_POLICY) -> 'SweepConfig':
        """
        Raises:
            SweepConfigException: For any invalid value.
        """
        for block in (self.model, self.grid, self.solver, self.observables, self.output):
            block.validate()
        if self.workers < 1:
            raise SweepConfigException(f"Worker count must be at least 1, got {self.workers}.")
        n_qubits = 2 * int(self.model.n_sites)
        if n_qubits > policy.superop_max_qubits:
            raise SweepConfigException(
                f"N={self.model.n_sites} needs {n_qubits} qubits, beyond the solver limit of "
                f"{policy.superop_max_qubits}."
            )
        return self

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SweepConfig':
        """
        Build from the parsed YAML mapping.

        Raises:
            SweepConfigException: For unknown keys or invalid values.
        """
        data = dict(data or {})
        top = set(_BLOCKS) | {'workers', 'mlflow', 'debug'}
        unknown = sorted(set(data) - top)
        if unknown:
            raise SweepConfigException(f"Unknown top-level keys {unknown}, allowed: {sorted(top)}.")
        blocks = {name: _block(name, cls_, data.get(name)) for name, cls_ in _BLOCKS.items()}
        mlflow_config = None
        if data.get('mlflow') is not None:
            mlflow_data = dict(data['mlflow'])
            allowed = {f.name for f in fields(MLFlowConfig)} - {'run_name_formatter'}
            unknown = sorted(set(mlflow_data) - allowed)
            if unknown:
                raise SweepConfigException(f"Unknown keys {unknown} in block 'mlflow'.")
            try:
                mlflow_config = MLFlowConfig(**mlflow_data)
            except TypeError as e:
                raise SweepConfigException(f"Invalid block 'mlflow': {e}") from e
        return cls(workers=int(data.get('workers', 1)), mlflow=mlflow_config, debug=bool(data.get('debug', False)),
                   **blocks)

    def to_dict(self) -> Dict[str, Any]:
        data = {name: asdict(getattr(self, name)) for name in _BLOCKS}
        data['workers'] = self.workers
        data['debug'] = self.debug
        if self.mlflow is not None:
            data['mlflow'] = {k: v for k, v in asdict(self.mlflow).items() if k != 'run_name_formatter'}
        for block in data.values():
            if isinstance(block, dict):
                for key, value in block.items():
                    if isinstance(value, tuple):
                        block[key] = list(value)
        return data

    def with_overrides(self, n_sites: Optional[int] = None, boundary: Optional[str] = None,
                       a_steps: Optional[int] = None, b_steps: Optional[int] = None, seed: Optional[int] = None,
                       workers: Optional[int] = None, directory: Optional[str] = None,
                       debug: Optional[bool] = None) -> 'SweepConfig':
        """
        Copy with command-line overrides applied; None leaves a value unchanged.
        """
        def pick(value, default):
            return default if value is None else value

        return replace(
            self,
            model=replace(self.model, n_sites=pick(n_sites, self.model.n_sites),
                          boundary=pick(boundary, self.model.boundary)),
            grid=replace(self.grid, a_steps=pick(a_steps, self.grid.a_steps), b_steps=pick(b_steps, self.grid.b_steps)),
            solver=replace(self.solver, seed=pick(seed, self.solver.seed)),
            output=replace(self.output, directory=pick(directory, self.output.directory)),
            workers=pick(workers, self.workers),
            debug=pick(debug, self.debug),
        )
