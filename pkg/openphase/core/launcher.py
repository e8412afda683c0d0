import time
from typing import Optional, Tuple

from openphase.core.base.config import DEFAULT_POLICY, SizePolicy
from openphase.core.base.generator import LindbladGenerator
from openphase.core.base.lattice import LatticeSpec, Species
from openphase.core.base.liouville import (DensityMatrix, Superoperator,
                                           build_imag_superop, vectorize)
from openphase.core.base.logger import DefaultLogger
from openphase.core.base.settings import (ModelConfig, ObservablesConfig,
                                          SolverConfig)
from openphase.core.observables import (CorrelationFit, ObservableException,
                                        correlation_series, fit_corr_length,
                                        string_order,
                                        strong_symmetry_indicator,
                                        supervector_entanglement,
                                        weak_symmetry_indicator)
from openphase.core.spectral import (DENSE_MAX_DIM, SpectrumException,
                                     SpectrumResult, degeneracy,
                                     extremal_spectrum, full_spectrum,
                                     ground_projection, steady_state)
from openphase.loaders.spectrum_loader import SpectrumLoader
from openphase.loaders.structs import PointReport
from openphase.loaders.superop_dump import SuperoperatorLoader


def _xi(fit: Optional[CorrelationFit]) -> Tuple[float, float, str]:
    if fit is None:
        return float('nan'), float('nan'), 'unavailable'
    if fit.no_signal:
        return float('nan'), fit.quality, 'no_signal'
    if fit.infinite:
        return float('inf'), fit.quality, 'infinite'
    return fit.xi, fit.quality, 'fit'


def point_name(a: float, b: float) -> str:
    return f"a{a:.6f}_b{b:.6f}"


class Launcher:
    """
    Runs single (a, b) points: builds the generator and its imaginary-time
    superoperator, solves the spectrum, extracts the steady state and
    evaluates the configured observables.
    """
    def __init__(self, model: ModelConfig, solver: Optional[SolverConfig] = None,
                 observables: Optional[ObservablesConfig] = None, policy: SizePolicy = DEFAULT_POLICY,
                 dumps_path: Optional[str] = None, dump_spectra: bool = False, dump_superops: bool = False,
                 debug: bool = False, base_artifacts_path: Optional[str] = None):
        self._model: ModelConfig = model
        self._solver: SolverConfig = solver if solver is not None else SolverConfig()
        self._observables: ObservablesConfig = observables if observables is not None else ObservablesConfig()
        self._policy: SizePolicy = policy
        self._dumps_path: Optional[str] = dumps_path
        self._dump_spectra: bool = dump_spectra
        self._dump_superops: bool = dump_superops
        self.debug: bool = debug
        self._base_artifacts_path: Optional[str] = base_artifacts_path
        self._logger: Optional[DefaultLogger] = None
        self._last_spectrum: Optional[SpectrumResult] = None

    @property
    def logger(self) -> DefaultLogger:
        """
        Run logger, created on first use.
        """
        if self._logger is None:
            self._logger = DefaultLogger(self._base_artifacts_path, class_name=self.__class__.__name__)
        return self._logger

    def close(self) -> None:
        """
        Release the run logger's file sink, if one was created.
        """
        if self._logger is not None:
            self._logger.close()
            self._logger = None

    def _debug(self, message: str) -> None:
        if self.debug:
            self.logger.debug(message)

    @property
    def last_spectrum(self) -> Optional[SpectrumResult]:
        return self._last_spectrum

    def generator(self, a: float, b: float) -> LindbladGenerator:
        return self._model.generator(a, b)

    def superoperator(self, a: float, b: float) -> Superoperator:
        return build_imag_superop(self.generator(a, b), self._policy)

    def spectrum(self, superop: Superoperator) -> SpectrumResult:
        method = self._solver.method
        if method == 'auto':
            method = 'dense' if superop.dim <= DENSE_MAX_DIM else 'iterative'
        if method == 'dense':
            return full_spectrum(superop)
        return extremal_spectrum(superop, k=self._solver.k, seed=self._solver.seed, tol=self._solver.tol,
                                 maxiter=self._solver.maxiter)

    def steady_state(self, spectrum: SpectrumResult) -> DensityMatrix:
        """
        The unique steady state, or for a degenerate ground level the one
        reached from the maximally mixed state.
        """
        steady = steady_state(spectrum, self._solver.degeneracy_tol)
        if not steady.degenerate:
            return steady.rho
        return ground_projection(spectrum, DensityMatrix.maximally_mixed(spectrum.n_qubits),
                                 self._solver.degeneracy_tol)

    def _observables_lattice(self, rho: DensityMatrix) -> Optional[LatticeSpec]:
        lattice = self._model.lattice()
        return lattice if lattice.n_qubits == rho.n_qubits else None

    def _fill_observables(self, report: PointReport, rho: DensityMatrix, spectrum: SpectrumResult) -> None:
        wants = self._observables.wants
        lattice = self._observables_lattice(rho)
        if lattice is None:
            self._debug("state does not live on the configured lattice; lattice observables skipped")
            return
        if wants('K_abs'):
            report.K_abs = strong_symmetry_indicator(rho, lattice.strong_symmetry())
        if wants('UU'):
            report.UU = weak_symmetry_indicator(rho, lattice.weak_symmetry())
        if wants('string_order') and lattice.longest_span() >= 1:
            report.string_order = string_order(rho, lattice)
        if (wants('EE') or wants('ES_degeneracy')) and lattice.n_sites >= 2:
            cut = self._observables.cut_site or lattice.n_sites // 2
            entanglement = supervector_entanglement(vectorize(rho), cut, lattice)
            report.EE = entanglement.entropy
            report.ES_degeneracy = float(entanglement.cut_degeneracy)
        for label, kind in (('xi1', 'linear'), ('xi2', 'renyi2')):
            if not wants(label):
                continue
            fit = None
            series = correlation_series(rho, lattice, self._observables.letter, Species.SIGMA, kind)
            if len(series.separations) >= 3:
                fit = fit_corr_length(series)
            value, quality, flag = _xi(fit)
            setattr(report, label, value)
            setattr(report, f'{label}_quality', quality)
            setattr(report, f'{label}_flag', flag)
        if wants('GSD'):
            if spectrum.complete and not lattice.periodic:
                report.GSD = float(degeneracy(spectrum, self._solver.degeneracy_tol))
            else:
                self._debug("GSD needs an open chain and the full spectrum; skipped")

    def _dump(self, a: float, b: float, superop: Superoperator, spectrum: SpectrumResult) -> None:
        if self._dumps_path is None:
            return
        name = point_name(a, b)
        if self._dump_spectra:
            SpectrumLoader(self._dumps_path, f"spectrum_{name}", spectrum.eigenvalues).run()
        if self._dump_superops:
            SuperoperatorLoader(self._dumps_path, f"superop_{name}", superop).run()

    def run_point(self, a: float, b: float) -> PointReport:
        """
        Evaluate one point of the phase diagram.

        Raises:
            SpectrumException: Solver failures and NoSteadyStateException,
                with the point prepended to the message.
            ObservableException: Invalid observable settings, likewise.
        """
        start = time.perf_counter()
        lattice = self._model.lattice()
        report = PointReport(a=float(a), b=float(b), N=lattice.n_sites, boundary=lattice.boundary.value)
        superop = self.superoperator(a, b)
        self._debug(f"point a={a:g} b={b:g}: superoperator dim={superop.dim}")
        try:
            spectrum = self.spectrum(superop)
            self._last_spectrum = spectrum
            report.gap = spectrum.gap
            report.ground_real = bool(spectrum.ground_is_real)
            self._dump(a, b, superop, spectrum)
            rho = self.steady_state(spectrum)
            self._fill_observables(report, rho, spectrum)
        except SpectrumException as e:
            raise type(e)(f"a={a:g} b={b:g} N={lattice.n_sites}: {e}", e.residuals, e.condition) from e
        except ObservableException as e:
            raise ObservableException(f"a={a:g} b={b:g} N={lattice.n_sites}: {e}") from e
        report.wall_ms = (time.perf_counter() - start) * 1e3
        self._debug(f"point a={a:g} b={b:g}: gap={report.gap:.10g} K_abs={report.K_abs:.10g} "
                    f"UU={report.UU:.10g} string_order={report.string_order:.10g} wall_ms={report.wall_ms:.1f}")
        return report

    def run_model_point(self) -> PointReport:
        """
        Run the point fixed by the model block.
        """
        return self.run_point(self._model.a, self._model.b)
