import os

import numpy as np
import pytest

from openphase.core.base.settings import (ModelConfig, ObservablesConfig,
                                          SolverConfig)
from openphase.core.launcher import Launcher, point_name
from openphase.core.observables import ObservableException
from openphase.loaders.spectrum_loader import SpectrumLoader
from openphase.loaders.superop_dump import SuperoperatorLoader

ALL_OBSERVABLES = ObservablesConfig(labels=('K_abs', 'UU', 'string_order', 'EE', 'ES_degeneracy', 'GSD', 'xi1', 'xi2'))


def launcher(n_sites: int = 2, boundary: str = 'periodic', **kwargs) -> Launcher:
    model = ModelConfig(kind='interpolated', n_sites=n_sites, boundary=boundary)
    return Launcher(model, observables=kwargs.pop('observables', ALL_OBSERVABLES), **kwargs)


def test_decohered_cluster_point():
    report = launcher().run_point(1.0, 1.0)
    assert report.K_abs == pytest.approx(1.0)
    assert report.UU == pytest.approx(1.0)
    assert report.string_order == pytest.approx(1.0)
    assert report.gap > 0
    assert report.ground_real
    assert not report.failed
    assert report.wall_ms > 0


@pytest.mark.slow
def test_decohered_cluster_point_three_sites():
    report = launcher(n_sites=3).run_point(1.0, 1.0)
    assert report.K_abs == pytest.approx(1.0)
    assert report.UU == pytest.approx(1.0)
    assert report.string_order == pytest.approx(1.0)


def test_trivial_point():
    report = launcher().run_point(0.0, 0.0)
    assert report.EE == pytest.approx(0.0, abs=1e-9)
    assert report.ES_degeneracy == 1.0
    assert report.K_abs == pytest.approx(1.0)


def test_short_chain_has_no_correlation_fit():
    report = launcher().run_point(0.5, 0.5)
    assert report.xi1_flag == 'unavailable'
    assert report.xi2_flag == 'unavailable'
    assert np.isnan(report.xi1)


def test_ground_degeneracy_on_open_chain():
    report = launcher(boundary='open').run_point(0.0, 1.0)
    assert report.GSD == 16.0
    assert report.boundary == 'open'


def test_ground_degeneracy_skipped_on_ring():
    assert np.isnan(launcher().run_point(0.0, 1.0).GSD)


def test_observables_can_be_skipped():
    report = launcher(observables=ObservablesConfig(labels=('K_abs',))).run_point(0.3, 0.3)
    assert np.isfinite(report.K_abs)
    assert np.isnan(report.UU)
    assert np.isnan(report.EE)


def test_dumps(tmp_path):
    runner = launcher(dumps_path=str(tmp_path), dump_spectra=True, dump_superops=True)
    runner.run_point(0.5, 0.5)
    name = point_name(0.5, 0.5)
    assert os.path.exists(f'{tmp_path}/spectrum_{name}.txt')
    eigenvalues = SpectrumLoader(str(tmp_path), f'spectrum_{name}').read()
    np.testing.assert_array_equal(eigenvalues, runner.last_spectrum.eigenvalues)
    matrix = SuperoperatorLoader(str(tmp_path), f'superop_{name}').read()
    np.testing.assert_array_equal(matrix.toarray(), runner.superoperator(0.5, 0.5).to_dense())


def test_observable_error_names_the_point():
    runner = launcher(observables=ObservablesConfig(labels=('EE',), cut_site=5))
    with pytest.raises(ObservableException) as e:
        runner.run_point(0.5, 0.5)
    assert str(e.value).startswith("a=0.5 b=0.5 N=2: ")


def test_iterative_solver_matches_dense():
    dense = launcher().run_point(0.4, 0.7)
    iterative = launcher(solver=SolverConfig(method='iterative', k=4, seed=1)).run_point(0.4, 0.7)
    assert iterative.gap == pytest.approx(dense.gap, abs=1e-8)
    assert iterative.K_abs == pytest.approx(dense.K_abs, abs=1e-6)


def test_gibbs_model_point():
    model = ModelConfig(kind='gibbs', n_sites=2, beta_T=0.5)
    report = Launcher(model, observables=ALL_OBSERVABLES).run_model_point()
    assert report.gap > 0
    assert report.ground_real
    assert 0.0 <= report.K_abs <= 1.0 + 1e-12


@pytest.mark.slow
def test_weak_symmetry_broken_in_between():
    assert launcher(n_sites=3).run_point(1.0, 0.5).UU < 0.99


def test_close_releases_the_run_log(tmp_path):
    runner = launcher(debug=True, base_artifacts_path=str(tmp_path / 'run'))
    runner.run_point(0.0, 0.0)
    run_logger = runner.logger
    runner.close()
    run_logger.debug("after close")
    runner.close()
    with open(f'{run_logger.logs_path}/logs.log', encoding='utf-8') as f:
        text = f.read()
    assert "point a=0 b=0" in text
    assert "after close" not in text
