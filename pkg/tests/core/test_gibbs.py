import numpy as np
import pytest

from openphase.core.base.lattice import LatticeSpec
from openphase.core.base.liouville import build_imag_superop
from openphase.core.models import (GibbsSpec, InvalidStabilizerException,
                                   ModelException, build_stabilizer_gibbs,
                                   cluster_gibbs_spec, gibbs_state,
                                   term_generator)
from openphase.core.spectral import full_spectrum, steady_state


@pytest.fixture(scope='module', params=[0.3, 0.5, 1.0])
def cluster_spec(request) -> GibbsSpec:
    return cluster_gibbs_spec(LatticeSpec(2), beta_T=request.param)


def test_gamma():
    spec = GibbsSpec.from_words(['ZZ', 'XX'], ['XI', 'ZI'], 0.3)
    assert spec.gamma == pytest.approx(2.0 / np.sinh(0.6))
    assert spec.n_terms == 2
    assert spec.n_qubits == 2


def test_anticommuting_stabilizers():
    with pytest.raises(InvalidStabilizerException) as e:
        GibbsSpec.from_words(['ZI', 'XI'], ['XI', 'ZI'], 1.0)
    assert e.value.pair == (0, 1)


def test_dependent_stabilizer():
    with pytest.raises(InvalidStabilizerException) as e:
        GibbsSpec.from_words(['ZZ', 'ZI', 'IZ'], ['XI', 'XI', 'IX'], 1.0)
    assert e.value.pair == (2, 2)


def test_excitation_structure():
    with pytest.raises(InvalidStabilizerException) as e:
        GibbsSpec.from_words(['ZZ', 'XX'], ['XI', 'XI'], 1.0)
    assert e.value.pair == (1, 0)


def test_invalid_temperature_and_counts():
    with pytest.raises(ModelException):
        GibbsSpec.from_words(['ZZ'], ['XI'], 0.0)
    with pytest.raises(ModelException):
        GibbsSpec.from_words(['ZZ', 'XX'], ['XI'], 1.0)


def test_cluster_spec_needs_periodic_chain():
    with pytest.raises(ModelException):
        cluster_gibbs_spec(LatticeSpec(2, 'open'), 1.0)


def test_term_spectrum(cluster_spec):
    spectrum = full_spectrum(build_imag_superop(term_generator(cluster_spec, 0)))
    gamma = cluster_spec.gamma
    root = np.sqrt(gamma ** 2 + 4)
    levels = np.unique(np.round(spectrum.unshifted.real, 9))
    np.testing.assert_allclose(levels, [-root, -gamma, gamma, root], atol=1e-8)


def test_ground_eigenvalue(cluster_spec):
    spectrum = full_spectrum(build_imag_superop(build_stabilizer_gibbs(cluster_spec)))
    expected = -cluster_spec.n_terms * np.sqrt(cluster_spec.gamma ** 2 + 4)
    assert spectrum.unshifted[0].real == pytest.approx(expected, abs=1e-9)
    assert spectrum.shift == pytest.approx(-cluster_spec.n_terms * cluster_spec.gamma)


def test_fixed_point_is_gibbs_state(cluster_spec):
    spectrum = full_spectrum(build_imag_superop(build_stabilizer_gibbs(cluster_spec)))
    rho = steady_state(spectrum).rho
    expected = gibbs_state(cluster_spec.stabilizers, cluster_spec.beta_T)
    np.testing.assert_allclose(rho.matrix, expected.matrix, atol=1e-9)


def test_single_term_gibbs_state():
    spec = GibbsSpec.from_words(['Z'], ['X'], 0.8)
    rho = steady_state(full_spectrum(build_imag_superop(build_stabilizer_gibbs(spec)))).rho
    np.testing.assert_allclose(np.diag(rho.matrix).real, np.array([np.exp(-0.8), np.exp(0.8)]) / (2 * np.cosh(0.8)),
                               atol=1e-12)


def test_gibbs_state_limits():
    hot = gibbs_state(['ZZ', 'XX'], 0.0)
    np.testing.assert_allclose(hot.matrix, np.eye(4) / 4, atol=1e-14)
    cold = gibbs_state(['ZZ', 'XX'], 30.0)
    assert cold.purity() == pytest.approx(1.0)
