import numpy as np
import pytest

from openphase.core.base.lattice import Boundary, LatticeSpec
from openphase.core.base.liouville import build_imag_superop
from openphase.core.models import (build_corner, build_damped_rabi,
                                   build_single_qubit_mixer)
from openphase.core.spectral import SpectrumResult, full_spectrum


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exact diagonalization at N=3 or long sweeps")


@pytest.fixture(scope='module')
def pbc2() -> LatticeSpec:
    return LatticeSpec(2, Boundary.PERIODIC)


@pytest.fixture(scope='module')
def obc2() -> LatticeSpec:
    return LatticeSpec(2, Boundary.OPEN)


@pytest.fixture(scope='module')
def pbc4() -> LatticeSpec:
    return LatticeSpec(4, Boundary.PERIODIC)


@pytest.fixture(scope='module')
def corners(pbc2):
    return {label: build_corner(label, pbc2) for label in ('00', '01', '10', '11')}


@pytest.fixture(scope='module')
def mixer_spectrum() -> SpectrumResult:
    return full_spectrum(build_imag_superop(build_single_qubit_mixer()))


@pytest.fixture(scope='module')
def rabi():
    return build_damped_rabi(omega=1.0, rate=0.4)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(7)
