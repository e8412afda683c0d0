import numpy as np
import pytest

from openphase.core.base.liouville import (DensityMatrix, Superoperator,
                                           SuperoperatorKind,
                                           apply_imag_generator,
                                           apply_real_generator,
                                           build_imag_superop)
from openphase.core.base.logger import DefaultLogger
from openphase.core.evolve import (PropagationException,
                                   PropagationTimeoutException,
                                   collision_step_imag, collision_step_real,
                                   propagate_imag)
from openphase.core.models import build_corner, build_single_qubit_mixer
from openphase.core.spectral import (NoSteadyStateException, full_spectrum,
                                     steady_state)

GROUND = DensityMatrix(np.diag([1.0, 0.0]).astype(complex))


def test_converges_to_mixer_fixed_point():
    superop = build_imag_superop(build_single_qubit_mixer())
    result = propagate_imag(superop, GROUND, d_tau=0.1)
    assert result.converged
    np.testing.assert_allclose(result.rho.matrix, np.eye(2) / 2, atol=1e-9)
    assert result.distances[-1] < 1e-10
    assert len(result.traces) == result.steps


def test_matches_spectral_steady_state(pbc2):
    superop = build_imag_superop(build_corner('11', pbc2))
    result = propagate_imag(superop, DensityMatrix.maximally_mixed(pbc2.n_qubits), d_tau=0.05)
    expected = steady_state(full_spectrum(superop)).rho
    assert result.rho.trace_distance(expected) < 1e-8


def test_invalid_steps():
    superop = build_imag_superop(build_single_qubit_mixer())
    with pytest.raises(PropagationException):
        propagate_imag(superop, GROUND, d_tau=0.0)
    with pytest.raises(PropagationException):
        propagate_imag(superop, GROUND, d_tau=100.0)
    with pytest.raises(PropagationException):
        propagate_imag(superop, DensityMatrix.maximally_mixed(2), d_tau=0.1)


def test_timeout():
    superop = build_imag_superop(build_single_qubit_mixer())
    with pytest.raises(PropagationTimeoutException):
        propagate_imag(superop, GROUND, d_tau=0.1, max_steps=3)


def test_trajectory_log(tmp_path):
    trajectory = DefaultLogger(str(tmp_path / 'run'), class_name='propagation')
    superop = build_imag_superop(build_single_qubit_mixer())
    propagate_imag(superop, GROUND, d_tau=0.1, max_steps=1000, trajectory=trajectory)
    trajectory.close()
    with open(f'{trajectory.logs_path}/logs.log', encoding='utf-8') as f:
        lines = f.read().splitlines()
    assert "| step=1 | dist=" in lines[0]
    assert "| trace=" in lines[0]


def _imag_error(gen, rho: DensityMatrix, d_tau: float) -> float:
    expected = rho.matrix - d_tau * apply_imag_generator(gen, rho.matrix)
    return float(np.linalg.norm(collision_step_imag(gen, rho, d_tau).matrix - expected))


def test_collision_imag_is_first_order(rabi):
    coarse = _imag_error(rabi, GROUND, 2e-3)
    fine = _imag_error(rabi, GROUND, 1e-3)
    assert fine < 1e-4
    assert 3.0 < coarse / fine < 5.0


def test_collision_imag_without_jumps(corners):
    gen = corners['00']
    rho = DensityMatrix.maximally_mixed(gen.n_qubits)
    stepped = collision_step_imag(gen, rho, 1e-3)
    assert not stepped.normalized
    expected = rho.matrix - 1e-3 * apply_imag_generator(gen, rho.matrix)
    np.testing.assert_allclose(stepped.matrix, expected, atol=1e-5)


def test_collision_real_preserves_trace(rabi):
    stepped = collision_step_real(rabi, GROUND, 1e-3)
    assert stepped.trace() == pytest.approx(1.0, abs=1e-12)
    expected = GROUND.matrix + 1e-3 * apply_real_generator(rabi, GROUND.matrix)
    np.testing.assert_allclose(stepped.matrix, expected, atol=1e-5)
    stepped.validate()


def test_collision_rejects_bad_step(rabi):
    with pytest.raises(PropagationException):
        collision_step_imag(rabi, GROUND, -1.0)


def test_collision_real_is_first_order(rabi):
    def error(d_t: float) -> float:
        expected = GROUND.matrix + d_t * apply_real_generator(rabi, GROUND.matrix)
        return float(np.linalg.norm(collision_step_real(rabi, GROUND, d_t).matrix - expected))

    steps = np.array([1e-2, 1e-3, 1e-4])
    slope = np.polyfit(np.log(steps), np.log([error(d_t) for d_t in steps]), 1)[0]
    assert slope >= 1.4


def test_steady_start_converges_immediately(corners):
    superop = build_imag_superop(corners['11'])
    steady = steady_state(full_spectrum(superop)).rho
    result = propagate_imag(superop, steady, d_tau=0.05)
    assert result.converged
    assert result.steps <= 2


def test_closed_chain_relaxes_at_the_gap(corners, rng):
    d_tau = 0.05
    superop = build_imag_superop(corners['01'])
    spectrum = full_spectrum(superop)
    dim = 1 << superop.n_qubits
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho0 = DensityMatrix(a @ a.conj().T / np.trace(a @ a.conj().T))
    result = propagate_imag(superop, rho0, d_tau=d_tau)
    # steps per e-fold of the increment
    efold_steps = -1.0 / np.log(result.distances[-1] / result.distances[-2])
    assert efold_steps == pytest.approx(spectrum.recursion_time / d_tau, rel=1e-2)
    assert result.rho.trace_distance(steady_state(spectrum).rho) < 1e-8


def test_non_positive_fixed_point_is_rejected():
    # projector complement of |diag(1.5, -0.5)⟩⟩: that vector is the only undamped mode
    fixed = np.array([1.5, 0.0, 0.0, -0.5])
    matrix = np.eye(4) - np.outer(fixed, fixed) / (fixed @ fixed)
    superop = Superoperator(1, SuperoperatorKind.IMAG_TIME, matrix.astype(complex), label='indefinite')
    with pytest.raises(NoSteadyStateException):
        propagate_imag(superop, DensityMatrix.maximally_mixed(1), d_tau=0.5)
