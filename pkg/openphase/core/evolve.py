from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import scipy.linalg as la
import scipy.sparse.linalg as spla
from loguru import logger
from scipy.signal import find_peaks

from openphase.core.base.config import DEFAULT_POLICY, SizePolicy
from openphase.core.base.generator import LindbladGenerator
from openphase.core.base.liouville import (DensityMatrix, Superoperator,
                                           SuperoperatorException,
                                           devectorize, vectorize)
from openphase.core.base.logger import BaseLogger
from openphase.core.base.pauli import realize
from openphase.core.spectral import (DENSE_MAX_DIM, POSITIVITY_TOL,
                                     NoSteadyStateException)

MAX_STEP_NORM: float = 50.0
OSCILLATION_WINDOW: int = 200

SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)
ANCILLA_GROUND = np.array([[1, 0], [0, 0]], dtype=complex)


class PropagationException(Exception):
    """
    Exception raised for invalid propagation parameters.
    """


class PropagationTimeoutException(PropagationException):
    """
    Exception raised when propagation does not converge within the step budget.
    """


@dataclass
class PropagationResult:
    """
    Outcome of an imaginary-time propagation.

    Attributes:
        rho (DensityMatrix): Final normalized state.
        steps (int): Steps taken.
        converged (bool): Whether the distance criterion was met.
        traces (List[complex]): Trace before normalization, per step.
        distances (List[float]): Trace distance between successive iterates.
    """
    rho: DensityMatrix
    steps: int
    converged: bool
    traces: List[complex] = field(default_factory=list, repr=False)
    distances: List[float] = field(default_factory=list, repr=False)


def _trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    return 0.5 * float(np.sum(la.svdvals(a - b)))


def _is_oscillating(distances: List[float]) -> bool:
    window = np.asarray(distances[-OSCILLATION_WINDOW:])
    if len(window) < 3:
        return False
    peaks, _ = find_peaks(window)
    return len(peaks) >= 2 and window[-1] > 0.1 * window[0]


def propagate_imag(superop: Superoperator, rho0: DensityMatrix, d_tau: float, max_steps: int = 100_000,
                   tol: float = 1e-10, trajectory: Optional[BaseLogger] = None) -> PropagationResult:
    """
    Iterate |ρ⟩⟩ ← e^{-𝓛^I dτ}|ρ⟩⟩ with trace renormalization until successive
    iterates are closer than `tol` in trace distance.

    The step is the exact dense exponential up to dimension 4096 and
    `expm_multiply` beyond.

    Args:
        superop (Superoperator): Imaginary-time superoperator.
        rho0 (DensityMatrix): Initial state.
        d_tau (float): Step size.
        max_steps (int): Step budget.
        tol (float): Convergence threshold on the trace distance increment.
        trajectory (Optional[BaseLogger]): Receives one line per step.

    Returns:
        PropagationResult: Final state and history.

    Raises:
        PropagationException: If d_tau·‖S‖₁ is not in (0, 50] or the trace vanishes.
        NoSteadyStateException: If the iterates keep oscillating or the
            converged iterate is not positive within 1e-8.
        PropagationTimeoutException: If max_steps is exceeded without oscillation.
    """
    if superop.dim != rho0.dim ** 2:
        raise PropagationException(f"State dimension {rho0.dim} does not match superoperator dimension {superop.dim}.")
    norm = float(np.linalg.norm(superop.matrix, 1)) if superop.is_dense else float(spla.norm(superop.matrix, 1))
    if d_tau <= 0 or d_tau * norm > MAX_STEP_NORM:
        raise PropagationException(f"Step d_tau={d_tau} with ‖S‖₁={norm:.4g} is outside (0, {MAX_STEP_NORM}].")
    if superop.dim <= DENSE_MAX_DIM:
        propagator = la.expm(-d_tau * superop.to_dense())

        def step(vector: np.ndarray) -> np.ndarray:
            return propagator @ vector
    else:
        generator = (-d_tau * superop.matrix).tocsc()

        def step(vector: np.ndarray) -> np.ndarray:
            return spla.expm_multiply(generator, vector)

    diagonal = np.arange(rho0.dim) * (rho0.dim + 1)
    current = vectorize(rho0).data / rho0.trace()
    traces: List[complex] = []
    distances: List[float] = []
    for k in range(1, max_steps + 1):
        advanced = step(current)
        trace = complex(np.sum(advanced[diagonal]))
        if abs(trace) < 1e-300:
            raise PropagationException(f"Trace vanished at step {k}.")
        advanced = advanced / trace
        distance = _trace_distance(devectorize(advanced), devectorize(current))
        traces.append(trace)
        distances.append(distance)
        if trajectory is not None:
            trajectory.debug(f"step={k} | dist={distance:.6e} | trace={trace.real:.12g}")
        current = advanced
        if distance < tol:
            matrix = devectorize(current)
            try:
                rho = DensityMatrix(0.5 * (matrix + matrix.conj().T)).validate(tol=POSITIVITY_TOL)
            except SuperoperatorException as e:
                raise NoSteadyStateException(f"Converged iterate after {k} steps is not a state: {e}") from e
            logger.debug(f"imaginary-time propagation converged in {k} steps")
            return PropagationResult(rho, k, True, traces, distances)
    if _is_oscillating(distances):
        raise NoSteadyStateException(
            f"Imaginary-time iterates oscillate after {max_steps} steps "
            f"(last distances {distances[-1]:.3e}, {len(distances)} recorded); the ground eigenvalue is complex."
        )
    raise PropagationTimeoutException(f"No convergence within {max_steps} steps (last distance {distances[-1]:.3e}).")


def _ancilla_generators(gen: LindbladGenerator, d_tau: float, policy: SizePolicy):
    """
    H ⊗ I·dτ/m + (L ⊗ σ⁺ + L† ⊗ σ⁻)√dτ per jump.
    """
    hamiltonian = realize(gen.hamiltonian, policy, sparse=False)
    share = np.kron(hamiltonian, np.eye(2)) * d_tau / gen.n_jumps
    for jump in gen.jumps:
        matrix = realize(jump, policy, sparse=False)
        coupling = np.kron(matrix, SIGMA_PLUS) + np.kron(matrix.conj().T, SIGMA_MINUS)
        yield share + np.sqrt(d_tau) * coupling


def _collide(rho: np.ndarray, unitary_like: np.ndarray) -> np.ndarray:
    dim = rho.shape[0]
    joint = unitary_like @ np.kron(rho, ANCILLA_GROUND) @ unitary_like.conj().T
    return np.einsum('iaja->ij', joint.reshape(dim, 2, dim, 2))


def _check_step(d_tau: float) -> None:
    if not d_tau > 0:
        raise PropagationException(f"Step must be positive, got {d_tau}.")


def collision_step_imag(gen: LindbladGenerator, rho: DensityMatrix, d_tau: float,
                        policy: SizePolicy = DEFAULT_POLICY) -> DensityMatrix:
    """
    One imaginary-time collision step: per jump, couple a fresh ancilla in
    |0⟩, apply M = exp(-G) on both sides and trace the ancilla out. The
    output is not normalized and differs from ρ - 𝓛^I(ρ)dτ by O(dτ²).
    """
    _check_step(d_tau)
    matrix = rho.matrix
    if gen.n_jumps == 0:
        propagator = la.expm(-d_tau * realize(gen.hamiltonian, policy, sparse=False))
        return DensityMatrix(propagator @ matrix @ propagator.conj().T, normalized=False)
    for generator in _ancilla_generators(gen, d_tau, policy):
        matrix = _collide(matrix, la.expm(-generator))
    return DensityMatrix(matrix, normalized=False)


def collision_step_real(gen: LindbladGenerator, rho: DensityMatrix, d_t: float,
                        policy: SizePolicy = DEFAULT_POLICY) -> DensityMatrix:
    """
    One real-time collision step with U = exp(-iG); trace preserving and completely positive.
    """
    _check_step(d_t)
    matrix = rho.matrix
    if gen.n_jumps == 0:
        propagator = la.expm(-1j * d_t * realize(gen.hamiltonian, policy, sparse=False))
        return DensityMatrix(propagator @ matrix @ propagator.conj().T, normalized=rho.normalized)
    for generator in _ancilla_generators(gen, d_t, policy):
        matrix = _collide(matrix, la.expm(-1j * generator))
    return DensityMatrix(matrix, normalized=rho.normalized)
