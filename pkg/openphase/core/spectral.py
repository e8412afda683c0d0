"""
Eigenanalysis of superoperators.

Spectra are sorted by ascending real part, ties broken by ascending imaginary
part so that conjugate partners are adjacent. Eigenvectors of real
eigenvalues are phase-fixed against the antiunitary ket↔bra symmetry
s(v) = P·conj(v) so that they devectorize to Hermitian matrices, and the
partner of a complex eigenvector is taken as its image under s.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np
import scipy.linalg as la
import scipy.sparse.linalg as spla
from loguru import logger
from scipy.spatial import cKDTree

from openphase.core.base.liouville import (DensityMatrix, Superoperator,
                                           SuperoperatorKind, SuperVector,
                                           devectorize, swap_permutation,
                                           vectorize)

DENSE_MAX_DIM: int = 4096
REAL_TOL: float = 1e-9
PAIR_TOL: float = 1e-8
DEGENERACY_TOL: float = 1e-7
CONDITION_MAX: float = 1e10
RESIDUAL_MAX: float = 1e-8
POSITIVITY_TOL: float = 1e-8


class SpectrumException(Exception):
    """
    Exception raised when a spectrum cannot be computed or used.

    Attributes:
        residuals (Optional[np.ndarray]): Residual norms of the eigenpairs, if known.
        condition (Optional[float]): Condition estimate of the eigenbasis, if known.
    """

    def __init__(self, message: str, residuals: Optional[np.ndarray] = None, condition: Optional[float] = None):
        super().__init__(message)
        self.residuals = residuals
        self.condition = condition


class NoSteadyStateException(SpectrumException):
    """
    Exception raised when the ground eigenvalue is complex or the ground mode is not a state.
    """


@dataclass
class SpectrumResult:
    """
    Sorted eigenpairs of a superoperator.

    Attributes:
        eigenvalues (np.ndarray): Complex eigenvalues sorted by (Re, Im).
        eigenvectors (np.ndarray): Matching right eigenvectors as columns, blocked ordering.
        n_qubits (int): System size.
        kind (SuperoperatorKind): Kind of the source superoperator.
        shift (float): Scalar shift recorded by the superoperator.
        spread (float): Spectral spread used for relative tolerances.
        hermitian (bool): Whether the source matrix was Hermitian.
        complete (bool): Whether all eigenpairs are present.
        partners (np.ndarray): Index of the conjugate partner of every eigenvalue (itself if real).
        defective (bool): Eigenbasis too ill-conditioned to be trusted.
        condition (float): Condition estimate of the eigenvector matrix.
        residuals (Optional[np.ndarray]): ‖S v - λ v‖ per pair when computed.
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    n_qubits: int
    kind: SuperoperatorKind
    shift: float
    spread: float
    hermitian: bool
    complete: bool
    partners: np.ndarray
    defective: bool = False
    condition: float = 1.0
    residuals: Optional[np.ndarray] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def ground_is_real(self) -> bool:
        return abs(self.eigenvalues[0].imag) <= REAL_TOL * max(self.spread, 1.0)

    @property
    def gap(self) -> float:
        """
        Re E₁ - Re E₀.
        """
        if len(self.eigenvalues) < 2:
            return float('nan')
        return float(self.eigenvalues[1].real - self.eigenvalues[0].real)

    @property
    def unshifted(self) -> np.ndarray:
        """
        Eigenvalues with the recorded scalar shift removed.
        """
        return self.eigenvalues - self.shift

    @property
    def recursion_time(self) -> float:
        gap = self.gap
        return float('inf') if gap <= 0 else 1.0 / gap

    def vector(self, i: int) -> SuperVector:
        return SuperVector(self.eigenvectors[:, i])

    def real_modes(self) -> Tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.partners == np.arange(len(self))))

    def conjugate_pairs(self) -> Tuple[Tuple[int, int], ...]:
        return tuple((int(i), int(j)) for i, j in enumerate(self.partners) if i < j)


def _sort(values: np.ndarray, vectors: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    order = np.lexsort((values.imag, np.round(values.real, 9)))
    return values[order], vectors[:, order]


def _s_map(vectors: np.ndarray, perm: np.ndarray) -> np.ndarray:
    return np.conj(vectors[perm])


def _fix_phase(vector: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """
    Rotate a vector so that it is invariant under s, if s maps it onto itself up to a phase.
    """
    overlap = np.vdot(vector, _s_map(vector, perm))
    if abs(overlap) < 0.5 * np.vdot(vector, vector).real:
        return vector
    return vector * np.exp(0.5j * np.angle(overlap))


def hermitian_basis(vectors: np.ndarray, n_qubits: int, tol: float = 1e-8) -> np.ndarray:
    """
    Orthonormal s-invariant basis of the span of `vectors`; each element
    devectorizes to a Hermitian matrix. The span must be closed under s.
    """
    perm = swap_permutation(n_qubits)
    images = _s_map(vectors, perm)
    candidates = np.hstack([vectors + images, 1j * (vectors - images)])
    gram = np.real(candidates.conj().T @ candidates)
    weights, rotation = la.eigh(0.5 * (gram + gram.T))
    keep = np.argsort(weights)[::-1][:vectors.shape[1]]
    keep = keep[weights[keep] > tol * max(weights.max(), 1.0)]
    return candidates @ (rotation[:, keep] / np.sqrt(weights[keep]))


def _pair_up(values: np.ndarray, spread: float, tol: float) -> np.ndarray:
    """
    Conjugate partner index of every eigenvalue.

    Raises:
        SpectrumException: If the spectrum is not closed under conjugation.
    """
    scale = max(spread, 1.0)
    points = np.column_stack([values.real, values.imag])
    distances, _ = cKDTree(points).query(np.column_stack([values.real, -values.imag]))
    worst = float(np.max(distances, initial=0.0))
    if worst > tol * scale:
        raise SpectrumException(f"Spectrum is not closed under conjugation (worst mismatch {worst:.3e}).")
    partners = np.arange(len(values))
    upper = np.flatnonzero(values.imag > REAL_TOL * scale)
    lower = list(np.flatnonzero(values.imag < -REAL_TOL * scale))
    for i in upper:
        if not lower:
            raise SpectrumException("Unbalanced conjugate pairs in the spectrum.")
        mismatch = [abs(values[j] - np.conj(values[i])) for j in lower]
        j = lower.pop(int(np.argmin(mismatch)))
        partners[i], partners[j] = j, i
    return partners


def _adapt(values: np.ndarray, vectors: np.ndarray, partners: np.ndarray, n_qubits: int,
           spread: float) -> np.ndarray:
    perm = swap_permutation(n_qubits)
    vectors = vectors.copy()
    scale = max(spread, 1.0)
    for i, j in enumerate(partners):
        if i == j:
            isolated = all(abs(values[i] - values[k]) > REAL_TOL * scale for k in (i - 1, i + 1)
                           if 0 <= k < len(values))
            if isolated:
                vectors[:, i] = _fix_phase(vectors[:, i], perm)
        elif i < j:
            vectors[:, j] = _s_map(vectors[:, i], perm)
    return vectors


def _spread(values: np.ndarray) -> float:
    return float(values.real.max() - values.real.min()) if len(values) else 0.0


def full_spectrum(superop: Superoperator, pair_tol: float = PAIR_TOL) -> SpectrumResult:
    """
    All 4ⁿ eigenpairs of a dense-sized superoperator.

    Hermitian matrices go through `eigh`, all others through `eig`; in the
    latter case the eigenbasis condition is estimated and a defective flag set
    when it exceeds 1e10.

    Raises:
        SpectrumException: If the matrix is too large or its spectrum is not closed under conjugation.
    """
    if superop.dim > DENSE_MAX_DIM:
        raise SpectrumException(f"Dimension {superop.dim} exceeds the dense limit {DENSE_MAX_DIM}; "
                                f"use extremal_spectrum.")
    matrix = superop.to_dense()
    hermitian = superop.is_hermitian(tol=1e-12 * max(1.0, float(np.max(np.abs(matrix), initial=0.0))))
    condition = 1.0
    if hermitian:
        if not np.any(matrix.imag):
            values, vectors = la.eigh(matrix.real)
        else:
            values, vectors = la.eigh(matrix)
        values = values.astype(complex)
        vectors = vectors.astype(complex)
    else:
        values, vectors = la.eig(matrix)
        condition = float(np.linalg.cond(vectors))
    values, vectors = _sort(values, vectors)
    spread = _spread(values)
    partners = _pair_up(values, spread, pair_tol)
    vectors = _adapt(values, vectors, partners, superop.n_qubits, spread)
    defective = condition > CONDITION_MAX
    if defective:
        logger.warning(f"Eigenbasis of '{superop.label}' is ill-conditioned (cond={condition:.3e}).")
    logger.debug(f"full spectrum of '{superop.label}': dim={superop.dim} hermitian={hermitian} "
                 f"gap={values[1].real - values[0].real if len(values) > 1 else float('nan'):.6g}")
    return SpectrumResult(
        eigenvalues=values,
        eigenvectors=vectors,
        n_qubits=superop.n_qubits,
        kind=superop.kind,
        shift=superop.shift,
        spread=spread,
        hermitian=hermitian,
        complete=True,
        partners=partners,
        defective=defective,
        condition=condition,
    )


def _one_norm(superop: Superoperator) -> float:
    if superop.is_dense:
        return float(np.linalg.norm(superop.matrix, 1))
    return float(spla.norm(superop.matrix, 1))


def _residuals(superop: Superoperator, values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    applied = superop.matrix @ vectors
    return np.linalg.norm(applied - vectors * values[None, :], axis=0)


def extremal_spectrum(superop: Superoperator, k: int = 6, seed: int = 0, tol: float = 1e-10,
                      maxiter: Optional[int] = None) -> SpectrumResult:
    """
    The k eigenpairs with smallest real parts from ARPACK, seeded with a
    deterministic start vector. Requests for (almost) the whole spectrum fall
    back to `full_spectrum`.

    Args:
        superop (Superoperator): Dense or sparse superoperator.
        k (int): Number of eigenpairs.
        seed (int): Seed of the start vector.
        tol (float): ARPACK relative tolerance.
        maxiter (Optional[int]): ARPACK iteration cap.

    Returns:
        SpectrumResult: Partial spectrum with residual norms.

    Raises:
        SpectrumException: For k < 1 or ARPACK non-convergence (with residual norms).
    """
    if k < 1:
        raise SpectrumException(f"Number of eigenpairs must be positive, got {k}.")
    if k >= superop.dim - 1:
        return full_spectrum(superop)
    matrix = superop.matrix
    is_real = not np.any(matrix.imag) if superop.is_dense else not np.any(matrix.imag.data)
    if is_real:
        matrix = matrix.real
    rng = np.random.default_rng(seed)
    start = rng.standard_normal(superop.dim)
    if not is_real:
        start = start + 1j * rng.standard_normal(superop.dim)
    hermitian = superop.is_hermitian()
    try:
        if hermitian:
            values, vectors = spla.eigsh(matrix, k=k, which='SA', v0=start, tol=tol, maxiter=maxiter)
        else:
            values, vectors = spla.eigs(matrix, k=k, which='SR', v0=start, tol=tol, maxiter=maxiter)
    except spla.ArpackNoConvergence as e:
        residuals = _residuals(superop, np.asarray(e.eigenvalues, dtype=complex),
                               np.asarray(e.eigenvectors, dtype=complex))
        raise SpectrumException(
            f"ARPACK did not converge for '{superop.label}' ({len(e.eigenvalues)} of {k} pairs).",
            residuals=residuals,
        ) from e
    values, vectors = _sort(np.asarray(values, dtype=complex), np.asarray(vectors, dtype=complex))
    spread = _one_norm(superop)
    perm = swap_permutation(superop.n_qubits)
    partners = np.arange(len(values))
    for i in range(len(values)):
        if abs(values[i].imag) <= REAL_TOL * max(spread, 1.0):
            vectors[:, i] = _fix_phase(vectors[:, i], perm)
    residuals = _residuals(superop, values, vectors)
    logger.debug(f"extremal spectrum of '{superop.label}': k={k} hermitian={hermitian} "
                 f"max residual={residuals.max():.3e}")
    return SpectrumResult(
        eigenvalues=values,
        eigenvectors=vectors,
        n_qubits=superop.n_qubits,
        kind=superop.kind,
        shift=superop.shift,
        spread=spread,
        hermitian=hermitian,
        complete=False,
        partners=partners,
        residuals=residuals,
    )


SpectrumLike = Union[Superoperator, SpectrumResult]


def _as_spectrum(source: SpectrumLike, k: int = 8) -> SpectrumResult:
    if isinstance(source, SpectrumResult):
        return source
    if source.dim <= DENSE_MAX_DIM:
        return full_spectrum(source)
    return extremal_spectrum(source, k=k)


def degeneracy(source: SpectrumLike, rel_tol: float = DEGENERACY_TOL) -> int:
    """
    Number of eigenvalues whose real part lies within rel_tol·spread of Re E₀.

    A partial spectrum only certifies a non-degenerate ground level followed
    by a computed higher level: Krylov solvers can miss members of a multiplet.

    Raises:
        SpectrumException: If a partial spectrum holds more than one ground
            eigenvalue or none above the ground level.
    """
    spectrum = _as_spectrum(source)
    real = spectrum.eigenvalues.real
    count = int(np.sum(real - real[0] <= rel_tol * max(spectrum.spread, 1.0)))
    if not spectrum.complete and (count > 1 or count == len(real)):
        raise SpectrumException(
            f"Partial spectrum ({len(real)} of {4 ** spectrum.n_qubits} pairs) shows {count} ground "
            f"eigenvalue(s); the ground multiplicity needs the full spectrum."
        )
    return count


@dataclass
class SteadyState:
    """
    Ground mode of an imaginary-time superoperator.

    Attributes:
        eigenvalue (complex): Ground eigenvalue E₀.
        states (List[DensityMatrix]): One density matrix, or a Hermitian basis
            of the degenerate ground multiplet.
        degenerate (bool): Whether the ground level is degenerate.
    """
    eigenvalue: complex
    states: List[DensityMatrix]
    degenerate: bool

    @property
    def rho(self) -> DensityMatrix:
        if self.degenerate:
            raise SpectrumException(f"Ground level is {len(self.states)}-fold degenerate; use `states`.")
        return self.states[0]

    @property
    def multiplicity(self) -> int:
        return len(self.states)


def _unique_state(vector: np.ndarray, n_qubits: int) -> DensityMatrix:
    matrix = devectorize(SuperVector(vector))
    trace = np.trace(matrix)
    if abs(trace) > 1e-10 * np.linalg.norm(vector):
        matrix = matrix * (np.conj(trace) / abs(trace))
    else:
        matrix = devectorize(SuperVector(_fix_phase(vector, swap_permutation(n_qubits))))
    matrix = 0.5 * (matrix + matrix.conj().T)
    trace = np.trace(matrix).real
    if abs(trace) <= 1e-12:
        raise NoSteadyStateException("Ground mode is traceless and cannot be normalized to a state.")
    matrix = matrix / trace
    min_eigenvalue = float(la.eigvalsh(matrix)[0])
    if min_eigenvalue < -POSITIVITY_TOL:
        raise NoSteadyStateException(f"Ground mode is not positive (min eigenvalue {min_eigenvalue:.3e}).")
    return DensityMatrix(matrix)


def steady_state(source: SpectrumLike, rel_tol: float = DEGENERACY_TOL) -> SteadyState:
    """
    Devectorized ground mode, phase-fixed, symmetrized, positivity-checked and
    normalized. A degenerate ground level is returned as a Hermitian basis of
    the multiplet (not normalized, not checked for positivity).

    Raises:
        NoSteadyStateException: If E₀ is complex or the ground mode is not positive.
        SpectrumException: If a partial spectrum cannot certify a unique ground mode.
    """
    spectrum = _as_spectrum(source)
    ground = spectrum.eigenvalues[0]
    if not spectrum.ground_is_real:
        raise NoSteadyStateException(f"Ground eigenvalue {ground:.6g} is not real.")
    multiplicity = degeneracy(spectrum, rel_tol)
    if multiplicity == 1:
        return SteadyState(ground, [_unique_state(spectrum.eigenvectors[:, 0], spectrum.n_qubits)], False)
    basis = hermitian_basis(spectrum.eigenvectors[:, :multiplicity], spectrum.n_qubits)
    states = []
    for column in basis.T:
        matrix = devectorize(SuperVector(column))
        states.append(DensityMatrix(0.5 * (matrix + matrix.conj().T), normalized=False))
    logger.debug(f"ground level is {multiplicity}-fold degenerate")
    return SteadyState(ground, states, True)


@dataclass
class EigenExpansion:
    """
    Coefficients of a state in the right eigenbasis.

    Attributes:
        coefficients (np.ndarray): One coefficient per eigenpair, same order as the spectrum.
        real_modes (Tuple[int, ...]): Indices with real eigenvalues (coefficients a_i).
        pairs (Tuple[Tuple[int, int], ...]): Conjugate mode pairs (coefficients b_j, b_j*).
        residual (float): Relative reconstruction residual.
        condition (float): Condition estimate of the eigenbasis.
    """
    coefficients: np.ndarray
    real_modes: Tuple[int, ...]
    pairs: Tuple[Tuple[int, int], ...]
    residual: float
    condition: float

    def pair_mismatch(self) -> float:
        if not self.pairs:
            return 0.0
        return max(abs(self.coefficients[j] - np.conj(self.coefficients[i])) for i, j in self.pairs)


def expand_in_eigenbasis(source: SpectrumLike, rho0: DensityMatrix) -> EigenExpansion:
    """
    Solve |ρ₀⟩⟩ = Σ c_i |v_i⟩⟩ over the full eigenbasis.

    Raises:
        SpectrumException: For partial or defective spectra, an eigenbasis with
            condition above 1e10 or a reconstruction residual above 1e-8.
    """
    spectrum = _as_spectrum(source)
    if not spectrum.complete:
        raise SpectrumException("Eigenbasis expansion needs the full spectrum.")
    vectors = spectrum.eigenvectors
    condition = spectrum.condition if not spectrum.hermitian else 1.0
    if spectrum.defective or condition > CONDITION_MAX:
        raise SpectrumException(f"Eigenbasis is ill-conditioned (cond={condition:.3e}).", condition=condition)
    target = vectorize(rho0).data
    if spectrum.hermitian:
        coefficients = vectors.conj().T @ target
    else:
        coefficients = la.solve(vectors, target)
    residual = float(np.linalg.norm(vectors @ coefficients - target) / np.linalg.norm(target))
    if residual > RESIDUAL_MAX:
        raise SpectrumException(f"Reconstruction residual {residual:.3e} exceeds {RESIDUAL_MAX}.",
                                condition=condition)
    return EigenExpansion(coefficients, spectrum.real_modes(), spectrum.conjugate_pairs(), residual, condition)


def liouville_gap(source: SpectrumLike) -> float:
    """
    Real-time gap -Re λ₁, with eigenvalues ordered by descending real part and λ₀ = 0.

    Raises:
        SpectrumException: If the source is not a real-time superoperator.
    """
    spectrum = _as_spectrum(source)
    if spectrum.kind is not SuperoperatorKind.REAL_TIME:
        raise SpectrumException("The Liouville gap is defined for real-time superoperators.")
    if not spectrum.complete:
        raise SpectrumException("The Liouville gap needs the full spectrum.")
    real = np.sort(spectrum.eigenvalues.real)[::-1]
    return float(-real[1])


def ground_projection(source: SpectrumLike, rho0: DensityMatrix, rel_tol: float = DEGENERACY_TOL) -> DensityMatrix:
    """
    Long imaginary-time limit of ρ₀: its component in the ground level,
    normalized. Selects one state of a degenerate ground multiplet.

    Raises:
        SpectrumException: For a partial non-Hermitian spectrum.
        NoSteadyStateException: If E₀ is complex or ρ₀ has no ground component.
    """
    spectrum = _as_spectrum(source)
    if not spectrum.ground_is_real:
        raise NoSteadyStateException(f"Ground eigenvalue {spectrum.eigenvalues[0]:.6g} is not real.")
    multiplicity = degeneracy(spectrum, rel_tol)
    ground = spectrum.eigenvectors[:, :multiplicity]
    if spectrum.hermitian:
        coefficients = ground.conj().T @ vectorize(rho0).data
    elif spectrum.complete:
        coefficients = expand_in_eigenbasis(spectrum, rho0).coefficients[:multiplicity]
    else:
        raise SpectrumException("Ground projection of a non-Hermitian superoperator needs the full spectrum.")
    matrix = devectorize(SuperVector(ground @ coefficients))
    matrix = 0.5 * (matrix + matrix.conj().T)
    trace = np.trace(matrix).real
    if abs(trace) <= 1e-12:
        raise NoSteadyStateException("Initial state has no weight in the ground level.")
    return DensityMatrix(matrix / trace)
