"""
Vectorization conventions and superoperator construction.

Density matrices are vectorized row-major, |ρ⟩⟩ = Σ ρ_ij |i⟩⊗|j⟩, so the
ket qubits come first and the bra qubits second (blocked ordering) and
A ρ B† ↦ (A ⊗ B*)|ρ⟩⟩. The interleaved ordering (k₀, b₀, k₁, b₁, …) groups
the ket and bra copy of every qubit and is used for spatial cuts.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from loguru import logger

from openphase.core.base.config import DEFAULT_POLICY, SizePolicy
from openphase.core.base.generator import LindbladGenerator
from openphase.core.base.pauli import OperatorSum, PauliString, realize

Matrix = Union[np.ndarray, sp.spmatrix]


class SuperoperatorException(Exception):
    """
    Exception raised for malformed supervectors, density matrices and superoperators.
    """


class Ordering(Enum):
    BLOCKED = 'blocked'
    INTERLEAVED = 'interleaved'


class SuperoperatorKind(Enum):
    REAL_TIME = 'real_time'
    IMAG_TIME = 'imag_time'


def _qubits_of_dim(dim: int, base: int) -> int:
    n_qubits = 0
    size = 1
    while size < dim:
        size *= base
        n_qubits += 1
    if size != dim or dim < base:
        raise SuperoperatorException(f"Length {dim} is not a positive power of {base}.")
    return n_qubits


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    Density matrix ρ on n qubits.

    Attributes:
        matrix (np.ndarray): 2ⁿ×2ⁿ complex matrix.
        normalized (bool): Whether unit trace is part of the contract.
    """
    matrix: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise SuperoperatorException(f"Density matrix must be square, got shape {matrix.shape}.")
        _qubits_of_dim(matrix.shape[0], 2)
        object.__setattr__(self, 'matrix', matrix)

    @classmethod
    def maximally_mixed(cls, n_qubits: int) -> 'DensityMatrix':
        dim = 1 << n_qubits
        return cls(np.eye(dim, dtype=complex) / dim)

    @classmethod
    def from_pure(cls, psi: np.ndarray) -> 'DensityMatrix':
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @property
    def n_qubits(self) -> int:
        return _qubits_of_dim(self.matrix.shape[0], 2)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix, self.matrix)))

    def normalize(self) -> 'DensityMatrix':
        trace = self.trace()
        if abs(trace) == 0:
            raise SuperoperatorException("Cannot normalize a density matrix with zero trace.")
        return DensityMatrix(self.matrix / trace, normalized=True)

    def trace_distance(self, other: 'DensityMatrix') -> float:
        """
        ½‖ρ - σ‖₁.
        """
        if other.dim != self.dim:
            raise SuperoperatorException(f"Dimension mismatch: {self.dim} vs {other.dim}.")
        return 0.5 * float(np.sum(la.svdvals(self.matrix - other.matrix)))

    def validate(self, tol: float = 1e-10) -> 'DensityMatrix':
        """
        Check Hermiticity, positivity and (if normalized) unit trace.

        Raises:
            SuperoperatorException: If any check fails.
        """
        hermitian_defect = np.max(np.abs(self.matrix - self.matrix.conj().T))
        if hermitian_defect > tol:
            raise SuperoperatorException(f"Density matrix is not Hermitian (defect {hermitian_defect:.3e}).")
        min_eigenvalue = float(la.eigvalsh(self.matrix)[0])
        if min_eigenvalue < -tol:
            raise SuperoperatorException(f"Density matrix is not positive (min eigenvalue {min_eigenvalue:.3e}).")
        if self.normalized and abs(self.trace() - 1) > tol:
            raise SuperoperatorException(f"Density matrix trace is {self.trace():.12g}, expected 1.")
        return self


@dataclass(frozen=True, eq=False)
class SuperVector:
    """
    Supervector |ρ⟩⟩ of length 4ⁿ with its qubit ordering tag.
    """
    data: np.ndarray
    ordering: Ordering = Ordering.BLOCKED

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex).reshape(-1)
        _qubits_of_dim(data.shape[0], 4)
        object.__setattr__(self, 'data', data)

    @property
    def n_qubits(self) -> int:
        return _qubits_of_dim(self.data.shape[0], 4)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.data))


@dataclass(frozen=True, eq=False)
class Superoperator:
    """
    4ⁿ×4ⁿ generator acting on supervectors in blocked ordering.

    Attributes:
        n_qubits (int): System size n.
        kind (SuperoperatorKind): Real-time 𝓛 or imaginary-time 𝓛^I.
        matrix (np.ndarray | sp.csr_matrix): The matrix.
        shift (float): Scalar part contributed by -½ΣL†L on both sides.
        label (str): Name of the generator it was built from.
    """
    n_qubits: int
    kind: SuperoperatorKind
    matrix: Matrix
    shift: float = 0.0
    label: str = ''

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_dense(self) -> bool:
        return isinstance(self.matrix, np.ndarray)

    def to_dense(self) -> np.ndarray:
        return self.matrix if self.is_dense else self.matrix.toarray()

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        difference = self.matrix - self.matrix.conj().T
        if self.is_dense:
            return float(np.max(np.abs(difference), initial=0.0)) <= tol
        return float(spla.norm(difference, ord=1)) <= tol

    def apply(self, vector: SuperVector) -> SuperVector:
        vector = reorder(vector, Ordering.BLOCKED)
        return SuperVector(self.matrix @ vector.data)


def vectorize(rho: Union[DensityMatrix, np.ndarray]) -> SuperVector:
    """
    Row-major vectorization in blocked ordering.
    """
    matrix = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    return SuperVector(matrix.reshape(-1), Ordering.BLOCKED)


def devectorize(vector: Union[SuperVector, np.ndarray]) -> np.ndarray:
    """
    Inverse of `vectorize`; interleaved vectors are reordered first.

    Raises:
        SuperoperatorException: If the length is not a power of 4.
    """
    if not isinstance(vector, SuperVector):
        vector = SuperVector(vector)
    vector = reorder(vector, Ordering.BLOCKED)
    dim = 1 << vector.n_qubits
    return vector.data.reshape(dim, dim)


def _interleave_axes(n_qubits: int) -> list:
    axes = []
    for q in range(n_qubits):
        axes.extend([q, n_qubits + q])
    return axes


def reorder(vector: SuperVector, target: Ordering) -> SuperVector:
    """
    Permute between blocked (k₀…k_{n-1}, b₀…b_{n-1}) and interleaved
    (k₀, b₀, k₁, b₁, …) qubit orderings.
    """
    if vector.ordering is target:
        return vector
    n_qubits = vector.n_qubits
    tensor = vector.data.reshape([2] * (2 * n_qubits))
    axes = _interleave_axes(n_qubits)
    if target is Ordering.BLOCKED:
        axes = list(np.argsort(axes))
    return SuperVector(np.transpose(tensor, axes).reshape(-1), target)


def interleave_permutation(n_qubits: int) -> np.ndarray:
    """
    Index array p with interleaved[j] = blocked[p[j]].
    """
    indices = SuperVector(np.arange(4 ** n_qubits, dtype=float))
    return np.real(reorder(indices, Ordering.INTERLEAVED).data).astype(np.int64)


def swap_permutation(n_qubits: int) -> np.ndarray:
    """
    Index array of the ket↔bra swap P in blocked ordering.
    """
    dim = 1 << n_qubits
    return np.arange(dim * dim, dtype=np.int64).reshape(dim, dim).T.reshape(-1)


def s_conjugate(vector: SuperVector) -> SuperVector:
    """
    Antiunitary S-symmetry s(v) = P·conj(v), i.e. |ρ⟩⟩ ↦ |ρ†⟩⟩.
    """
    vector = reorder(vector, Ordering.BLOCKED)
    return SuperVector(np.conj(vector.data[swap_permutation(vector.n_qubits)]))


def s_conjugate_superop(superop: Superoperator) -> Matrix:
    """
    P·conj(S)·P, equal to S for imaginary-time superoperators of Hermitian generators.
    """
    perm = swap_permutation(superop.n_qubits)
    matrix = superop.matrix
    if superop.is_dense:
        return np.conj(matrix[np.ix_(perm, perm)])
    return matrix.tocsr()[perm][:, perm].conj()


def _kron_pair(left: sp.spmatrix, right: sp.spmatrix) -> sp.csr_matrix:
    return sp.kron(left, right, format='csr')


def _realize_pair(operator: OperatorSum, policy: SizePolicy):
    matrix = realize(operator, policy, sparse=True)
    return matrix, matrix.conj()


def _finish(gen: LindbladGenerator, kind: SuperoperatorKind, matrix: sp.csr_matrix,
            policy: SizePolicy) -> Superoperator:
    dense = policy.check_superop(gen.n_qubits)
    logger.debug(f"{kind.value} superoperator for '{gen.label}': dim={matrix.shape[0]} nnz={matrix.nnz} "
                 f"dense={dense}")
    return Superoperator(
        n_qubits=gen.n_qubits,
        kind=kind,
        matrix=matrix.toarray() if dense else matrix.tocsr(),
        shift=gen.scalar_shift,
        label=gen.label,
    )


def build_imag_superop(gen: LindbladGenerator, policy: SizePolicy = DEFAULT_POLICY) -> Superoperator:
    """
    𝓛^I = H_eff^I ⊗ I + I ⊗ H_eff^I* - Σ_k L_k ⊗ L_k*, with H_eff^I = H - ½ Σ_k L_k†L_k.

    Raises:
        DimensionOverflowException: If the system exceeds the configured maximum.
    """
    policy.check_superop(gen.n_qubits)
    identity = sp.identity(1 << gen.n_qubits, dtype=complex, format='csr')
    h_eff, h_eff_conj = _realize_pair(gen.effective_hamiltonian_imag(), policy)
    matrix = _kron_pair(h_eff, identity) + _kron_pair(identity, h_eff_conj)
    for jump in gen.jumps:
        jump_matrix, jump_conj = _realize_pair(jump, policy)
        matrix = matrix - _kron_pair(jump_matrix, jump_conj)
    return _finish(gen, SuperoperatorKind.IMAG_TIME, matrix, policy)


def build_real_superop(gen: LindbladGenerator, policy: SizePolicy = DEFAULT_POLICY) -> Superoperator:
    """
    𝓛 = -i H_eff ⊗ I + i I ⊗ H_eff* + Σ_k L_k ⊗ L_k*, with H_eff = H - (i/2) Σ_k L_k†L_k.

    Raises:
        DimensionOverflowException: If the system exceeds the configured maximum.
    """
    policy.check_superop(gen.n_qubits)
    identity = sp.identity(1 << gen.n_qubits, dtype=complex, format='csr')
    h_eff, h_eff_conj = _realize_pair(gen.effective_hamiltonian_real(), policy)
    matrix = -1j * _kron_pair(h_eff, identity) + 1j * _kron_pair(identity, h_eff_conj)
    for jump in gen.jumps:
        jump_matrix, jump_conj = _realize_pair(jump, policy)
        matrix = matrix + _kron_pair(jump_matrix, jump_conj)
    return _finish(gen, SuperoperatorKind.REAL_TIME, matrix, policy)


def gibbs_term_superop(h: Union[OperatorSum, PauliString], o: Union[OperatorSum, PauliString],
                       gamma: float, policy: SizePolicy = DEFAULT_POLICY) -> Superoperator:
    """
    Single-term imaginary-Liouville h ⊗ I + I ⊗ h* - γ o ⊗ o*, spectrum {±√(γ²+4), ±γ}.
    """
    h = OperatorSum.from_pauli(h) if isinstance(h, PauliString) else h
    o = OperatorSum.from_pauli(o) if isinstance(o, PauliString) else o
    identity = sp.identity(1 << h.n_qubits, dtype=complex, format='csr')
    h_matrix, h_conj = _realize_pair(h, policy)
    o_matrix, o_conj = _realize_pair(o, policy)
    matrix = _kron_pair(h_matrix, identity) + _kron_pair(identity, h_conj) - gamma * _kron_pair(o_matrix, o_conj)
    dense = policy.check_superop(h.n_qubits)
    return Superoperator(h.n_qubits, SuperoperatorKind.IMAG_TIME,
                         matrix.toarray() if dense else matrix, shift=0.0, label='gibbs term')


def _dense_operators(gen: LindbladGenerator, policy: SizePolicy, effective: OperatorSum):
    h_eff = realize(effective, policy, sparse=False)
    jumps = [realize(jump, policy, sparse=False) for jump in gen.jumps]
    return h_eff, jumps


def apply_imag_generator(gen: LindbladGenerator, rho: np.ndarray,
                         policy: SizePolicy = DEFAULT_POLICY) -> np.ndarray:
    """
    Operator form 𝓛^I(ρ) = H_eff^I ρ + ρ H_eff^I - Σ L ρ L†.
    """
    h_eff, jumps = _dense_operators(gen, policy, gen.effective_hamiltonian_imag())
    result = h_eff @ rho + rho @ h_eff.conj().T
    for jump in jumps:
        result = result - jump @ rho @ jump.conj().T
    return result


def apply_real_generator(gen: LindbladGenerator, rho: np.ndarray,
                         policy: SizePolicy = DEFAULT_POLICY) -> np.ndarray:
    """
    Operator form 𝓛(ρ) = -i H_eff ρ + i ρ H_eff† + Σ L ρ L†.
    """
    h_eff, jumps = _dense_operators(gen, policy, gen.effective_hamiltonian_real())
    result = -1j * (h_eff @ rho) + 1j * (rho @ h_eff.conj().T)
    for jump in jumps:
        result = result + jump @ rho @ jump.conj().T
    return result
