from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as la

from openphase.core.base.config import DEFAULT_POLICY, SizePolicy
from openphase.core.base.generator import LindbladGenerator
from openphase.core.base.lattice import LatticeSpec
from openphase.core.base.liouville import DensityMatrix
from openphase.core.base.pauli import OperatorSum, PauliException, PauliString, commutes, realize
from openphase.core.models.corners import ModelException

WordLike = Union[PauliString, OperatorSum, str]


class InvalidStabilizerException(ModelException):
    """
    Exception raised when stabilizers and excitations do not have the required
    commutation structure. `pair` holds the offending indices (i, j).
    """

    def __init__(self, message: str, pair: Tuple[int, int]):
        super().__init__(message)
        self.pair = pair


def as_word(value: WordLike) -> PauliString:
    """
    Coerce a single Pauli word given as text, PauliString or one-term OperatorSum.

    Raises:
        ModelException: If the value is not a single Pauli word.
    """
    try:
        if isinstance(value, str):
            return PauliString.parse(value)
        if isinstance(value, OperatorSum):
            return value.as_pauli()
        return value
    except PauliException as e:
        raise ModelException(f"Expected a single Pauli word, got {value}: {e}") from e


def _gf2_rank(words: Sequence[PauliString]) -> int:
    basis: List[int] = []
    for word in words:
        vector = (word.x_mask << word.n_qubits) | word.z_mask
        for pivot in basis:
            vector = min(vector, vector ^ pivot)
        if vector:
            basis.append(vector)
    return len(basis)


@dataclass(frozen=True)
class GibbsSpec:
    """
    Commuting stabilizer Hamiltonian H = Σ h_i with one excitation operator per
    stabilizer, at inverse temperature beta_T.

    Attributes:
        stabilizers (Tuple[PauliString, ...]): Commuting, independent Hermitian words h_i.
        excitations (Tuple[PauliString, ...]): o_i anticommuting with h_i only.
        beta_T (float): Inverse temperature, positive.
    """
    stabilizers: Tuple[PauliString, ...]
    excitations: Tuple[PauliString, ...]
    beta_T: float

    def __post_init__(self):
        object.__setattr__(self, 'stabilizers', tuple(as_word(h) for h in self.stabilizers))
        object.__setattr__(self, 'excitations', tuple(as_word(o) for o in self.excitations))
        if not self.beta_T > 0:
            raise ModelException(f"Inverse temperature must be positive, got {self.beta_T}.")
        self.validate()

    @classmethod
    def from_words(cls, stabilizers: Sequence[str], excitations: Sequence[str], beta_T: float) -> 'GibbsSpec':
        return cls(tuple(stabilizers), tuple(excitations), beta_T)

    @property
    def gamma(self) -> float:
        """
        Coupling strength γ = 2 / sinh(2 beta_T).
        """
        return 2.0 / np.sinh(2.0 * self.beta_T)

    @property
    def n_qubits(self) -> int:
        return self.stabilizers[0].n_qubits

    @property
    def n_terms(self) -> int:
        return len(self.stabilizers)

    def validate(self) -> None:
        """
        Raises:
            InvalidStabilizerException: With the offending pair (i, j). A
                dependent stabilizer h_i is reported as (i, i).
        """
        if not self.stabilizers:
            raise ModelException("At least one stabilizer is required.")
        if len(self.excitations) != len(self.stabilizers):
            raise ModelException(
                f"{len(self.stabilizers)} stabilizers but {len(self.excitations)} excitations."
            )
        n_qubits = self.stabilizers[0].n_qubits
        for word in self.stabilizers + self.excitations:
            if word.n_qubits != n_qubits:
                raise ModelException(f"Word {word} acts on {word.n_qubits} qubits, expected {n_qubits}.")
        for i, h in enumerate(self.stabilizers):
            if h.phase != 0 or h.is_identity:
                raise InvalidStabilizerException(f"Stabilizer {i} ({h}) must be an unsigned non-identity word.",
                                                 (i, i))
            for j in range(i):
                if not commutes(h, self.stabilizers[j]):
                    raise InvalidStabilizerException(f"Stabilizers {j} and {i} anticommute.", (j, i))
            if _gf2_rank(self.stabilizers[:i + 1]) != i + 1:
                raise InvalidStabilizerException(f"Stabilizer {i} ({h}) depends on the previous ones.", (i, i))
        for i, o in enumerate(self.excitations):
            for j, h in enumerate(self.stabilizers):
                if commutes(o, h) == (i == j):
                    relation = 'commutes' if i == j else 'anticommutes'
                    raise InvalidStabilizerException(f"Excitation {i} ({o}) {relation} with stabilizer {j} ({h}).",
                                                     (i, j))


def cluster_gibbs_spec(lattice: LatticeSpec, beta_T: float) -> GibbsSpec:
    """
    Stabilizers σᶻτˣσᶻ and τᶻσˣτᶻ of the periodic chain with excitations τᶻ and σᶻ.

    Raises:
        ModelException: Under open boundaries.
    """
    if not lattice.periodic or lattice.n_sites < 2:
        raise ModelException("The cluster stabilizer set needs a periodic chain with at least two sites.")
    stabilizers, excitations = [], []
    for i in lattice.sites():
        stabilizers.append(lattice.cluster_stabilizer(i))
        excitations.append(lattice.tau(i, 'Z'))
    for i in lattice.sites():
        stabilizers.append(lattice.dressed_flip(i))
        excitations.append(lattice.sigma(i, 'Z'))
    return GibbsSpec(tuple(stabilizers), tuple(excitations), beta_T)


def build_stabilizer_gibbs(spec: GibbsSpec) -> LindbladGenerator:
    """
    H = Σ h_i with jumps √γ o_i, whose imaginary-time fixed point is the Gibbs state of H.
    """
    n_qubits = spec.n_qubits
    hamiltonian = OperatorSum(n_qubits, tuple((1.0, h) for h in spec.stabilizers))
    root = float(np.sqrt(spec.gamma))
    jumps = tuple(OperatorSum.from_pauli(o, root) for o in spec.excitations)
    return LindbladGenerator(hamiltonian, jumps, label=f"gibbs beta_T={spec.beta_T:g}")


def term_generator(spec: GibbsSpec, i: int) -> LindbladGenerator:
    """
    Single term (h_i, √γ o_i) of a stabilizer-Gibbs generator.
    """
    h, o = spec.stabilizers[i], spec.excitations[i]
    return LindbladGenerator(OperatorSum.from_pauli(h), (OperatorSum.from_pauli(o, float(np.sqrt(spec.gamma))),),
                             label=f"gibbs term {i}")


def gibbs_state(stabilizers: Sequence[WordLike], beta_T: float, policy: SizePolicy = DEFAULT_POLICY) -> DensityMatrix:
    """
    Exact e^{-βH}/Z for H = Σ h_i, computed from the eigendecomposition of H.

    Raises:
        DimensionOverflowException: If H is too large for a dense realization.
    """
    words = [as_word(h) for h in stabilizers]
    if not words:
        raise ModelException("At least one stabilizer is required.")
    if beta_T < 0:
        raise ModelException(f"Inverse temperature must be non-negative, got {beta_T}.")
    hamiltonian = OperatorSum(words[0].n_qubits, tuple((1.0, h) for h in words))
    energies, vectors = la.eigh(realize(hamiltonian, policy, sparse=False))
    weights = np.exp(-beta_T * (energies - energies[0]))
    matrix = (vectors * weights) @ vectors.conj().T
    return DensityMatrix(matrix / np.sum(weights))
