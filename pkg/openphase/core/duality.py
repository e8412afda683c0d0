from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, Tuple

import numpy as np
import scipy.sparse as sp
from loguru import logger

from openphase.core.base.config import DEFAULT_POLICY, SizePolicy
from openphase.core.base.generator import LindbladGenerator
from openphase.core.base.lattice import LatticeSpec
from openphase.core.base.liouville import (Superoperator, build_imag_superop)
from openphase.core.base.pauli import OperatorSum, PauliString, pauli_mul
from openphase.core.models.corners import InterpolationParams, build_interpolated
from openphase.core.spectral import (DENSE_MAX_DIM, extremal_spectrum,
                                     full_spectrum)

DUALITY_TOL: float = 1e-8


class DualityException(Exception):
    """
    Exception raised for inputs on which the domain-wall duality is not defined.
    """


@dataclass(frozen=True)
class DomainWallDuality:
    """
    U_DW = Π_i CZ(τ_{i-1/2}, σ_i) CZ(σ_i, τ_{i+1/2}).

    Kept both as a Clifford action on Pauli words (CZ neighbours of every
    qubit) and as the ±1 diagonal of its matrix.
    """
    lattice: LatticeSpec
    neighbours: Dict[int, Tuple[int, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        table: Dict[int, list] = {q: [] for q in range(self.lattice.n_qubits)}
        for a, b in self.lattice.domain_wall_edges():
            table[a].append(b)
            table[b].append(a)
        object.__setattr__(self, 'neighbours', {q: tuple(sorted(v)) for q, v in table.items()})

    @property
    def n_qubits(self) -> int:
        return self.lattice.n_qubits

    def diagonal(self, policy: SizePolicy = DEFAULT_POLICY) -> np.ndarray:
        policy.check_operator(self.n_qubits)
        return self.lattice.domain_wall_diagonal()

    def matrix(self, policy: SizePolicy = DEFAULT_POLICY) -> np.ndarray:
        return np.diag(self.diagonal(policy)).astype(complex)

    def _image_of_qubit(self, word: PauliString, qubit: int) -> PauliString:
        letter = word.letter(qubit)
        image = PauliString.single(self.n_qubits, qubit, letter)
        if letter in ('X', 'Y'):
            # CZ maps X_q to X_q Z_n for every neighbour n; Z_n sits off qubit q
            for neighbour in self.neighbours[qubit]:
                image = pauli_mul(image, PauliString.single(self.n_qubits, neighbour, 'Z'))
        return image

    def conjugate_pauli(self, word: PauliString) -> PauliString:
        """
        Exact U_DW p U_DW† by conjugating each single-qubit factor.

        Raises:
            DualityException: If the word acts on a different number of qubits.
        """
        if word.n_qubits != self.n_qubits:
            raise DualityException(f"Word acts on {word.n_qubits} qubits, lattice has {self.n_qubits}.")
        images = [self._image_of_qubit(word, q) for q in word.support]
        result = reduce(pauli_mul, images, PauliString.identity(self.n_qubits))
        return PauliString(self.n_qubits, result.x_mask, result.z_mask, result.phase + word.phase)

    def conjugate_operator(self, operator: OperatorSum) -> OperatorSum:
        if operator.n_qubits != self.n_qubits:
            raise DualityException(f"Operator acts on {operator.n_qubits} qubits, lattice has {self.n_qubits}.")
        return OperatorSum(self.n_qubits, tuple((c, self.conjugate_pauli(w)) for c, w in operator.terms))

    def conjugate_generator(self, gen: LindbladGenerator) -> LindbladGenerator:
        """
        Conjugate the Hamiltonian and every jump.
        """
        if gen.lattice is not None and gen.lattice != self.lattice:
            raise DualityException(f"Generator lattice {gen.lattice} differs from {self.lattice}.")
        return LindbladGenerator(
            self.conjugate_operator(gen.hamiltonian),
            tuple(self.conjugate_operator(jump) for jump in gen.jumps),
            self.lattice,
            label=f"U_DW({gen.label})",
        )

    def conjugate_superop(self, superop: Superoperator) -> Superoperator:
        """
        (U ⊗ U*) S (U ⊗ U*)†; U is a real ±1 diagonal.
        """
        if superop.n_qubits != self.n_qubits:
            raise DualityException(f"Superoperator acts on {superop.n_qubits} qubits, lattice has {self.n_qubits}.")
        diagonal = np.kron(self.lattice.domain_wall_diagonal(), self.lattice.domain_wall_diagonal())
        if superop.is_dense:
            matrix = diagonal[:, None] * superop.matrix * diagonal[None, :]
        else:
            dressing = sp.diags(diagonal, format='csr')
            matrix = (dressing @ superop.matrix @ dressing).tocsr()
        return Superoperator(superop.n_qubits, superop.kind, matrix, superop.shift, f"U_DW({superop.label})")


def build_udw(lattice: LatticeSpec) -> DomainWallDuality:
    return DomainWallDuality(lattice)


@dataclass
class DualityCheck:
    """
    Comparison of 𝓛^I(a, b) with 𝓛^I(a, 1-b) on a periodic chain.

    Attributes:
        a (float): Dissipation strength.
        b (float): Interpolation towards the decorated models.
        n_sites (int): Chain length.
        distance (float): Max elementwise distance between the sorted spectra.
        intertwining (float): Max elementwise |(U⊗U*) 𝓛^I(a,b) (U⊗U*) - 𝓛^I(a,1-b)|.
        gap (float): Gap of 𝓛^I(a, b).
        dual_gap (float): Gap of 𝓛^I(a, 1-b).
    """
    a: float
    b: float
    n_sites: int
    distance: float
    intertwining: float
    gap: float
    dual_gap: float

    def passed(self, tol: float = DUALITY_TOL) -> bool:
        return self.distance < tol and self.intertwining < tol


def _max_difference(left: Superoperator, right: Superoperator) -> float:
    difference = left.matrix - right.matrix
    if sp.issparse(difference):
        return float(np.max(np.abs(difference.data), initial=0.0))
    return float(np.max(np.abs(difference), initial=0.0))


def check_duality(a: float, b: float, lattice: LatticeSpec, k: int = 8, seed: int = 0,
                  policy: SizePolicy = DEFAULT_POLICY) -> DualityCheck:
    """
    Build 𝓛^I(a, b) and 𝓛^I(a, 1-b) and compare their spectra and the
    superoperator intertwining relation. Dense systems compare full spectra,
    larger ones the k lowest eigenvalues.

    Raises:
        DualityException: Under open boundaries, where boundary terms break the duality.
    """
    if not lattice.periodic:
        raise DualityException(
            "The domain-wall duality maps 𝓛^I(a, b) onto 𝓛^I(a, 1-b) only under periodic boundaries; "
            "open chains drop boundary terms on both sides asymmetrically."
        )
    duality = build_udw(lattice)
    superop = build_imag_superop(build_interpolated(InterpolationParams(a, b), lattice), policy)
    dual = build_imag_superop(build_interpolated(InterpolationParams(a, 1.0 - b), lattice), policy)
    intertwining = _max_difference(duality.conjugate_superop(superop), dual)
    if superop.dim <= DENSE_MAX_DIM:
        spectrum, dual_spectrum = full_spectrum(superop), full_spectrum(dual)
    else:
        spectrum = extremal_spectrum(superop, k=k, seed=seed)
        dual_spectrum = extremal_spectrum(dual, k=k, seed=seed)
    distance = float(np.max(np.abs(spectrum.eigenvalues - dual_spectrum.eigenvalues), initial=0.0))
    logger.debug(f"duality a={a:g} b={b:g} N={lattice.n_sites}: distance={distance:.3e} "
                 f"intertwining={intertwining:.3e}")
    return DualityCheck(a, b, lattice.n_sites, distance, intertwining, spectrum.gap, dual_spectrum.gap)
