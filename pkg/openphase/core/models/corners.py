from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import Callable, List, Optional, Tuple

import numpy as np

from openphase.core.base.generator import LindbladGenerator
from openphase.core.base.lattice import LatticeSpec
from openphase.core.base.liouville import DensityMatrix
from openphase.core.base.pauli import OperatorSum, PauliString, commutes


class ModelException(Exception):
    """
    Exception raised for invalid model parameters.
    """


class Corner(Enum):
    """
    The four fixed-point generators of the (a, b) square.
    """
    TRIVIAL_PURE = '00'
    SPT = '01'
    TRIVIAL_MIXED = '10'
    ASPT = '11'

    @classmethod
    def parse(cls, value: 'Corner | str | Tuple[int, int]') -> 'Corner':
        if isinstance(value, Corner):
            return value
        if isinstance(value, tuple):
            value = f"{int(value[0])}{int(value[1])}"
        text = str(value).strip()
        for corner in cls:
            if text in (corner.value, corner.name, corner.name.lower()):
                return corner
        raise ModelException(f"Unknown corner {value!r}, expected one of 00, 01, 10, 11.")

    @property
    def a(self) -> float:
        return float(self.value[0])

    @property
    def b(self) -> float:
        return float(self.value[1])


@dataclass(frozen=True)
class InterpolationParams:
    """
    Point of the interpolation square.

    Attributes:
        a (float): Dissipation strength, from closed (0) to fully decohered (1).
        b (float): Trivial (0) to domain-wall decorated (1).
    """
    a: float
    b: float

    def __post_init__(self):
        for name in ('a', 'b'):
            value = float(getattr(self, name))
            if not 0.0 <= value <= 1.0:
                raise ModelException(f"{name}={value} is outside [0, 1].")
            object.__setattr__(self, name, value)

    @classmethod
    def from_corner(cls, corner: 'Corner | str') -> 'InterpolationParams':
        corner = Corner.parse(corner)
        return cls(corner.a, corner.b)


def _site_sum(lattice: LatticeSpec, builder: Callable[[int], Optional[PauliString]]) -> OperatorSum:
    words = [builder(i) for i in lattice.sites()]
    return OperatorSum(lattice.n_qubits, tuple((1.0, word) for word in words if word is not None))


def tau_field(lattice: LatticeSpec) -> OperatorSum:
    """
    Σ τˣ.
    """
    return _site_sum(lattice, lambda i: lattice.tau(i, 'X'))


def sigma_field(lattice: LatticeSpec) -> OperatorSum:
    """
    Σ σˣ.
    """
    return _site_sum(lattice, lambda i: lattice.sigma(i, 'X'))


def cluster_terms(lattice: LatticeSpec) -> OperatorSum:
    """
    Σ σᶻ τˣ σᶻ.
    """
    return _site_sum(lattice, lattice.cluster_stabilizer)


def dressed_flip_terms(lattice: LatticeSpec) -> OperatorSum:
    """
    Σ τᶻ σˣ τᶻ.
    """
    return _site_sum(lattice, lattice.dressed_flip)


def _jumps(lattice: LatticeSpec, weights: Tuple[float, float, float]) -> Tuple[OperatorSum, ...]:
    dephasing, flip, dressed = weights
    jumps: List[OperatorSum] = []
    for i in lattice.sites():
        for weight, word in ((dephasing, lattice.sigma(i, 'Z')),
                             (flip, lattice.sigma(i, 'X')),
                             (dressed, lattice.dressed_flip(i))):
            if weight != 0.0 and word is not None:
                jumps.append(OperatorSum.from_pauli(word, weight))
    return tuple(jumps)


def build_corner(corner: 'Corner | str', lattice: LatticeSpec) -> LindbladGenerator:
    """
    One of the four fixed-point generators.

        00: H = -Στˣ - Σσˣ, no jumps
        01: H = -Σσᶻτˣσᶻ - Στᶻσˣτᶻ, no jumps
        10: H = -Στˣ, jumps {σᶻ_i, σˣ_i}
        11: H = -Σσᶻτˣσᶻ, jumps {σᶻ_i, τᶻσˣτᶻ_i}

    Args:
        corner (Corner | str): Which corner.
        lattice (LatticeSpec): Chain layout.

    Returns:
        LindbladGenerator: The generator.
    """
    corner = Corner.parse(corner)
    if corner is Corner.TRIVIAL_PURE:
        hamiltonian, weights = -tau_field(lattice) - sigma_field(lattice), (0.0, 0.0, 0.0)
    elif corner is Corner.SPT:
        hamiltonian, weights = -cluster_terms(lattice) - dressed_flip_terms(lattice), (0.0, 0.0, 0.0)
    elif corner is Corner.TRIVIAL_MIXED:
        hamiltonian, weights = -tau_field(lattice), (1.0, 1.0, 0.0)
    else:
        hamiltonian, weights = -cluster_terms(lattice), (1.0, 0.0, 1.0)
    return LindbladGenerator(hamiltonian, _jumps(lattice, weights), lattice, label=f"corner {corner.value}")


def build_interpolated(params: InterpolationParams, lattice: LatticeSpec) -> LindbladGenerator:
    """
    Generator at (a, b):

        H = (1-b)(-Στˣ) + b(-Σσᶻτˣσᶻ) + (1-a)[(1-b)(-Σσˣ) + b(-Στᶻσˣτᶻ)]

    with per-site jumps √a σᶻ, √(a(1-b)) σˣ and √(ab) τᶻσˣτᶻ. Jumps with zero
    weight are dropped.
    """
    a, b = params.a, params.b
    hamiltonian = (
        (1 - b) * -tau_field(lattice)
        + b * -cluster_terms(lattice)
        + (1 - a) * ((1 - b) * -sigma_field(lattice) + b * -dressed_flip_terms(lattice))
    )
    weights = (float(np.sqrt(a)), float(np.sqrt(a * (1 - b))), float(np.sqrt(a * b)))
    return LindbladGenerator(hamiltonian, _jumps(lattice, weights), lattice, label=f"a={a:g} b={b:g}")


def _plus_product(n_factors: int) -> np.ndarray:
    plus = np.full(2, 1 / np.sqrt(2), dtype=complex)
    return reduce(np.kron, [plus] * n_factors, np.ones(1, dtype=complex))


def _domain_wall_dressing(lattice: LatticeSpec, matrix: np.ndarray) -> np.ndarray:
    diagonal = lattice.domain_wall_diagonal()
    return diagonal[:, None] * matrix * diagonal[None, :]


def trivial_pure_state(lattice: LatticeSpec) -> DensityMatrix:
    """
    |+⟩ on every σ and τ spin, the fixed point of corner 00.
    """
    return DensityMatrix.from_pure(_plus_product(lattice.n_qubits))


def cluster_state(lattice: LatticeSpec) -> DensityMatrix:
    """
    Domain-wall decorated product state, the fixed point of corner 01 under periodic boundaries.
    """
    return DensityMatrix(_domain_wall_dressing(lattice, trivial_pure_state(lattice).matrix))


def trivial_mixed_state(lattice: LatticeSpec) -> DensityMatrix:
    """
    Π_i (I/2)_σ ⊗ |+⟩⟨+|_τ, the fixed point of corner 10.
    """
    site = np.kron(np.eye(2) / 2, np.full((2, 2), 0.5))
    return DensityMatrix(reduce(np.kron, [site] * lattice.n_sites, np.ones((1, 1), dtype=complex)))


def decohered_cluster_state(lattice: LatticeSpec) -> DensityMatrix:
    """
    Uniform mixture over σ configurations with domain-wall decorated τ spins,
    the fixed point of corner 11 under periodic boundaries.
    """
    return DensityMatrix(_domain_wall_dressing(lattice, trivial_mixed_state(lattice).matrix))


def corner_state(corner: 'Corner | str', lattice: LatticeSpec) -> DensityMatrix:
    builders = {
        Corner.TRIVIAL_PURE: trivial_pure_state,
        Corner.SPT: cluster_state,
        Corner.TRIVIAL_MIXED: trivial_mixed_state,
        Corner.ASPT: decohered_cluster_state,
    }
    return builders[Corner.parse(corner)](lattice)


def _relation(symmetry: PauliString, operator: OperatorSum) -> int:
    """
    +1 if every term commutes with the symmetry, -1 if every term anticommutes, 0 otherwise.
    """
    signs = {1 if commutes(symmetry, word) else -1 for _, word in operator.terms}
    if not signs:
        return 1
    return signs.pop() if len(signs) == 1 else 0


@dataclass
class SymmetryReport:
    """
    Commutation structure of a generator with K = Πτˣ and U = Πσˣ.

    Attributes:
        k_hamiltonian (int): Relation of K with H.
        k_jumps (Tuple[int, ...]): Relation of K with every jump.
        u_hamiltonian (int): Relation of U with H.
        u_jumps (Tuple[int, ...]): Relation of U with every jump.
    """
    k_hamiltonian: int
    k_jumps: Tuple[int, ...]
    u_hamiltonian: int
    u_jumps: Tuple[int, ...]

    @property
    def k_strong(self) -> bool:
        return self.k_hamiltonian == 1 and all(sign == 1 for sign in self.k_jumps)

    @property
    def u_strong(self) -> bool:
        return self.u_hamiltonian == 1 and all(sign == 1 for sign in self.u_jumps)

    @property
    def u_weak(self) -> bool:
        # a jump picking up a phase under U leaves the dissipator invariant
        return self.u_hamiltonian == 1 and all(sign != 0 for sign in self.u_jumps)


def symmetry_report(gen: LindbladGenerator) -> SymmetryReport:
    """
    Classify K and U as strong or weak symmetries of a lattice generator.

    Raises:
        ModelException: If the generator carries no lattice.
    """
    if gen.lattice is None:
        raise ModelException("Symmetry report needs a generator defined on a lattice.")
    k = gen.lattice.strong_symmetry()
    u = gen.lattice.weak_symmetry()
    return SymmetryReport(
        k_hamiltonian=_relation(k, gen.hamiltonian),
        k_jumps=tuple(_relation(k, jump) for jump in gen.jumps),
        u_hamiltonian=_relation(u, gen.hamiltonian),
        u_jumps=tuple(_relation(u, jump) for jump in gen.jumps),
    )
