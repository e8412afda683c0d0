import numpy as np

from openphase.core.base.generator import LindbladGenerator
from openphase.core.base.lattice import LatticeSpec
from openphase.core.base.pauli import OperatorSum, PauliString
from openphase.core.models.corners import build_corner


def lowering(n_qubits: int = 1, qubit: int = 0) -> OperatorSum:
    """
    σ⁻ = |0⟩⟨1| = (X + iY)/2 on one qubit.
    """
    x = PauliString.single(n_qubits, qubit, 'X')
    y = PauliString.single(n_qubits, qubit, 'Y')
    return OperatorSum(n_qubits, ((0.5, x), (0.5j, y)))


def build_single_qubit_mixer() -> LindbladGenerator:
    """
    H = 0 with jumps σᶻ and σˣ; the unique fixed point is I/2.
    """
    jumps = (OperatorSum.from_words([(1.0, 'Z')]), OperatorSum.from_words([(1.0, 'X')]))
    return LindbladGenerator(OperatorSum.zero(1), jumps, label='single qubit mixer')


def build_symmetric_product(lattice: LatticeSpec) -> LindbladGenerator:
    """
    H = -Στˣ with per-site jumps σᶻ and σˣ: strong K, product fixed point.
    """
    gen = build_corner('10', lattice)
    return LindbladGenerator(gen.hamiltonian, gen.jumps, lattice, label='symmetric product')


def build_amplitude_damping(rate: float = 1.0) -> LindbladGenerator:
    return LindbladGenerator(OperatorSum.zero(1), (float(np.sqrt(rate)) * lowering(),), label='amplitude damping')


def build_damped_rabi(omega: float = 1.0, rate: float = 0.2) -> LindbladGenerator:
    """
    Driven decaying qubit H = ω X, L = √rate σ⁻; its real-time superoperator has complex modes.
    """
    hamiltonian = OperatorSum.from_words([(omega, 'X')])
    return LindbladGenerator(hamiltonian, (float(np.sqrt(rate)) * lowering(),), label='damped rabi')
