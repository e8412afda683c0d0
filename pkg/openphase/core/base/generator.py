from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

from openphase.core.base.lattice import LatticeSpec
from openphase.core.base.pauli import OperatorSum

MAX_WINDOW_SITES: int = 3


class GeneratorException(Exception):
    """
    Exception raised for inconsistent or non-Hermitian generators.
    """


@dataclass(frozen=True)
class LindbladGenerator:
    """
    Open system (H, {L_k}) driving both real-time and imaginary-time dynamics.

    Attributes:
        hamiltonian (OperatorSum): Hermitian Hamiltonian H.
        jumps (Tuple[OperatorSum, ...]): Jump operators L_k.
        lattice (Optional[LatticeSpec]): Chain layout. When present every term
            must act inside a window of at most three neighboring sites.
        label (str): Human-readable name, ignored in comparisons.
    """
    hamiltonian: OperatorSum
    jumps: Tuple[OperatorSum, ...] = ()
    lattice: Optional[LatticeSpec] = None
    label: str = field(default='', compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'jumps', tuple(self.jumps))
        n_qubits = self.hamiltonian.n_qubits
        for k, jump in enumerate(self.jumps):
            if jump.n_qubits != n_qubits:
                raise GeneratorException(f"Jump {k} acts on {jump.n_qubits} qubits, H on {n_qubits}.")
        if not self.hamiltonian.is_hermitian():
            raise GeneratorException(f"Hamiltonian is not Hermitian: {self.hamiltonian}")
        if self.lattice is not None:
            if self.lattice.n_qubits != n_qubits:
                raise GeneratorException(
                    f"Lattice holds {self.lattice.n_qubits} qubits, generator acts on {n_qubits}."
                )
            self._check_locality()

    def _check_locality(self) -> None:
        for operator in (self.hamiltonian, *self.jumps):
            for _, word in operator.terms:
                span = self.lattice.support_span(word)
                if span > MAX_WINDOW_SITES:
                    raise GeneratorException(f"Term {word} spans {span} sites, the limit is {MAX_WINDOW_SITES}.")

    @property
    def n_qubits(self) -> int:
        return self.hamiltonian.n_qubits

    @property
    def n_jumps(self) -> int:
        return len(self.jumps)

    def dissipation(self) -> OperatorSum:
        """
        Σ_k L_k†L_k.
        """
        return OperatorSum.sum(self.n_qubits, (jump.dagger() @ jump for jump in self.jumps))

    def effective_hamiltonian_imag(self) -> OperatorSum:
        """
        H_eff^I = H - ½ Σ L_k†L_k, Hermitian.
        """
        return self.hamiltonian - 0.5 * self.dissipation()

    def effective_hamiltonian_real(self) -> OperatorSum:
        """
        H_eff = H - (i/2) Σ L_k†L_k.
        """
        return self.hamiltonian - 0.5j * self.dissipation()

    @property
    def scalar_shift(self) -> float:
        """
        Scalar part of the dissipative diagonal -½ΣL†L ⊗ I - I ⊗ ½ΣL†L*, i.e. -Σ_k Tr(L_k†L_k)/2ⁿ.
        """
        return -float(self.dissipation().identity_coefficient().real)

    def has_unitary_jumps(self, tol: float = 1e-12) -> bool:
        """
        True if every L_k†L_k is a multiple of the identity.
        """
        for jump in self.jumps:
            product = jump.dagger() @ jump
            if any(not word.is_identity and abs(c) > tol for c, word in product.terms):
                return False
        return True

    def with_jumps(self, jumps: Sequence[OperatorSum]) -> 'LindbladGenerator':
        return LindbladGenerator(self.hamiltonian, tuple(jumps), self.lattice, self.label)
