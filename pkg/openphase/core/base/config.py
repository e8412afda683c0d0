from dataclasses import dataclass


class DimensionOverflowException(Exception):
    """
    Exception raised when a matrix realization exceeds the configured size.
    """


@dataclass(frozen=True)
class SizePolicy:
    """
    Size thresholds for matrix realizations.

    Attributes:
        operator_dense_max_qubits (int): Pauli sums on at most this many qubits
            are realized as dense arrays, larger ones as CSR matrices.
        operator_max_qubits (int): Hard limit for operator realizations.
        superop_dense_max_qubits (int): Superoperators of systems with at most
            this many qubits (dimension 4ⁿ ≤ 4096 by default) are dense.
        superop_max_qubits (int): Hard limit for superoperator construction.
    """
    operator_dense_max_qubits: int = 12
    operator_max_qubits: int = 24
    superop_dense_max_qubits: int = 6
    superop_max_qubits: int = 12

    def check_operator(self, n_qubits: int) -> bool:
        """
        Returns True if an operator on n_qubits should be dense.

        Raises:
            DimensionOverflowException: If n_qubits exceeds the hard limit.
        """
        if n_qubits > self.operator_max_qubits:
            raise DimensionOverflowException(
                f"Operator on {n_qubits} qubits exceeds the limit of {self.operator_max_qubits} qubits."
            )
        return n_qubits <= self.operator_dense_max_qubits

    def check_superop(self, n_qubits: int) -> bool:
        """
        Returns True if a superoperator of an n_qubits system should be dense.

        Raises:
            DimensionOverflowException: If n_qubits exceeds the hard limit.
        """
        if n_qubits > self.superop_max_qubits:
            raise DimensionOverflowException(
                f"Superoperator of a {n_qubits}-qubit system exceeds the limit of "
                f"{self.superop_max_qubits} qubits (dimension {4 ** n_qubits})."
            )
        return n_qubits <= self.superop_dense_max_qubits


DEFAULT_POLICY = SizePolicy()
