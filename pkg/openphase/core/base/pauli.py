"""
Exact Pauli-string algebra on n qubits.

A Pauli word on n qubits is stored as two n-bit masks and a phase exponent,

    P = i^phase · ⊗_q P_q,   P_q ∈ {I, X, Y, Z},

where qubit q owns bit (n - 1 - q) of both masks, so masks read left to right
like the textual notation and index the computational basis directly
(qubit 0 is the leftmost tensor factor). The single-qubit letter is
(x, z) = (0, 0) → I, (1, 0) → X, (0, 1) → Z, (1, 1) → Y, and every unsigned
word is Hermitian.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple, Union

import numpy as np
import scipy.sparse as sp

from openphase.core.base.config import DEFAULT_POLICY, SizePolicy

PHASE_VALUES: Tuple[complex, ...] = (1, 1j, -1, -1j)
_LETTERS: Dict[Tuple[int, int], str] = {(0, 0): 'I', (1, 0): 'X', (0, 1): 'Z', (1, 1): 'Y'}
_CODES: Dict[str, Tuple[int, int]] = {letter: code for code, letter in _LETTERS.items()}
_PREFIXES: Tuple[Tuple[str, int], ...] = (('+i', 1), ('-i', 3), ('i', 1), ('+', 0), ('-', 2))
_PREFIX_OF_PHASE: Tuple[str, ...] = ('', 'i', '-', '-i')
_DROP_TOL: float = 1e-14


class PauliException(Exception):
    """
    Exception raised for errors in the Pauli algebra.
    """


def _popcount(value: int) -> int:
    return bin(value).count('1')


def _parity(values: np.ndarray) -> np.ndarray:
    """
    Bitwise parity of non-negative int64 values.
    """
    values = values.copy()
    shift = 32
    while shift:
        values ^= values >> shift
        shift >>= 1
    return values & 1


@dataclass(frozen=True)
class PauliString:
    """
    A Pauli word with an exact phase in {+1, +i, -1, -i}.

    Attributes:
        n_qubits (int): Number of qubits.
        x_mask (int): X-part of the word.
        z_mask (int): Z-part of the word.
        phase (int): Exponent k of the global phase i^k, stored modulo 4.
    """
    n_qubits: int
    x_mask: int = 0
    z_mask: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise PauliException(f"Number of qubits must be positive, got {self.n_qubits}.")
        full = (1 << self.n_qubits) - 1
        for name, mask in (('x_mask', self.x_mask), ('z_mask', self.z_mask)):
            if mask < 0 or mask & ~full:
                raise PauliException(f"{name}={mask:#x} does not fit in {self.n_qubits} qubits.")
        object.__setattr__(self, 'phase', int(self.phase) % 4)

    @classmethod
    def identity(cls, n_qubits: int) -> 'PauliString':
        return cls(n_qubits)

    @classmethod
    def single(cls, n_qubits: int, qubit: int, letter: str) -> 'PauliString':
        """
        A single-qubit Pauli `letter` acting on `qubit`.
        """
        if not 0 <= qubit < n_qubits:
            raise PauliException(f"Qubit {qubit} out of range for {n_qubits} qubits.")
        if letter not in _CODES:
            raise PauliException(f"Unknown Pauli letter {letter!r}.")
        x, z = _CODES[letter]
        bit = 1 << (n_qubits - 1 - qubit)
        return cls(n_qubits, x_mask=bit * x, z_mask=bit * z)

    @classmethod
    def parse(cls, text: str) -> 'PauliString':
        """
        Parse textual notation such as "XZIIY", "-ZZ" or "+iXY".
        """
        text = text.strip()
        phase = 0
        for prefix, value in _PREFIXES:
            if text.startswith(prefix):
                phase = value
                text = text[len(prefix):]
                break
        if not text:
            raise PauliException("Pauli word must contain at least one letter.")
        x_mask = z_mask = 0
        for letter in text:
            if letter not in _CODES:
                raise PauliException(f"Unknown Pauli letter {letter!r} in {text!r}.")
            x, z = _CODES[letter]
            x_mask = (x_mask << 1) | x
            z_mask = (z_mask << 1) | z
        return cls(len(text), x_mask=x_mask, z_mask=z_mask, phase=phase)

    def _bit(self, qubit: int) -> int:
        return 1 << (self.n_qubits - 1 - qubit)

    def letter(self, qubit: int) -> str:
        bit = self._bit(qubit)
        return _LETTERS[(int(bool(self.x_mask & bit)), int(bool(self.z_mask & bit)))]

    @property
    def letters(self) -> str:
        return ''.join(self.letter(q) for q in range(self.n_qubits))

    @property
    def support(self) -> Tuple[int, ...]:
        """
        Qubits on which the word acts non-trivially.
        """
        mask = self.x_mask | self.z_mask
        return tuple(q for q in range(self.n_qubits) if mask & self._bit(q))

    @property
    def weight(self) -> int:
        return _popcount(self.x_mask | self.z_mask)

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    @property
    def value(self) -> complex:
        """
        Global phase as a complex number.
        """
        return PHASE_VALUES[self.phase]

    @property
    def is_hermitian(self) -> bool:
        return self.phase in (0, 2)

    def unsigned(self) -> 'PauliString':
        return PauliString(self.n_qubits, self.x_mask, self.z_mask, 0)

    def dagger(self) -> 'PauliString':
        return PauliString(self.n_qubits, self.x_mask, self.z_mask, -self.phase)

    def __mul__(self, other: 'PauliString') -> 'PauliString':
        return pauli_mul(self, other)

    def __str__(self) -> str:
        return _PREFIX_OF_PHASE[self.phase] + self.letters

    def __repr__(self) -> str:
        return f"PauliString({self})"


def _check_sizes(p: PauliString, q: PauliString) -> None:
    if p.n_qubits != q.n_qubits:
        raise PauliException(f"Size mismatch: {p.n_qubits} vs {q.n_qubits} qubits.")


def pauli_mul(p: PauliString, q: PauliString) -> PauliString:
    """
    Exact product p·q including the accumulated phase.

    Raises:
        PauliException: If the words act on different numbers of qubits.
    """
    _check_sizes(p, q)
    x_mask = p.x_mask ^ q.x_mask
    z_mask = p.z_mask ^ q.z_mask
    # unsigned words are i^{|x&z|} X^x Z^z; moving Z^{z_p} past X^{x_q} costs (-1)^{|z_p & x_q|}
    phase = (
        p.phase + q.phase
        + _popcount(p.x_mask & p.z_mask) + _popcount(q.x_mask & q.z_mask)
        + 2 * _popcount(p.z_mask & q.x_mask)
        - _popcount(x_mask & z_mask)
    )
    return PauliString(p.n_qubits, x_mask, z_mask, phase)


def commutes(p: PauliString, q: PauliString) -> bool:
    """
    True iff p·q = q·p, from the symplectic inner product of the masks.

    Raises:
        PauliException: If the words act on different numbers of qubits.
    """
    _check_sizes(p, q)
    return (_popcount(p.x_mask & q.z_mask) + _popcount(p.z_mask & q.x_mask)) % 2 == 0


Term = Tuple[complex, PauliString]


@dataclass(frozen=True)
class OperatorSum:
    """
    A complex-weighted sum of unsigned Pauli words in canonical form:
    word phases are absorbed into the coefficients, terms sharing a word are
    merged, zero coefficients are dropped and terms are sorted by masks.
    """
    n_qubits: int
    terms: Tuple[Term, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 1:
            raise PauliException(f"Number of qubits must be positive, got {self.n_qubits}.")
        merged: Dict[Tuple[int, int], complex] = {}
        for coefficient, word in self.terms:
            if word.n_qubits != self.n_qubits:
                raise PauliException(
                    f"Word {word} acts on {word.n_qubits} qubits, expected {self.n_qubits}."
                )
            key = (word.x_mask, word.z_mask)
            merged[key] = merged.get(key, 0) + complex(coefficient) * word.value
        terms = tuple(
            (coefficient, PauliString(self.n_qubits, x_mask, z_mask))
            for (x_mask, z_mask), coefficient in sorted(merged.items())
            if abs(coefficient) > _DROP_TOL
        )
        object.__setattr__(self, 'terms', terms)

    @classmethod
    def zero(cls, n_qubits: int) -> 'OperatorSum':
        return cls(n_qubits)

    @classmethod
    def identity(cls, n_qubits: int, coefficient: complex = 1.0) -> 'OperatorSum':
        return cls(n_qubits, ((coefficient, PauliString.identity(n_qubits)),))

    @classmethod
    def from_pauli(cls, word: PauliString, coefficient: complex = 1.0) -> 'OperatorSum':
        return cls(word.n_qubits, ((coefficient, word),))

    @classmethod
    def from_words(cls, words: Iterable[Tuple[complex, str]]) -> 'OperatorSum':
        """
        Build a sum from (coefficient, textual word) pairs.
        """
        terms = [(coefficient, PauliString.parse(text)) for coefficient, text in words]
        if not terms:
            raise PauliException("Cannot infer the number of qubits of an empty sum.")
        return cls(terms[0][1].n_qubits, tuple(terms))

    @classmethod
    def sum(cls, n_qubits: int, parts: Iterable['OperatorSum']) -> 'OperatorSum':
        terms = []
        for part in parts:
            terms.extend(part.terms)
        return cls(n_qubits, tuple(terms))

    def __len__(self) -> int:
        return len(self.terms)

    def _coerce(self, other: Union['OperatorSum', PauliString]) -> 'OperatorSum':
        if isinstance(other, PauliString):
            other = OperatorSum.from_pauli(other)
        if other.n_qubits != self.n_qubits:
            raise PauliException(f"Size mismatch: {self.n_qubits} vs {other.n_qubits} qubits.")
        return other

    def __add__(self, other: Union['OperatorSum', PauliString]) -> 'OperatorSum':
        other = self._coerce(other)
        return OperatorSum(self.n_qubits, self.terms + other.terms)

    def __sub__(self, other: Union['OperatorSum', PauliString]) -> 'OperatorSum':
        return self + (-1) * self._coerce(other)

    def __neg__(self) -> 'OperatorSum':
        return (-1) * self

    def __mul__(self, scalar: complex) -> 'OperatorSum':
        return OperatorSum(self.n_qubits, tuple((scalar * c, w) for c, w in self.terms))

    __rmul__ = __mul__

    def __matmul__(self, other: Union['OperatorSum', PauliString]) -> 'OperatorSum':
        other = self._coerce(other)
        terms = []
        for c1, w1 in self.terms:
            for c2, w2 in other.terms:
                terms.append((c1 * c2, pauli_mul(w1, w2)))
        return OperatorSum(self.n_qubits, tuple(terms))

    def dagger(self) -> 'OperatorSum':
        return OperatorSum(self.n_qubits, tuple((np.conj(c), w) for c, w in self.terms))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        """
        Unsigned words are Hermitian, so the sum is Hermitian iff every coefficient is real.
        """
        return all(abs(np.imag(c)) <= tol for c, _ in self.terms)

    def identity_coefficient(self) -> complex:
        for coefficient, word in self.terms:
            if word.is_identity:
                return coefficient
        return 0.0

    def is_close(self, other: 'OperatorSum', tol: float = 1e-12) -> bool:
        difference = self - other
        return all(abs(c) <= tol for c, _ in difference.terms)

    def as_pauli(self) -> PauliString:
        """
        The single word this sum represents, with its coefficient as exact phase.

        Raises:
            PauliException: If the sum is not a unit-modulus multiple of a power of i times one word.
        """
        if len(self.terms) != 1:
            raise PauliException(f"Expected a single Pauli word, got {len(self.terms)} terms.")
        coefficient, word = self.terms[0]
        for phase, value in enumerate(PHASE_VALUES):
            if abs(coefficient - value) <= 1e-12:
                return PauliString(self.n_qubits, word.x_mask, word.z_mask, phase)
        raise PauliException(f"Coefficient {coefficient} is not a fourth root of unity.")

    def __str__(self) -> str:
        if not self.terms:
            return '0'
        return ' + '.join(f"({c:.6g})*{w.letters}" for c, w in self.terms)


def realize(operator: Union[OperatorSum, PauliString],
            policy: SizePolicy = DEFAULT_POLICY,
            sparse: Optional[bool] = None) -> Union[np.ndarray, sp.csr_matrix]:
    """
    Exact 2ⁿ×2ⁿ matrix of a Pauli sum.

    Args:
        operator (OperatorSum | PauliString): Operator to realize.
        policy (SizePolicy): Dense/sparse thresholds.
        sparse (Optional[bool]): Force the representation; by default the policy decides.

    Returns:
        np.ndarray | sp.csr_matrix: The matrix.

    Raises:
        DimensionOverflowException: If the operator exceeds the configured maximum.
    """
    if isinstance(operator, PauliString):
        operator = OperatorSum.from_pauli(operator)
    dense = policy.check_operator(operator.n_qubits)
    if sparse is not None:
        dense = not sparse
    dim = 1 << operator.n_qubits
    columns = np.arange(dim, dtype=np.int64)
    rows, cols, values = [], [], []
    for coefficient, word in operator.terms:
        # W|b> = i^{|x&z|} (-1)^{|z&b|} |b ^ x>
        signs = 1 - 2 * _parity(columns & word.z_mask)
        rows.append(columns ^ word.x_mask)
        cols.append(columns)
        values.append(coefficient * PHASE_VALUES[_popcount(word.x_mask & word.z_mask) % 4] * signs)
    if rows:
        matrix = sp.coo_matrix(
            (np.concatenate(values), (np.concatenate(rows), np.concatenate(cols))),
            shape=(dim, dim), dtype=complex,
        ).tocsr()
    else:
        matrix = sp.csr_matrix((dim, dim), dtype=complex)
    return matrix.toarray() if dense else matrix
