from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import Optional, Tuple

import numpy as np

from openphase.core.base.pauli import PauliString, pauli_mul


class LatticeException(Exception):
    """
    Exception raised for invalid lattice descriptions or site indices.
    """


class Boundary(Enum):
    OPEN = 'open'
    PERIODIC = 'periodic'

    @classmethod
    def parse(cls, value: 'Boundary | str') -> 'Boundary':
        if isinstance(value, Boundary):
            return value
        aliases = {'open': cls.OPEN, 'obc': cls.OPEN, 'periodic': cls.PERIODIC, 'pbc': cls.PERIODIC}
        try:
            return aliases[str(value).lower()]
        except KeyError as e:
            raise LatticeException(f"Unknown boundary {value!r}, expected 'open' or 'periodic'.") from e


class Species(Enum):
    """
    The two spin-1/2 degrees of freedom of a unit cell.
    """
    SIGMA = 'sigma'
    TAU = 'tau'


@dataclass(frozen=True)
class LatticeSpec:
    """
    One-dimensional chain of N unit cells, each holding a σ spin on qubit 2i
    and a τ spin on qubit 2i+1. Tau index j stands for the spin between sites
    j and j+1, so τ_{i-1/2} is `tau(i - 1)` and τ_{i+1/2} is `tau(i)`.

    Under open boundaries any term whose support crosses the chain end is
    omitted: builders receive None for it.

    Attributes:
        n_sites (int): Number of unit cells N.
        boundary (Boundary): Open or periodic boundary.
    """
    n_sites: int
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        if not isinstance(self.n_sites, int) or self.n_sites < 1:
            raise LatticeException(f"Number of sites must be a positive integer, got {self.n_sites!r}.")
        object.__setattr__(self, 'boundary', Boundary.parse(self.boundary))

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_sites

    @property
    def periodic(self) -> bool:
        return self.boundary is Boundary.PERIODIC

    def qubit_of_sigma(self, i: int) -> int:
        return 2 * self._check_site(i)

    def qubit_of_tau(self, i: int) -> int:
        return 2 * self._check_site(i) + 1

    def site_of_qubit(self, qubit: int) -> int:
        if not 0 <= qubit < self.n_qubits:
            raise LatticeException(f"Qubit {qubit} out of range for {self.n_qubits} qubits.")
        return qubit // 2

    def _check_site(self, i: int) -> int:
        if not 0 <= i < self.n_sites:
            raise LatticeException(f"Site {i} out of range for {self.n_sites} sites.")
        return i

    def wrap(self, i: int) -> Optional[int]:
        """
        Map a site index onto the chain, or None if it falls off an open end.
        """
        if self.periodic:
            return i % self.n_sites
        return i if 0 <= i < self.n_sites else None

    def sigma(self, i: int, letter: str) -> Optional[PauliString]:
        site = self.wrap(i)
        if site is None:
            return None
        return PauliString.single(self.n_qubits, self.qubit_of_sigma(site), letter)

    def tau(self, i: int, letter: str) -> Optional[PauliString]:
        site = self.wrap(i)
        if site is None:
            return None
        return PauliString.single(self.n_qubits, self.qubit_of_tau(site), letter)

    def product(self, *words: Optional[PauliString]) -> Optional[PauliString]:
        """
        Exact product of words, None if any factor is missing.
        """
        if any(word is None for word in words):
            return None
        return reduce(pauli_mul, words, PauliString.identity(self.n_qubits))

    def cluster_stabilizer(self, i: int) -> Optional[PauliString]:
        """
        σᶻ_i τˣ_{i+1/2} σᶻ_{i+1}.
        """
        return self.product(self.sigma(i, 'Z'), self.tau(i, 'X'), self.sigma(i + 1, 'Z'))

    def dressed_flip(self, i: int) -> Optional[PauliString]:
        """
        τᶻ_{i-1/2} σˣ_i τᶻ_{i+1/2}.
        """
        return self.product(self.tau(i - 1, 'Z'), self.sigma(i, 'X'), self.tau(i, 'Z'))

    def strong_symmetry(self) -> PauliString:
        """
        K = Π τˣ.
        """
        return self.product(*(self.tau(i, 'X') for i in range(self.n_sites)))

    def weak_symmetry(self) -> PauliString:
        """
        U = Π σˣ.
        """
        return self.product(*(self.sigma(i, 'X') for i in range(self.n_sites)))

    def string_operator(self, i: int, j: int) -> PauliString:
        """
        σᶻ_i τˣ_{i+1/2} ⋯ τˣ_{j-1/2} σᶻ_j for i < j. Under periodic boundaries
        j may run past the last site and wraps; the span must stay below N.

        Raises:
            LatticeException: If the span is empty or does not fit on the chain.
        """
        self._check_site(i)
        limit = i + self.n_sites - 1 if self.periodic else self.n_sites - 1
        if not i < j <= limit:
            raise LatticeException(f"Invalid string span ({i}, {j}) on {self.n_sites} {self.boundary.value} sites.")
        taus = [self.tau(k, 'X') for k in range(i, j)]
        return self.product(self.sigma(i, 'Z'), *taus, self.sigma(j, 'Z'))

    def longest_span(self) -> int:
        return self.n_sites // 2 if self.periodic else self.n_sites - 1

    def distance(self, i: int, j: int) -> int:
        """
        Site separation; chord convention min(r, N - r) under periodic boundaries.
        """
        r = abs(self._check_site(i) - self._check_site(j))
        return min(r, self.n_sites - r) if self.periodic else r

    def support_span(self, word: PauliString) -> int:
        """
        Number of consecutive sites covered by the smallest window containing the word.
        """
        sites = sorted({self.site_of_qubit(q) for q in word.support})
        if not sites:
            return 0
        if not self.periodic:
            return sites[-1] - sites[0] + 1
        gaps = [(sites[(k + 1) % len(sites)] - sites[k]) % self.n_sites or self.n_sites
                for k in range(len(sites))]
        return self.n_sites - max(gaps) + 1

    def sites(self) -> Tuple[int, ...]:
        return tuple(range(self.n_sites))

    def domain_wall_edges(self) -> Tuple[Tuple[int, int], ...]:
        """
        Qubit pairs of the CZ gates CZ(σ_i, τ_{i+1/2}) and CZ(τ_{i+1/2}, σ_{i+1}).
        Coinciding gates cancel, so a single periodic site has no edges.
        """
        edges = {}
        for i in range(self.n_sites):
            pairs = [(self.qubit_of_sigma(i), self.qubit_of_tau(i))]
            right = self.wrap(i + 1)
            if right is not None:
                pairs.append((self.qubit_of_tau(i), self.qubit_of_sigma(right)))
            for pair in pairs:
                key = tuple(sorted(pair))
                edges[key] = edges.get(key, 0) ^ 1
        return tuple(sorted(edge for edge, present in edges.items() if present))

    def domain_wall_diagonal(self) -> np.ndarray:
        """
        ±1 diagonal of the product of domain-wall CZ gates in the computational basis.
        """
        basis = np.arange(1 << self.n_qubits, dtype=np.int64)
        parity = np.zeros_like(basis)
        for a, b in self.domain_wall_edges():
            bit_a = (basis >> (self.n_qubits - 1 - a)) & 1
            bit_b = (basis >> (self.n_qubits - 1 - b)) & 1
            parity ^= bit_a & bit_b
        return (1 - 2 * parity).astype(float)
