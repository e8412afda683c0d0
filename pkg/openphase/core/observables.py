from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np
import scipy.linalg as la
from scipy.stats import linregress

from openphase.core.base.config import DEFAULT_POLICY, SizePolicy
from openphase.core.base.lattice import (Boundary, LatticeException,
                                         LatticeSpec, Species)
from openphase.core.base.liouville import (DensityMatrix, Ordering,
                                           SuperVector, reorder)
from openphase.core.base.pauli import OperatorSum, PauliString, realize

Observable = Union[OperatorSum, PauliString, np.ndarray]

QUBITS_PER_SITE: int = 2
SIGNAL_FLOOR: float = 1e-12
FLAT_SLOPE: float = 1e-6
ES_LEVEL_TOL: float = 1e-6
ES_ZERO: float = 1e-14


class ObservableException(Exception):
    """
    Exception raised for invalid observables, indices or states.
    """


def _matrix(rho: DensityMatrix, operator: Observable, policy: SizePolicy) -> np.ndarray:
    if isinstance(operator, (OperatorSum, PauliString)):
        if operator.n_qubits != rho.n_qubits:
            raise ObservableException(f"Operator acts on {operator.n_qubits} qubits, state on {rho.n_qubits}.")
        return realize(operator, policy, sparse=False)
    matrix = np.asarray(operator, dtype=complex)
    if matrix.shape != rho.matrix.shape:
        raise ObservableException(f"Operator shape {matrix.shape} does not match state shape {rho.matrix.shape}.")
    return matrix


def expect_linear(rho: DensityMatrix, operator: Observable, policy: SizePolicy = DEFAULT_POLICY) -> complex:
    """
    Tr[ρO].
    """
    matrix = _matrix(rho, operator, policy)
    return complex(np.einsum('ij,ji->', rho.matrix, matrix))


def _purity(rho: DensityMatrix) -> float:
    purity = rho.purity()
    if purity <= 0:
        raise ObservableException("State has zero purity.")
    return purity


def expect_renyi2(rho: DensityMatrix, operator: Observable, policy: SizePolicy = DEFAULT_POLICY) -> complex:
    """
    Tr[ρOρO†] / Tr[ρ²], the doubled-space expectation of O ⊗ O*.
    """
    matrix = _matrix(rho, operator, policy)
    return complex(np.trace(rho.matrix @ matrix @ rho.matrix @ matrix.conj().T)) / _purity(rho)


def _site_operator(lattice: LatticeSpec, letter: str, i: int, species: Species) -> PauliString:
    if not 0 <= i < lattice.n_sites:
        raise ObservableException(f"Site {i} out of range for {lattice.n_sites} sites.")
    return lattice.sigma(i, letter) if species is Species.SIGMA else lattice.tau(i, letter)


def connected_correlator(rho: DensityMatrix, o_i: Observable, o_j: Observable, kind: str = 'linear',
                         policy: SizePolicy = DEFAULT_POLICY) -> complex:
    """
    Connected correlator of two arbitrary operators on the full register.

    Args:
        rho (DensityMatrix): State.
        o_i (Observable): First operator, as a Pauli word, a sum or a matrix.
        o_j (Observable): Second operator, same forms.
        kind (str): 'linear' for ⟨O_iO_j⟩ - ⟨O_i⟩⟨O_j⟩, 'renyi2' for the
            doubled-space version built from O ⊗ O*.
        policy (SizePolicy): Realization limits.

    Returns:
        complex: The correlator.

    Raises:
        ObservableException: For an unknown kind or operators of the wrong size.
    """
    expect = {'linear': expect_linear, 'renyi2': expect_renyi2}.get(kind)
    if expect is None:
        raise ObservableException(f"Unknown correlator kind {kind!r}, expected 'linear' or 'renyi2'.")
    m_i = _matrix(rho, o_i, policy)
    m_j = _matrix(rho, o_j, policy)
    return expect(rho, m_i @ m_j) - expect(rho, m_i) * expect(rho, m_j)


def _pair(lattice: LatticeSpec, letter: str, i: int, j: int, species: Species) -> Tuple[PauliString, PauliString]:
    return _site_operator(lattice, letter, i, species), _site_operator(lattice, letter, j, species)


def corr_linear(rho: DensityMatrix, lattice: LatticeSpec, letter: str, i: int, j: int,
                species: Species = Species.SIGMA) -> complex:
    """
    C⁽¹⁾(i, j) = ⟨O_i O_j⟩ - ⟨O_i⟩⟨O_j⟩ for a single-qubit Pauli O placed on sites i and j.
    """
    return connected_correlator(rho, *_pair(lattice, letter, i, j, species), kind='linear')


def corr_renyi2(rho: DensityMatrix, lattice: LatticeSpec, letter: str, i: int, j: int,
                species: Species = Species.SIGMA) -> complex:
    """
    C⁽²⁾(i, j) = ⟨⟨O_iO_j ⊗ O_i*O_j*⟩⟩ - ⟨⟨O_i ⊗ O_i*⟩⟩⟨⟨O_j ⊗ O_j*⟩⟩.
    """
    return connected_correlator(rho, *_pair(lattice, letter, i, j, species), kind='renyi2')


@dataclass
class CorrelationSeries:
    """
    Connected correlator as a function of separation.

    Attributes:
        label (str): Observable label, e.g. "linear:sigma:Z".
        separations (np.ndarray): Strictly increasing distances.
        values (np.ndarray): Correlator per distance.
        boundary (Boundary): Boundary of the chain.
    """
    label: str
    separations: np.ndarray
    values: np.ndarray
    boundary: Boundary

    def __post_init__(self):
        self.separations = np.asarray(self.separations, dtype=int)
        self.values = np.asarray(self.values, dtype=complex)
        if np.any(np.diff(self.separations) <= 0):
            raise ObservableException("Separations must be strictly increasing.")


def correlation_series(rho: DensityMatrix, lattice: LatticeSpec, letter: str = 'Z',
                       species: Species = Species.SIGMA, kind: str = 'linear') -> CorrelationSeries:
    """
    Correlator at every distance r. Under periodic boundaries r runs over the
    chord distances 0..⌊N/2⌋ averaged over all sites; under open boundaries
    r = 0..N-1 measured from site 0.
    """
    correlator = {'linear': corr_linear, 'renyi2': corr_renyi2}.get(kind)
    if correlator is None:
        raise ObservableException(f"Unknown correlator kind {kind!r}, expected 'linear' or 'renyi2'.")
    if lattice.periodic:
        separations = list(range(lattice.n_sites // 2 + 1))
        values = [np.mean([correlator(rho, lattice, letter, i, (i + r) % lattice.n_sites, species)
                           for i in lattice.sites()]) for r in separations]
    else:
        separations = list(range(lattice.n_sites))
        values = [correlator(rho, lattice, letter, 0, r, species) for r in separations]
    return CorrelationSeries(f"{kind}:{species.value}:{letter}", np.array(separations), np.array(values),
                             lattice.boundary)


@dataclass
class CorrelationFit:
    """
    Exponential fit |C(r)| ~ e^{-r/ξ}.

    Attributes:
        xi (float): Correlation length; inf when flat, nan without signal.
        infinite (bool): Slope at or above -1e-6.
        quality (float): Coefficient of determination of the log-linear fit.
        no_signal (bool): Fewer than three values above the floor.
        n_points (int): Points used.
    """
    xi: float
    infinite: bool
    quality: float
    no_signal: bool
    n_points: int


def fit_corr_length(series: CorrelationSeries, floor: float = SIGNAL_FLOOR) -> CorrelationFit:
    """
    Least-squares slope of ln|C| against r over values above `floor`.

    Raises:
        ObservableException: If the series has fewer than three separations.
    """
    if len(series.separations) < 3:
        raise ObservableException(f"Need at least 3 separations to fit, got {len(series.separations)}.")
    magnitudes = np.abs(series.values)
    usable = magnitudes > floor
    if np.count_nonzero(usable) < 3:
        return CorrelationFit(float('nan'), False, float('nan'), True, int(np.count_nonzero(usable)))
    fit = linregress(series.separations[usable].astype(float), np.log(magnitudes[usable]))
    quality = float(fit.rvalue ** 2) if np.isfinite(fit.rvalue) else 1.0
    if fit.slope >= -FLAT_SLOPE:
        return CorrelationFit(float('inf'), True, quality, False, int(np.count_nonzero(usable)))
    return CorrelationFit(float(-1.0 / fit.slope), False, quality, False, int(np.count_nonzero(usable)))


def string_order(rho: DensityMatrix, lattice: LatticeSpec, i: int = 0, j: Optional[int] = None) -> float:
    """
    ⟨σᶻ_i τˣ_{i+1/2} ⋯ τˣ_{j-1/2} σᶻ_j⟩, by default over the longest span.

    Raises:
        ObservableException: For an invalid span.
    """
    if j is None:
        j = i + lattice.longest_span()
    try:
        word = lattice.string_operator(i, j)
    except LatticeException as e:
        raise ObservableException(str(e)) from e
    return float(expect_linear(rho, word).real)


def _check_unitary(rho: DensityMatrix, operator: Observable, tol: float = 1e-10) -> np.ndarray:
    matrix = _matrix(rho, operator, DEFAULT_POLICY)
    defect = np.max(np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0])))
    if defect > tol:
        raise ObservableException(f"Symmetry operator is not unitary (defect {defect:.3e}).")
    return matrix


def strong_symmetry_indicator(rho: DensityMatrix, symmetry: Observable) -> float:
    """
    |Tr[ρK]|; equals one iff Kρ = e^{iθ}ρ.
    """
    return float(abs(expect_linear(rho, _check_unitary(rho, symmetry))))


def weak_symmetry_indicator(rho: DensityMatrix, symmetry: Observable) -> float:
    """
    Tr[ρUρU†] / Tr[ρ²]; equals one iff UρU† = ρ.
    """
    return float(expect_renyi2(rho, _check_unitary(rho, symmetry)).real)


@dataclass
class EntanglementReport:
    """
    Schmidt spectrum of a normalized supervector across a spatial cut.

    Attributes:
        cut_site (int): Sites [0, cut_site) form the left block.
        schmidt_probs (np.ndarray): Descending probabilities summing to one.
        entropy (float): -Σ p ln p.
        degeneracies (Tuple[int, ...]): Sizes of the leading levels.
        boundaries (int): Number of entanglement boundaries the cut crosses.
        gap_ratio (float): Ratio of the last leading probability to the next level.
    """
    cut_site: int
    schmidt_probs: np.ndarray
    entropy: float
    degeneracies: Tuple[int, ...]
    boundaries: int
    gap_ratio: float

    @property
    def leading_degeneracy(self) -> int:
        return self.degeneracies[0] if self.degeneracies else 0

    @property
    def cut_degeneracy(self) -> int:
        """
        Leading degeneracy per boundary; a periodic cut crosses the chain twice.
        """
        return int(round(self.leading_degeneracy ** (1.0 / self.boundaries)))


def _levels(probs: np.ndarray, tol: float) -> List[int]:
    levels: List[int] = []
    start = 0
    for k in range(1, len(probs) + 1):
        if k == len(probs) or (probs[k - 1] - probs[k]) > tol * probs[k - 1]:
            levels.append(k - start)
            start = k
    return levels


def supervector_entanglement(vector: SuperVector, cut_site: int, lattice: Optional[LatticeSpec] = None,
                             level_tol: float = ES_LEVEL_TOL) -> EntanglementReport:
    """
    Schmidt decomposition of |ρ⟩⟩ between the ket and bra qubits of sites
    below `cut_site` and those of the rest of the chain.

    Raises:
        ObservableException: For a zero vector or a cut outside 1..N-1.
    """
    n_sites = vector.n_qubits // QUBITS_PER_SITE
    if lattice is not None and lattice.n_qubits != vector.n_qubits:
        raise ObservableException(f"Vector holds {vector.n_qubits} qubits, lattice {lattice.n_qubits}.")
    if not 1 <= cut_site <= n_sites - 1:
        raise ObservableException(f"Cut {cut_site} must lie in 1..{n_sites - 1}.")
    norm = vector.norm
    if norm == 0:
        raise ObservableException("Cannot compute entanglement of a zero vector.")
    interleaved = reorder(vector, Ordering.INTERLEAVED).data / norm
    left = 4 ** (QUBITS_PER_SITE * cut_site)
    probs = la.svdvals(interleaved.reshape(left, -1)) ** 2
    probs = np.sort(probs)[::-1]
    probs = probs[probs > ES_ZERO]
    probs = probs / probs.sum()
    entropy = float(-np.sum(probs * np.log(probs)))
    degeneracies = tuple(_levels(probs, level_tol))
    leading = degeneracies[0]
    gap_ratio = float('inf') if leading >= len(probs) else float(probs[leading - 1] / probs[leading])
    boundaries = 2 if lattice is not None and lattice.periodic else 1
    return EntanglementReport(cut_site, probs, max(entropy, 0.0), degeneracies, boundaries, gap_ratio)
