import numpy as np
import pytest

from openphase.core.base.lattice import (Boundary, LatticeException,
                                         LatticeSpec)
from openphase.core.base.pauli import PauliString


def test_invalid_sizes():
    with pytest.raises(LatticeException):
        LatticeSpec(0)
    with pytest.raises(LatticeException):
        LatticeSpec(2, 'twisted')


def test_boundary_aliases():
    assert LatticeSpec(2, 'pbc').periodic
    assert LatticeSpec(2, 'obc').boundary is Boundary.OPEN


def test_qubit_layout(pbc2):
    assert pbc2.n_qubits == 4
    assert pbc2.qubit_of_sigma(1) == 2
    assert pbc2.qubit_of_tau(1) == 3
    assert pbc2.site_of_qubit(3) == 1


def test_cluster_stabilizer_wraps():
    lattice = LatticeSpec(3)
    assert str(lattice.cluster_stabilizer(2)) == "ZIIIZX"
    assert str(lattice.dressed_flip(0)) == "XZIIIZ"


def test_open_boundary_drops_terms(obc2):
    assert obc2.cluster_stabilizer(1) is None
    assert obc2.dressed_flip(0) is None
    assert str(obc2.cluster_stabilizer(0)) == "ZXZI"
    assert str(obc2.dressed_flip(1)) == "IZXZ"


def test_symmetries(pbc2):
    assert str(pbc2.strong_symmetry()) == "IXIX"
    assert str(pbc2.weak_symmetry()) == "XIXI"


def test_string_operator(pbc4, obc2):
    assert str(obc2.string_operator(0, 1)) == "ZXZI"
    assert pbc4.string_operator(0, 2) == pbc4.product(pbc4.cluster_stabilizer(0), pbc4.cluster_stabilizer(1))
    with pytest.raises(LatticeException):
        obc2.string_operator(1, 2)
    with pytest.raises(LatticeException):
        pbc4.string_operator(0, 0)


def test_longest_span(pbc4, obc2):
    assert pbc4.longest_span() == 2
    assert obc2.longest_span() == 1


def test_distance_and_span(pbc4):
    assert pbc4.distance(0, 3) == 1
    assert LatticeSpec(4, 'open').distance(0, 3) == 3
    word = PauliString.parse("ZIIIIIXI")
    assert pbc4.support_span(word) == 2


def test_domain_wall_edges(pbc2):
    assert LatticeSpec(1).domain_wall_edges() == ()
    assert pbc2.domain_wall_edges() == ((0, 1), (0, 3), (1, 2), (2, 3))
    assert LatticeSpec(2, 'open').domain_wall_edges() == ((0, 1), (1, 2), (2, 3))


def test_domain_wall_diagonal(pbc2):
    diagonal = pbc2.domain_wall_diagonal()
    assert diagonal.shape == (16,)
    assert set(np.unique(diagonal)) == {-1.0, 1.0}
    # |1100>: only CZ(σ₀, τ₀) fires
    assert diagonal[0b1100] == -1.0
