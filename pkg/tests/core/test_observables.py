import numpy as np
import pytest

from openphase.core.base.lattice import Boundary, LatticeSpec, Species
from openphase.core.base.liouville import (DensityMatrix, SuperVector,
                                           build_imag_superop, vectorize)
from openphase.core.base.pauli import OperatorSum, PauliString
from openphase.core.models import build_corner, corner_state
from openphase.core.observables import (CorrelationSeries,
                                        ObservableException,
                                        connected_correlator, corr_linear,
                                        corr_renyi2, correlation_series,
                                        expect_linear, expect_renyi2,
                                        fit_corr_length, string_order,
                                        strong_symmetry_indicator,
                                        supervector_entanglement,
                                        weak_symmetry_indicator)
from openphase.core.spectral import extremal_spectrum, steady_state


def series(values, boundary: Boundary = Boundary.PERIODIC) -> CorrelationSeries:
    return CorrelationSeries('linear:sigma:Z', np.arange(len(values)), np.asarray(values), boundary)


class TestExpectations:

    def test_linear(self):
        rho = DensityMatrix(np.diag([0.75, 0.25]).astype(complex))
        assert expect_linear(rho, PauliString.parse("Z")) == pytest.approx(0.5)
        assert expect_linear(rho, OperatorSum.from_words([(2.0, "Z"), (1.0, "I")])) == pytest.approx(2.0)
        assert expect_linear(rho, np.eye(2)) == pytest.approx(1.0)

    def test_renyi2(self):
        rho = DensityMatrix(np.diag([0.75, 0.25]).astype(complex))
        # Tr[ρZρZ] / Tr[ρ²] = 1 for a diagonal state
        assert expect_renyi2(rho, PauliString.parse("Z")).real == pytest.approx(1.0)
        # Tr[ρXρX] / Tr[ρ²] = 2·0.75·0.25 / 0.625
        assert expect_renyi2(rho, PauliString.parse("X")).real == pytest.approx(0.6)

    def test_size_mismatch(self):
        with pytest.raises(ObservableException):
            expect_linear(DensityMatrix.maximally_mixed(1), PauliString.parse("ZZ"))
        with pytest.raises(ObservableException):
            expect_linear(DensityMatrix.maximally_mixed(1), np.eye(4))


class TestIndicators:

    @pytest.mark.parametrize("label", ['00', '01', '10', '11'])
    def test_symmetries_at_corners(self, pbc2, label):
        rho = corner_state(label, pbc2)
        assert strong_symmetry_indicator(rho, pbc2.strong_symmetry()) == pytest.approx(1.0)
        assert weak_symmetry_indicator(rho, pbc2.weak_symmetry()) == pytest.approx(1.0)

    def test_weak_but_not_strong(self, pbc2):
        rho = corner_state('11', pbc2)
        assert strong_symmetry_indicator(rho, pbc2.weak_symmetry()) == pytest.approx(0.0, abs=1e-12)

    def test_string_order(self, pbc2, pbc4):
        assert string_order(corner_state('11', pbc2), pbc2) == pytest.approx(1.0)
        assert string_order(corner_state('01', pbc4), pbc4) == pytest.approx(1.0)
        assert string_order(corner_state('00', pbc2), pbc2) == pytest.approx(0.0, abs=1e-12)
        assert string_order(corner_state('10', pbc2), pbc2) == pytest.approx(0.0, abs=1e-12)

    def test_string_order_invalid_span(self, pbc2):
        with pytest.raises(ObservableException):
            string_order(corner_state('11', pbc2), pbc2, 0, 0)

    def test_non_unitary(self, pbc2):
        rho = corner_state('00', pbc2)
        with pytest.raises(ObservableException):
            strong_symmetry_indicator(rho, 2.0 * np.eye(16))


class TestCorrelations:

    def test_pair_correlators(self, pbc2):
        rho = corner_state('10', pbc2)
        assert corr_linear(rho, pbc2, 'Z', 0, 0).real == pytest.approx(1.0)
        assert corr_linear(rho, pbc2, 'Z', 0, 1).real == pytest.approx(0.0, abs=1e-12)
        assert corr_renyi2(rho, pbc2, 'X', 0, 1, Species.TAU).real == pytest.approx(0.0, abs=1e-12)
        with pytest.raises(ObservableException):
            corr_linear(rho, pbc2, 'Z', 0, 2)

    def test_arbitrary_operators(self, pbc2):
        bell = DensityMatrix.from_pure(np.array([1.0, 0.0, 0.0, 1.0]))
        z_left, z_right = PauliString.parse("ZI"), PauliString.parse("IZ")
        assert connected_correlator(bell, z_left, z_right).real == pytest.approx(1.0)
        assert connected_correlator(bell, z_left, z_right, kind='renyi2').real == pytest.approx(1.0)
        up = np.diag([1.0, 0.0])
        assert connected_correlator(bell, np.kron(up, np.eye(2)), np.kron(np.eye(2), up)).real == pytest.approx(0.25)
        rho = corner_state('10', pbc2)
        o_i, o_j = pbc2.tau(0, 'X'), pbc2.tau(1, 'X')
        assert connected_correlator(rho, o_i, o_j, kind='renyi2') == pytest.approx(
            corr_renyi2(rho, pbc2, 'X', 0, 1, Species.TAU), abs=1e-12)

    def test_arbitrary_operators_invalid(self):
        bell = DensityMatrix.from_pure(np.array([1.0, 0.0, 0.0, 1.0]))
        with pytest.raises(ObservableException):
            connected_correlator(bell, PauliString.parse("Z"), PauliString.parse("IZ"))
        with pytest.raises(ObservableException):
            connected_correlator(bell, PauliString.parse("ZI"), PauliString.parse("IZ"), kind='cubic')

    def test_series_lengths(self, pbc4):
        open3 = LatticeSpec(3, 'open')
        assert len(correlation_series(corner_state('10', pbc4), pbc4).separations) == 3
        assert len(correlation_series(corner_state('10', open3), open3, kind='renyi2').separations) == 3

    def test_unknown_kind(self, pbc2):
        with pytest.raises(ObservableException):
            correlation_series(corner_state('10', pbc2), pbc2, kind='cubic')

    def test_non_increasing_separations(self):
        with pytest.raises(ObservableException):
            CorrelationSeries('x', np.array([0, 2, 1]), np.zeros(3), Boundary.OPEN)


class TestCorrelationFit:

    def test_exponential(self):
        fit = fit_corr_length(series(np.exp(-np.arange(5) / 2.0)))
        assert fit.xi == pytest.approx(2.0)
        assert not fit.infinite and not fit.no_signal
        assert fit.quality == pytest.approx(1.0)
        assert fit.n_points == 5

    def test_flat(self):
        fit = fit_corr_length(series(np.full(4, 0.3)))
        assert fit.infinite
        assert np.isinf(fit.xi)

    def test_no_signal(self):
        fit = fit_corr_length(series([1.0, 0.0, 0.0, 0.0]))
        assert fit.no_signal
        assert np.isnan(fit.xi)

    def test_too_short(self):
        with pytest.raises(ObservableException):
            fit_corr_length(series([1.0, 0.5]))


class TestEntanglement:

    def test_cluster(self, pbc4):
        report = supervector_entanglement(vectorize(corner_state('01', pbc4)), 2, pbc4)
        assert report.leading_degeneracy == 16
        assert report.cut_degeneracy == 4
        assert report.entropy == pytest.approx(np.log(16))
        assert report.schmidt_probs.sum() == pytest.approx(1.0)

    def test_decohered_cluster(self, pbc4):
        report = supervector_entanglement(vectorize(corner_state('11', pbc4)), 2, pbc4)
        assert report.leading_degeneracy == 4
        assert report.cut_degeneracy == 2
        assert report.entropy == pytest.approx(np.log(4))

    def test_product(self, pbc4):
        report = supervector_entanglement(vectorize(corner_state('00', pbc4)), 2, pbc4)
        assert report.cut_degeneracy == 1
        assert report.entropy == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.slow
    @pytest.mark.parametrize("label,leading,per_cut", [('01', 16, 4), ('11', 4, 2)])
    def test_solved_steady_supervector(self, pbc4, label, leading, per_cut):
        superop = build_imag_superop(build_corner(label, pbc4))
        rho = steady_state(extremal_spectrum(superop, k=4, seed=0)).rho
        report = supervector_entanglement(vectorize(rho), 2, pbc4)
        assert report.leading_degeneracy == leading
        assert report.cut_degeneracy == per_cut
        assert report.entropy == pytest.approx(np.log(leading), abs=1e-6)
        assert report.gap_ratio > 1e3

    def test_invalid_cut(self, pbc2):
        vector = vectorize(corner_state('00', pbc2))
        with pytest.raises(ObservableException):
            supervector_entanglement(vector, 0)
        with pytest.raises(ObservableException):
            supervector_entanglement(vector, 2)
        with pytest.raises(ObservableException):
            supervector_entanglement(vector, 1, LatticeSpec(3))

    def test_zero_vector(self):
        with pytest.raises(ObservableException):
            supervector_entanglement(SuperVector(np.zeros(256, dtype=complex)), 1)
