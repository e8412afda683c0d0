import numpy as np
import pytest

from openphase.core.base.config import DimensionOverflowException, SizePolicy
from openphase.core.base.generator import GeneratorException, LindbladGenerator
from openphase.core.base.lattice import LatticeSpec
from openphase.core.base.liouville import (DensityMatrix, Ordering,
                                           SuperoperatorException,
                                           SuperVector, apply_imag_generator,
                                           apply_real_generator,
                                           build_imag_superop,
                                           build_real_superop, devectorize,
                                           gibbs_term_superop, reorder,
                                           s_conjugate, s_conjugate_superop,
                                           vectorize)
from openphase.core.base.pauli import OperatorSum, PauliString, realize
from openphase.core.models import (InterpolationParams, build_corner,
                                   build_interpolated)


def random_density(rng: np.random.Generator, n_qubits: int) -> DensityMatrix:
    dim = 1 << n_qubits
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    matrix = a @ a.conj().T
    return DensityMatrix(matrix / np.trace(matrix))


class TestGenerator:

    def test_rejects_non_hermitian_hamiltonian(self):
        with pytest.raises(GeneratorException):
            LindbladGenerator(OperatorSum.from_words([(1j, "X")]))

    def test_rejects_mixed_sizes(self):
        with pytest.raises(GeneratorException):
            LindbladGenerator(OperatorSum.from_words([(1.0, "XX")]), (OperatorSum.from_words([(1.0, "Z")]),))

    def test_rejects_long_range_terms(self):
        lattice = LatticeSpec(4, 'open')
        word = lattice.product(lattice.sigma(0, 'Z'), lattice.sigma(3, 'Z'))
        with pytest.raises(GeneratorException):
            LindbladGenerator(OperatorSum.from_pauli(word), (), lattice)

    def test_effective_hamiltonians(self, corners):
        gen = corners['11']
        # four unitary jumps on two sites
        assert gen.has_unitary_jumps()
        assert gen.scalar_shift == pytest.approx(-4.0)
        expected = gen.hamiltonian - 2.0 * OperatorSum.identity(gen.n_qubits)
        assert gen.effective_hamiltonian_imag().is_close(expected)


class TestVectorization:

    def test_sandwich_convention(self, rng):
        rho = random_density(rng, 2)
        a = realize(OperatorSum.from_words([(0.4, "XY"), (1.0, "ZI")]))
        b = realize(OperatorSum.from_words([(0.3j, "YZ"), (-0.2, "IX")]))
        left = vectorize(a @ rho.matrix @ b.conj().T).data
        right = np.kron(a, b.conj()) @ vectorize(rho).data
        np.testing.assert_allclose(left, right, atol=1e-12)

    def test_devectorize_inverts(self, rng):
        rho = random_density(rng, 2)
        np.testing.assert_allclose(devectorize(vectorize(rho)), rho.matrix)

    def test_interleaved_round_trip(self, rng):
        vector = vectorize(random_density(rng, 3))
        interleaved = reorder(vector, Ordering.INTERLEAVED)
        assert interleaved.ordering is Ordering.INTERLEAVED
        np.testing.assert_allclose(reorder(interleaved, Ordering.BLOCKED).data, vector.data)
        np.testing.assert_allclose(devectorize(interleaved), devectorize(vector))

    def test_interleaved_groups_ket_and_bra(self):
        # ρ = |0⟩⟨1| ⊗ |0⟩⟨0|: blocked (k0 k1 b0 b1) = 0010, interleaved (k0 b0 k1 b1) = 0100
        rho = np.zeros((4, 4), dtype=complex)
        rho[0b00, 0b10] = 1.0
        interleaved = reorder(vectorize(rho), Ordering.INTERLEAVED).data
        assert interleaved[0b0100] == 1.0

    def test_s_conjugate_is_dagger(self, rng):
        matrix = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        np.testing.assert_allclose(devectorize(s_conjugate(vectorize(matrix))), matrix.conj().T)

    def test_bad_lengths(self):
        with pytest.raises(SuperoperatorException):
            SuperVector(np.ones(8))
        with pytest.raises(SuperoperatorException):
            DensityMatrix(np.ones((3, 3)))

    def test_validate(self):
        DensityMatrix.maximally_mixed(2).validate()
        with pytest.raises(SuperoperatorException):
            DensityMatrix(np.diag([1.5, -0.5])).validate()


class TestSuperoperators:

    @pytest.mark.parametrize("label", ['00', '01', '10', '11'])
    def test_imag_matches_operator_form(self, corners, rng, label):
        gen = corners[label]
        superop = build_imag_superop(gen)
        rho = random_density(rng, gen.n_qubits)
        np.testing.assert_allclose(devectorize(superop.apply(vectorize(rho))),
                                   apply_imag_generator(gen, rho.matrix), atol=1e-10)

    def test_real_matches_operator_form(self, rabi, rng):
        superop = build_real_superop(rabi)
        rho = random_density(rng, 1)
        np.testing.assert_allclose(devectorize(superop.apply(vectorize(rho))),
                                   apply_real_generator(rabi, rho.matrix), atol=1e-12)

    def test_real_time_preserves_trace(self, corners):
        superop = build_real_superop(corners['11'])
        identity = vectorize(np.eye(1 << superop.n_qubits)).data
        np.testing.assert_allclose(identity.conj() @ superop.to_dense(), 0, atol=1e-10)

    def test_imag_is_hermitian_and_s_symmetric(self, corners, rabi):
        superop = build_imag_superop(build_interpolated(InterpolationParams(0.3, 0.6), LatticeSpec(2)))
        assert superop.is_hermitian()
        np.testing.assert_allclose(s_conjugate_superop(superop), superop.matrix, atol=1e-12)
        rabi_superop = build_imag_superop(rabi)
        assert not rabi_superop.is_hermitian()
        np.testing.assert_allclose(s_conjugate_superop(rabi_superop), rabi_superop.matrix, atol=1e-12)

    @pytest.mark.parametrize("d_tau", [1e-3, 0.1])
    def test_euler_step_preserves_hermiticity(self, rabi, rng, d_tau):
        for gen in (rabi, build_interpolated(InterpolationParams(0.3, 0.6), LatticeSpec(2))):
            superop = build_imag_superop(gen)
            rho = random_density(rng, gen.n_qubits)
            vector = vectorize(rho).data
            stepped = devectorize(SuperVector(vector - d_tau * superop.apply(vectorize(rho)).data))
            np.testing.assert_allclose(stepped, stepped.conj().T, atol=1e-12)

    def test_shift_recorded(self, corners):
        assert build_imag_superop(corners['10']).shift == pytest.approx(-4.0)
        assert build_imag_superop(corners['00']).shift == 0.0

    def test_convex_combination_of_corners(self, pbc2):
        a, b = 0.35, 0.8
        superop = build_imag_superop(build_interpolated(InterpolationParams(a, b), pbc2)).to_dense()
        weights = {'00': (1 - a) * (1 - b), '01': (1 - a) * b, '10': a * (1 - b), '11': a * b}
        combined = sum(w * build_imag_superop(build_corner(label, pbc2)).to_dense() for label, w in weights.items())
        np.testing.assert_allclose(superop, combined, atol=1e-12)

    def test_gibbs_term_spectrum(self):
        gamma = 0.7
        superop = gibbs_term_superop(PauliString.parse("Z"), PauliString.parse("X"), gamma)
        eigenvalues = np.sort(np.linalg.eigvalsh(superop.to_dense()))
        root = np.sqrt(gamma ** 2 + 4)
        np.testing.assert_allclose(eigenvalues, [-root, -gamma, gamma, root], atol=1e-12)

    def test_sparse_above_threshold(self, pbc2):
        policy = SizePolicy(superop_dense_max_qubits=2)
        superop = build_imag_superop(build_corner('11', pbc2), policy)
        assert not superop.is_dense
        np.testing.assert_allclose(superop.to_dense(), build_imag_superop(build_corner('11', pbc2)).matrix)

    def test_overflow(self, pbc2):
        with pytest.raises(DimensionOverflowException):
            build_imag_superop(build_corner('00', pbc2), SizePolicy(superop_max_qubits=3))
