import numpy as np
import pytest

from openphase.core.base.config import SizePolicy
from openphase.core.base.liouville import build_imag_superop
from openphase.loaders import SpectrumLoader, SuperoperatorLoader


def test_spectrum_round_trip(tmp_path):
    eigenvalues = np.array([-4.0, -2.0 + 1 / 3j, -2.0 - 1 / 3j, 0.1])
    loader = SpectrumLoader(str(tmp_path), 'spectrum', eigenvalues)
    np.testing.assert_array_equal(loader.read(with_run=True), eigenvalues)
    with open(loader.path, encoding='utf-8') as f:
        lines = f.read().splitlines()
    assert lines[0] == '# Re Im'
    assert len(lines) == 5


def test_superoperator_round_trip(tmp_path, corners):
    superop = build_imag_superop(corners['11'])
    matrix = SuperoperatorLoader(str(tmp_path), 'superop', superop).read(with_run=True)
    np.testing.assert_array_equal(matrix.toarray(), superop.to_dense())


def test_sparse_superoperator_round_trip(tmp_path, corners):
    superop = build_imag_superop(corners['01'], SizePolicy(superop_dense_max_qubits=2))
    assert not superop.is_dense
    matrix = SuperoperatorLoader(str(tmp_path), 'superop', superop).read(with_run=True)
    assert matrix.nnz == superop.matrix.count_nonzero()
    np.testing.assert_array_equal(matrix.toarray(), superop.to_dense())


def test_truncated_dump(tmp_path, corners):
    loader = SuperoperatorLoader(str(tmp_path), 'superop', build_imag_superop(corners['10']))
    loader.run()
    with open(loader.path, 'rb') as f:
        raw = f.read()
    with open(loader.path, 'wb') as f:
        f.write(raw[:-8])
    with pytest.raises(ValueError):
        loader.read()
