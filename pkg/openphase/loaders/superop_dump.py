from typing import Optional

import numpy as np
import scipy.sparse as sp

from openphase.core.base.liouville import Superoperator
from openphase.loaders.base_loader import Loader, LoaderType

HEADER_DTYPE = np.dtype('<i8')
ENTRY_DTYPE = np.dtype([('row', '<i8'), ('col', '<i8'), ('value', '<c16')])


class SuperoperatorLoader(Loader):
    """
    Binary dump of a superoperator matrix: little-endian int64 dimension and
    int64 entry count, then (int64 row, int64 col, complex128 value) triplets
    of the nonzero entries in row-major order.
    """

    def __init__(self, directory: str, name: str, superop: Optional[Superoperator] = None) -> None:
        super().__init__(LoaderType.BINARY, directory)
        self.name: str = name
        self._superop: Optional[Superoperator] = superop
        self._dim: int = 0

    @property
    def path(self) -> str:
        return self.file_path(self.name)

    def extract(self):
        matrix = sp.csr_matrix(self._superop.matrix)
        matrix.eliminate_zeros()
        self._dim = matrix.shape[0]
        self._data = matrix.tocoo()

    def transform(self):
        coo = self._data
        order = np.lexsort((coo.col, coo.row))
        entries = np.empty(len(order), dtype=ENTRY_DTYPE)
        entries['row'] = coo.row[order]
        entries['col'] = coo.col[order]
        entries['value'] = coo.data[order]
        self._data = entries

    def load(self):
        with open(self._prepare(self.name), 'wb') as f:
            f.write(np.array([self._dim, len(self._data)], dtype=HEADER_DTYPE).tobytes())
            f.write(self._data.tobytes())

    def read(self, with_run: bool = False) -> sp.csr_matrix:
        """
        Returns:
            sp.csr_matrix: The dumped matrix.

        Raises:
            ValueError: If the file is truncated.
        """
        if with_run:
            self.run()
        with open(self.path, 'rb') as f:
            raw = f.read()
        dim, nnz = np.frombuffer(raw[:2 * HEADER_DTYPE.itemsize], dtype=HEADER_DTYPE)
        body = raw[2 * HEADER_DTYPE.itemsize:]
        if len(body) != nnz * ENTRY_DTYPE.itemsize:
            raise ValueError(f"Superoperator dump {self.path} is truncated: expected {nnz} entries.")
        entries = np.frombuffer(body, dtype=ENTRY_DTYPE)
        return sp.csr_matrix((entries['value'], (entries['row'], entries['col'])), shape=(int(dim), int(dim)))
