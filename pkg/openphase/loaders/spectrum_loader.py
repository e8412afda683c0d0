from typing import Optional

import numpy as np

from openphase.loaders.base_loader import Loader, LoaderType


class SpectrumLoader(Loader):
    """
    Sorted eigenvalues as text, one "Re Im" line per eigenvalue in round-trip precision.
    """

    def __init__(self, directory: str, name: str, eigenvalues: Optional[np.ndarray] = None) -> None:
        super().__init__(LoaderType.TEXT, directory)
        self.name: str = name
        self._eigenvalues = eigenvalues

    @property
    def path(self) -> str:
        return self.file_path(self.name)

    def extract(self):
        self._data = np.asarray(self._eigenvalues, dtype=complex)

    def transform(self):
        self._data = np.column_stack([self._data.real, self._data.imag])

    def load(self):
        np.savetxt(self._prepare(self.name), self._data, fmt='%.17g', header='Re Im')

    def read(self, with_run: bool = False) -> np.ndarray:
        if with_run:
            self.run()
        columns = np.loadtxt(self.path, ndmin=2)
        if columns.size == 0:
            return np.zeros(0, dtype=complex)
        return columns[:, 0] + 1j * columns[:, 1]
