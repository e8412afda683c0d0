import json
from typing import List, Optional, Sequence

import pandas as pd
from loguru import logger

from openphase.loaders.base_loader import Loader, LoaderType
from openphase.loaders.structs import PointReport, PointTable

FLOAT_FORMAT: str = '%.17g'


class ReportLoader(Loader):
    """
    Writes and reads point reports.

    CSV files carry exactly the fixed report columns with doubles in
    round-trip precision. JSON files hold one object per report with every
    field, including the ξ quality flags and the error message.
    """

    def __init__(self, directory: str, loader_type: LoaderType = LoaderType.CSV,
                 reports: Optional[Sequence[PointReport]] = None, name: str = 'sweep') -> None:
        if loader_type not in (LoaderType.CSV, LoaderType.JSON):
            raise ValueError(f"Loader type {loader_type} not supported for reports")
        super().__init__(loader_type, directory)
        self._reports: List[PointReport] = list(reports or [])
        self.name: str = name

    @property
    def path(self) -> str:
        return self.file_path(self.name)

    def extract(self):
        self._data = list(self._reports)

    def transform(self):
        if self.loader_type == LoaderType.CSV:
            self._data = PointTable(self._data)
        else:
            self._data = [report.to_dict() for report in self._data]

    def load(self):
        path = self._prepare(self.name)
        if self.loader_type == LoaderType.CSV:
            self._data.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        else:
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(self._data, f, indent=1)
        logger.debug(f"wrote {len(self._reports)} reports to {path}")

    def read(self, with_run: bool = False) -> List[PointReport]:
        """
        Reads the reports back.

        Args:
            with_run (bool, optional): If True, writes the reports before reading. Defaults to False.

        Returns:
            List[PointReport]: Reports in file order; CSV rows fill only the fixed columns.
        """
        if with_run:
            self.run()
        if self.loader_type == LoaderType.JSON:
            with open(self.path, 'r', encoding='utf-8') as f:
                return [PointReport.from_dict(row) for row in json.load(f)]
        table = pd.read_csv(self.path)
        reports = []
        for row in table.to_dict(orient='records'):
            row.update(N=int(row['N']), boundary=str(row['boundary']), ground_real=bool(row['ground_real']))
            reports.append(PointReport.from_dict(row))
        return reports


def emit(reports: Sequence[PointReport], directory: str, formats: Sequence[str] = ('csv', 'json'),
         name: str = 'sweep') -> List[str]:
    """
    Write the reports in every requested format and return the file paths.
    """
    types = {'csv': LoaderType.CSV, 'json': LoaderType.JSON}
    paths = []
    for fmt in formats:
        loader = ReportLoader(directory, types[fmt], reports, name)
        loader.run()
        paths.append(loader.path)
    return paths
