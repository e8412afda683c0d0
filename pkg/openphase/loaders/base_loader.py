import os
from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Optional


class LoaderType(Enum):
    CSV = 1
    JSON = 2
    YAML = 3
    TEXT = 4
    BINARY = 5


EXTENSIONS = {
    LoaderType.CSV: 'csv',
    LoaderType.JSON: 'json',
    LoaderType.YAML: 'yaml',
    LoaderType.TEXT: 'txt',
    LoaderType.BINARY: 'bin',
}


class Loader(ABC):
    """
    Extract-transform-load cycle over one artifact file in `directory`.
    """

    def __init__(self, loader_type: LoaderType, directory: Optional[str] = None, *args, **kwargs) -> None:
        if loader_type not in LoaderType:
            raise ValueError(f"Loader type {loader_type} not supported")
        self.loader_type: LoaderType = loader_type
        self._data: Any = None
        self._directory: str = directory if directory is not None else os.getcwd()

    @abstractmethod
    def extract(self):
        raise NotImplementedError

    @abstractmethod
    def transform(self):
        raise NotImplementedError

    @abstractmethod
    def load(self):
        raise NotImplementedError

    @abstractmethod
    def read(self, with_run: bool = False):
        raise NotImplementedError

    @property
    def directory(self) -> str:
        return self._directory

    def file_path(self, *args) -> str:
        file_name = '_'.join(args)
        return f'{self._directory}/{file_name}.{EXTENSIONS[self.loader_type]}'

    def _prepare(self, *args) -> str:
        if not os.path.exists(self._directory):
            os.makedirs(self._directory)
        return self.file_path(*args)

    def run(self):
        self.extract()
        self.transform()
        self.load()
