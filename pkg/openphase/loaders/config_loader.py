from typing import Optional

import yaml

from openphase.core.base.settings import SweepConfig, SweepConfigException
from openphase.loaders.base_loader import Loader, LoaderType


class SweepConfigLoader(Loader):
    """
    Reads a sweep description from YAML (safe loader) and validates it. When
    `directory` is given, `load` stores the resolved configuration next to
    the sweep outputs.
    """

    def __init__(self, config_path: str, directory: Optional[str] = None) -> None:
        super().__init__(LoaderType.YAML, directory)
        self.config_path: str = config_path
        self._store: bool = directory is not None
        self._config: Optional[SweepConfig] = None

    def extract(self):
        with open(self.config_path, 'r', encoding='utf-8') as f:
            self._data = yaml.safe_load(f)
        if self._data is None:
            self._data = {}
        if not isinstance(self._data, dict):
            raise SweepConfigException(f"{self.config_path} must hold a mapping of blocks.")

    def transform(self):
        self._config = SweepConfig.from_dict(self._data).validate()

    def load(self):
        if self._store:
            with open(self._prepare('config'), 'w', encoding='utf-8') as f:
                yaml.safe_dump(self._config.to_dict(), f, sort_keys=False)

    def read(self, with_run: bool = False) -> SweepConfig:
        if with_run or self._config is None:
            self.run()
        return self._config


def load_sweep_config(path: str) -> SweepConfig:
    return SweepConfigLoader(path).read(with_run=True)


def save_sweep_config(config: SweepConfig, directory: str) -> str:
    """
    Store the resolved configuration as `config.yaml` in `directory`.
    """
    loader = SweepConfigLoader(config_path='', directory=directory)
    loader._config = config  # pylint: disable=protected-access
    loader.load()
    return loader.file_path('config')
