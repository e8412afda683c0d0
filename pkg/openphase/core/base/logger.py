import os
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Optional
from uuid import uuid4

from loguru import logger


class BaseLogger(ABC):
    """
    Per-run logger owning an artifact directory.
    """

    def __init__(self, base_artifacts_path: Optional[str] = None, class_name: Optional[str] = None):
        self._id: str = str(uuid4())
        if class_name is None:
            class_name = self.__class__.__name__
        self._init_base_path(base_artifacts_path=base_artifacts_path, class_name=class_name)
        self._setup_logger()

    @abstractmethod
    def _init_base_path(self, *args, base_artifacts_path: Optional[str] = None, **kwargs):
        raise NotImplementedError

    @abstractmethod
    def _setup_logger(self, *args, **kwargs):
        raise NotImplementedError

    @abstractmethod
    def debug(self, message: str):
        raise NotImplementedError

    @property
    def run_id(self) -> str:
        return self._id

    @property
    @abstractmethod
    def base_artifacts_path(self) -> str:
        raise NotImplementedError

    @property
    @abstractmethod
    def logs_path(self) -> str:
        raise NotImplementedError

    @property
    @abstractmethod
    def datasets_path(self) -> str:
        raise NotImplementedError


class DefaultLogger(BaseLogger):
    """
    Writes `logs/logs.log` under `runs/<class_name>/<uuid>`, rooted at
    OPENPHASE_RUNS_PATH or the working directory unless a base path is given.
    """

    def _init_base_path(self, base_artifacts_path: Optional[str] = None, class_name: Optional[str] = None):
        if base_artifacts_path is None:
            base_path: str = os.getenv("OPENPHASE_RUNS_PATH", "")
            if base_path == "":
                base_path = os.getcwd()
            base_artifacts_path = f'{base_path}/runs/{class_name}/{self._id}'
        path = Path(base_artifacts_path)
        path.mkdir(parents=True, exist_ok=True)
        self._base_artifacts_path = path.absolute().as_posix()

    def _setup_logger(self):
        """
        Attach a file sink for this run; records from other runs are filtered out.
        """
        logs_base_path: str = self.logs_path
        Path(logs_base_path).mkdir(parents=True, exist_ok=True)
        Path(self.datasets_path).mkdir(parents=True, exist_ok=True)
        loggformat = "{time:YYYY-MM-DD HH:mm:ss} | {message}"
        run_id = self._id
        self._sink_id = logger.add(
            f'{logs_base_path}/logs.log',
            format=loggformat,
            level="DEBUG",
            filter=lambda record: record["extra"].get("run_id") == run_id,
        )
        self._logger = logger.bind(run_id=run_id)

    @property
    def base_artifacts_path(self) -> str:
        return self._base_artifacts_path

    @property
    def logs_path(self) -> str:
        return f'{self.base_artifacts_path}/logs'

    @property
    def datasets_path(self) -> str:
        return f'{self.base_artifacts_path}/datasets'

    def debug(self, message: str):
        """
        Log a debug message.
        """
        self._logger.debug(message)

    def info(self, message: str):
        self._logger.info(message)

    def close(self):
        """
        Detach the file sink. Safe to call more than once.
        """
        if self._sink_id is None:
            return
        logger.remove(self._sink_id)
        self._sink_id = None
