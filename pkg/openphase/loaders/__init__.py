from openphase.loaders.base_loader import Loader, LoaderType
from openphase.loaders.config_loader import (SweepConfigLoader,
                                             load_sweep_config,
                                             save_sweep_config)
from openphase.loaders.report_loader import ReportLoader, emit
from openphase.loaders.spectrum_loader import SpectrumLoader
from openphase.loaders.structs import REPORT_COLUMNS, PointReport, PointTable
from openphase.loaders.superop_dump import SuperoperatorLoader

__all__ = [
    "Loader",
    "LoaderType",
    "SweepConfigLoader",
    "load_sweep_config",
    "save_sweep_config",
    "ReportLoader",
    "emit",
    "SpectrumLoader",
    "SuperoperatorLoader",
    "PointReport",
    "PointTable",
    "REPORT_COLUMNS",
]
