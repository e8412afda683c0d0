import pytest
import yaml

from openphase.core.base.settings import SweepConfig, SweepConfigException
from openphase.loaders import (SweepConfigLoader, load_sweep_config,
                               save_sweep_config)

CONFIG = """
model:
  kind: interpolated
  n_sites: 2
  boundary: pbc
grid:
  a_range: [0.0, 1.0]
  b_range: [0.2, 0.8]
  a_steps: 5
  b_steps: 4
solver:
  method: dense
observables:
  labels: [strong_indicator_K, weak_indicator_U, entanglement_entropy]
  cut_site: 1
output:
  formats: [csv]
workers: 2
"""


def write(tmp_path, text: str) -> str:
    path = tmp_path / 'sweep.yaml'
    path.write_text(text, encoding='utf-8')
    return str(path)


def test_load(tmp_path):
    config = load_sweep_config(write(tmp_path, CONFIG))
    assert config.model.n_sites == 2
    assert config.model.lattice().periodic
    assert config.grid.b_range == (0.2, 0.8)
    assert config.grid.size == 20
    assert config.observables.labels == ('K_abs', 'UU', 'EE')
    assert config.output.formats == ('csv',)
    assert config.workers == 2


def test_empty_file_gives_defaults(tmp_path):
    config = load_sweep_config(write(tmp_path, ""))
    assert config == SweepConfig()


@pytest.mark.parametrize("text", [
    "model:\n  sites: 2\n",
    "grid:\n  a_range: [0.5, 0.2]\n",
    "grid:\n  a_steps: 0\n",
    "model:\n  n_sites: 7\n",
    "model:\n  kind: corner\n",
    "observables:\n  labels: [magnetization]\n",
    "output:\n  formats: [parquet]\n",
    "plots: true\n",
    "- model\n- grid\n",
])
def test_invalid(tmp_path, text):
    with pytest.raises(SweepConfigException):
        load_sweep_config(write(tmp_path, text))


def test_dict_round_trip(tmp_path):
    config = load_sweep_config(write(tmp_path, CONFIG))
    assert SweepConfig.from_dict(config.to_dict()) == config


def test_save(tmp_path):
    config = load_sweep_config(write(tmp_path, CONFIG))
    path = save_sweep_config(config, str(tmp_path / 'out'))
    assert path == f'{tmp_path}/out/config.yaml'
    with open(path, encoding='utf-8') as f:
        assert yaml.safe_load(f)['grid']['a_steps'] == 5
    assert SweepConfigLoader(path).read() == config


def test_overrides(tmp_path):
    config = load_sweep_config(write(tmp_path, CONFIG))
    changed = config.with_overrides(n_sites=3, boundary='open', b_steps=2, workers=1, directory='out')
    assert changed.model.n_sites == 3
    assert changed.model.boundary == 'open'
    assert changed.grid.a_steps == 5 and changed.grid.b_steps == 2
    assert changed.output.directory == 'out'
    assert config.model.n_sites == 2
    assert config.with_overrides() == config
