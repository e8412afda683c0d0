import numpy as np
import pytest

from openphase.loaders import (REPORT_COLUMNS, LoaderType, PointReport,
                               ReportLoader, emit)


def test_empty_reports(tmp_path):
    loader = ReportLoader(str(tmp_path), LoaderType.CSV, [])
    assert loader.read(with_run=True) == []
    with open(loader.path, encoding='utf-8') as f:
        assert f.read().splitlines() == [','.join(REPORT_COLUMNS)]


def test_single_report(tmp_path):
    report = PointReport(a=0.1, b=0.2, N=3, boundary='periodic', gap=1 / 3, K_abs=0.5)
    loader = ReportLoader(str(tmp_path), LoaderType.CSV, [report])
    data = loader.read(with_run=True)
    with open(loader.path, encoding='utf-8') as f:
        lines = f.read().splitlines()
    assert len(lines) == 2
    assert lines[1].startswith('0.10000000000000001,0.20000000000000001,3,periodic,0.33333333333333331,False,0.5,')
    assert data[0].N == 3
    assert data[0].gap == pytest.approx(1 / 3, rel=1e-15)
    assert np.isnan(data[0].UU)


def test_json_keeps_every_field(tmp_path):
    report = PointReport(a=0.0, b=1.0, N=2, boundary='open', xi1_flag='no_signal', error='boom')
    data = ReportLoader(str(tmp_path), LoaderType.JSON, [report]).read(with_run=True)
    assert data[0].xi1_flag == 'no_signal'
    assert data[0].error == 'boom'
    assert data[0].failed


def test_emit(tmp_path):
    reports = [PointReport(a=0.0, b=b, N=2, boundary='periodic') for b in (0.0, 1.0)]
    paths = emit(reports, str(tmp_path), ('csv', 'json'), name='grid')
    assert paths == [f'{tmp_path}/grid.csv', f'{tmp_path}/grid.json']
