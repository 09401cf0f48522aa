"""
Tests for CSV and JSON export
"""

import io
import json
import math

import pandas as pd
import pytest

from data import fixtures
from data.models import CheckReport, ScalingReport
from ui.export import ExportManager, ExportError, read_csv


def test_exponent_table_round_trips_at_full_precision():
    exporter = ExportManager(fixtures.stable(1.5))
    grid = [0.1, 1.0 / 3.0, 2.0]
    values = {'phi': [g ** 1.5 for g in grid], 'Phi': [0.75 * g ** 1.5 for g in grid]}
    text = exporter.export_exponents_to_csv(grid, values)
    lines = text.splitlines()
    assert lines[0] == '# Laplace exponent table'
    assert lines[1].startswith('# model: {')
    assert '# x - argument' in lines

    frame = read_csv(io.StringIO(text))
    assert list(frame.columns) == ['x', 'phi', 'Phi']
    assert frame['x'].tolist() == grid
    assert frame['phi'].tolist() == values['phi']


def test_missing_values_are_written_as_nan():
    exporter = ExportManager()
    rows = [{'x': -1.0, 'p_asym': 0.25, 'hardness': 6.0, 'w': 4.0},
            {'x': 1.0, 'p_asym': math.nan, 'hardness': math.nan, 'w': math.nan}]
    text = exporter.export_densities_to_csv(rows, 1.0, 'asym')
    assert '# t: 1.0' in text
    assert '# method: asym' in text
    assert '1,nan,nan,nan' in text
    frame = read_csv(io.StringIO(text))
    assert math.isnan(frame['p_asym'][1])
    assert frame['hardness'][0] == 6.0


def test_empty_frames_are_refused():
    with pytest.raises(ExportError):
        ExportManager().frame_to_csv(pd.DataFrame(), 'nothing', {})


def test_csv_written_to_file(tmp_path):
    target = tmp_path / 'table.csv'
    result = ExportManager().export_exponents_to_csv([1.0, 2.0], {'phi': [1.0, 4.0]}, str(target))
    assert result == str(target)
    assert read_csv(target)['phi'].tolist() == [1.0, 4.0]


def test_check_reports_are_strict_json():
    reports = [CheckReport('INEQ_20', 'log grid', 'passed', 0.5, {'C': 0.5}),
               CheckReport('INEQ_47', '', 'skipped', notes='hypothesis failed: theta0 > 0'),
               CheckReport('EQ43', 'log grid', 'failed', math.inf, {'C': math.inf})]
    summary = {'total': 3, 'passed': 1, 'failed': 1, 'skipped': 1, 'ok': False}
    text = ExportManager(fixtures.brownian()).export_check_reports(reports, summary)
    document = json.loads(text)
    assert document['summary'] == summary
    assert [r['check_id'] for r in document['reports']] == ['INEQ_20', 'INEQ_47', 'EQ43']
    assert document['reports'][1]['worst_ratio'] == 'nan'
    assert document['reports'][2]['empirical_constants']['C'] == 'inf'
    assert document['model'] == {'sigma': 1.0, 'b': 0.0, 'x0': 0.0}


def test_scaling_report_document():
    report = ScalingReport('Phi', (1e-3, 1e3), 2.0, 2.0, 1.0, 1.0, 385)
    document = json.loads(ExportManager().export_scaling_report(report))
    assert document['alpha_hat'] == 2.0
    assert document['scan_range'] == [1e-3, 1e3]
    assert not document['degenerate']
