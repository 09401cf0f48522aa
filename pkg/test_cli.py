"""
End-to-end tests of the spd command line
"""

import io
import json
import math

import pytest

import spd_cli
from data import fixtures
from analysis import validation
from analysis.validation import CheckOutcome
from calculations.saddlepoint import stable_saddle_reference
from ui.export import read_csv
from app_config import EXIT_OK, EXIT_SCHEMA, EXIT_NUMERICAL, EXIT_HYPOTHESIS


@pytest.fixture
def config_file(tmp_path):
    def write(name, document=None):
        path = tmp_path / f'{name}.json'
        path.write_text(json.dumps(document or fixtures.model_documents()[name]), encoding='utf-8')
        return str(path)
    return write


def error_payload(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


def test_exponent_table_to_stdout(config_file, capsys):
    code = spd_cli.main(['exponent', '--config', config_file('brownian'), '--grid', '1:4:4', '--what', 'phi,Phi'])
    assert code == EXIT_OK
    frame = read_csv(io.StringIO(capsys.readouterr().out))
    assert frame['x'].tolist() == [1.0, 2.0, 3.0, 4.0]
    assert frame['phi'].tolist() == [1.0, 4.0, 9.0, 16.0]
    assert frame['Phi'].tolist() == [2.0, 8.0, 18.0, 32.0]


def test_exponent_table_to_file(config_file, tmp_path):
    out = tmp_path / 'phi.csv'
    code = spd_cli.main(['exponent', '--config', config_file('stable'), '--out', str(out)])
    assert code == EXIT_OK
    frame = read_csv(out)
    assert list(frame.columns) == ['x'] + spd_cli.DEFAULT_WHAT.split(',')
    assert frame['x'].iloc[0] == pytest.approx(1e-3, rel=1e-14)
    for x, phi in zip(frame['x'], frame['phi']):
        assert phi == pytest.approx(x ** 1.5, rel=1e-10)


def test_unknown_function_is_a_schema_error(config_file, capsys):
    code = spd_cli.main(['exponent', '--config', config_file('brownian'), '--what', 'phi,zeta'])
    assert code == EXIT_SCHEMA
    payload = error_payload(capsys)
    assert payload['error'] == 'SchemaError'
    assert payload['details'][0]['path'] == 'what'


def test_invalid_model_reports_paths(config_file, capsys):
    path = config_file('bad', {'sigma': -1, 'b': 0})
    assert spd_cli.main(['scaling', '--config', path]) == EXIT_SCHEMA
    assert error_payload(capsys)['details'] == [{'path': 'sigma', 'reason': 'must be >= 0: -1.0'}]


def test_missing_config_file(tmp_path, capsys):
    code = spd_cli.main(['scaling', '--config', str(tmp_path / 'absent.json')])
    assert code == EXIT_SCHEMA
    assert error_payload(capsys)['error'] == 'FileNotFoundError'


def test_missing_required_flag_exits_from_argparse(config_file):
    with pytest.raises(SystemExit) as info:
        spd_cli.main(['density', '--config', config_file('stable'), '--t', '1'])
    assert info.value.code == 2


def test_asymptotic_density_sweep(config_file, capsys):
    code = spd_cli.main(['density', '--config', config_file('stable'), '--t', '1',
                         '--x-grid=-3:1:5', '--method', 'asym'])
    assert code == EXIT_OK
    frame = read_csv(io.StringIO(capsys.readouterr().out))
    assert list(frame.columns) == ['x', 'p_asym', 'hardness', 'w']
    assert frame['p_asym'][0] == pytest.approx(stable_saddle_reference(1.5, 1.0, -3.0), rel=1e-10)
    assert frame['hardness'][0] == pytest.approx(6.0, rel=1e-10)
    assert math.isnan(frame['p_asym'][3])


def test_all_methods_for_brownian_motion(config_file, capsys, caplog):
    code = spd_cli.main(['density', '--config', config_file('brownian'), '--t', '1',
                         '--x-grid=-2:0:3', '--method', 'all'])
    assert code == EXIT_OK
    assert 'Envelope columns left empty' in caplog.text
    frame = read_csv(io.StringIO(capsys.readouterr().out))
    for x, p in zip(frame['x'], frame['p_oracle']):
        assert p == pytest.approx(fixtures.gaussian_density(1.0, x), rel=1e-8)
    assert frame['ratio_oracle_asym'][0] == pytest.approx(1.0, rel=1e-8)
    assert frame['envelope_value'].isna().all()


def test_envelope_outside_hypotheses_exits_four(config_file, capsys):
    code = spd_cli.main(['density', '--config', config_file('brownian'), '--t', '1',
                         '--x-grid', '0:1:3', '--method', 'envelope'])
    assert code == EXIT_HYPOTHESIS
    payload = error_payload(capsys)
    assert payload['error'] == 'HypothesisViolationError'
    assert payload['details'] == {'hypothesis': 'sigma = 0'}


def test_check_writes_report(config_file, tmp_path, capsys):
    report = tmp_path / 'report.json'
    code = spd_cli.main(['check', '--config', config_file('stable'), '--suite', 'INEQ_20,INEQ_47,COR4',
                         '--points-per-decade', '8', '--report', str(report)])
    assert code == EXIT_OK
    assert json.loads(capsys.readouterr().out) == {'total': 3, 'passed': 2, 'failed': 0, 'skipped': 1}
    document = json.loads(report.read_text(encoding='utf-8'))
    assert [r['status'] for r in document['reports']] == ['passed', 'skipped', 'passed']
    assert document['summary']['ok']


def test_failed_check_exits_three(config_file, capsys, monkeypatch):
    validation._load_catalog()
    failing = validation._Registered('PROP9', lambda ctx: CheckOutcome(False, 9.0, {'C': 9.0}), False)
    monkeypatch.setitem(validation._REGISTRY, 'PROP9', failing)
    code = spd_cli.main(['check', '--config', config_file('stable'), '--suite', 'PROP9', '--no-refine'])
    assert code == EXIT_NUMERICAL
    document = json.loads(capsys.readouterr().out)
    assert document['summary']['failed_checks'] == ['PROP9']


def test_unknown_check_id(config_file, capsys):
    code = spd_cli.main(['check', '--config', config_file('stable'), '--suite', 'THM9'])
    assert code == EXIT_SCHEMA
    assert error_payload(capsys)['error'] == 'GridError'


def test_scaling_report(config_file, capsys):
    code = spd_cli.main(['scaling', '--config', config_file('brownian'), '--target', 'Phi',
                         '--scan-range', '0.1:10'])
    assert code == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert document['alpha_hat'] == pytest.approx(2.0, abs=1e-10)
    assert document['scan_range'] == [0.1, 10.0]


def test_malformed_scan_range(config_file, capsys):
    code = spd_cli.main(['scaling', '--config', config_file('brownian'), '--scan-range', '10'])
    assert code == EXIT_SCHEMA
    assert error_payload(capsys)['details'][0]['path'] == 'scan_range'
