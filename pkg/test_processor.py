"""
Tests for model configuration parsing and validation
"""

import io
import json

import pytest

from data import fixtures
from data.models import Stable, StableBoundary, TemperedStable, TruncatedStable, Mixture
from data.processor import ModelConfigProcessor, SchemaError, parse_grid, parse_config, parse_model
from calculations.levy_model import calibrated_stable_scale


def paths(error: SchemaError):
    return [path for path, _ in error.errors]


def test_linear_and_log_grids():
    assert parse_grid('-1:1:5') == [-1.0, -0.5, 0.0, 0.5, 1.0]
    grid = parse_grid('1e-2:1e2:5,log')
    assert grid[0] == 1e-2
    assert grid[2] == pytest.approx(1.0, rel=1e-14)
    assert grid[-1] == pytest.approx(1e2, rel=1e-14)
    assert parse_grid('3:3:1') == [3.0]


@pytest.mark.parametrize('spec', ['1:2', '2:1:5', '0:1:3,log', 'a:b:3', '0:1:0', '0:1:3,cubic'])
def test_malformed_grids(spec):
    with pytest.raises(SchemaError) as info:
        parse_grid(spec)
    assert paths(info.value) == ['grid']


def test_stable_document_gets_calibrated_scale_and_centered_drift():
    model = parse_model(json.dumps(fixtures.model_documents()['stable']))
    assert isinstance(model.jumps, Stable)
    assert model.jumps.scale == pytest.approx(calibrated_stable_scale(1.5), rel=1e-14)
    assert model.b == pytest.approx(fixtures.stable(1.5).b, rel=1e-12)


def test_reference_documents_parse():
    kinds = {'brownian': type(None), 'stable': Stable, 'stable_boundary': StableBoundary,
             'tempered': TemperedStable, 'truncated': TruncatedStable}
    for name, document in fixtures.model_documents().items():
        model = parse_model(json.dumps(document))
        assert isinstance(model.jumps, kinds[name])


def test_mixture_components():
    document = {'sigma': 0, 'b': 'centered',
                'jumps': {'family': 'mixture',
                          'components': [{'family': 'stable', 'alpha': 1.5},
                                         {'family': 'tempered_stable', 'alpha': 1.2, 'theta': 1.0}]}}
    model = parse_model(json.dumps(document))
    assert isinstance(model.jumps, Mixture)
    assert len(model.jumps.components) == 2
    assert model.x0 == 1.0


def test_every_problem_is_reported_with_its_path():
    document = {'sigma': -1, 'b': 'fast', 'colour': 'red',
                'jumps': {'family': 'stable', 'alpha': 2.5, 'theta': 1}}
    with pytest.raises(SchemaError) as info:
        parse_model(json.dumps(document))
    assert set(paths(info.value)) == {'colour', 'sigma', 'b', 'jumps.alpha', 'jumps.theta'}


def test_no_process_is_rejected():
    with pytest.raises(SchemaError) as info:
        parse_model('{"sigma": 0, "b": 0}')
    assert info.value.errors == [('jumps', 'no process: sigma = 0 and no jumps')]


def test_unknown_family_and_bad_mixture_member():
    with pytest.raises(SchemaError) as info:
        parse_model('{"sigma": 1, "b": 0, "jumps": {"family": "gamma"}}')
    assert paths(info.value) == ['jumps.family']

    document = {'sigma': 0, 'b': 0,
                'jumps': {'family': 'mixture', 'components': [{'family': 'stable', 'alpha': 1.5},
                                                              {'family': 'truncated_stable', 'alpha': 0.5}]}}
    with pytest.raises(SchemaError) as info:
        parse_model(json.dumps(document))
    assert paths(info.value) == ['jumps.components[1].cutoff']


def test_boundary_centering_and_bad_tempering():
    document = {'sigma': 0, 'b': 'centered', 'jumps': {'family': 'stable_boundary'}}
    assert parse_model(json.dumps(document)).b == pytest.approx(0.5772156649015329 - 1.0, rel=1e-14)
    document = {'sigma': 0, 'b': 'centered', 'jumps': {'family': 'tempered_stable', 'alpha': 0.5, 'theta': 0.0}}
    with pytest.raises(SchemaError) as info:
        parse_model(json.dumps(document))
    assert paths(info.value) == ['jumps.theta']


def test_invalid_json_is_a_schema_error():
    with pytest.raises(SchemaError) as info:
        parse_model('{"sigma": 1,')
    assert 'invalid JSON' in str(info.value)


def test_run_document_with_overrides():
    document = {'model': fixtures.model_documents()['brownian'], 'command': 'density',
                'grid': '-1:1:3', 't': 0.5}
    config = parse_config(json.dumps(document), {'t': 2.0, 'method': 'oracle', 'out': None})
    assert config.command == 'density'
    assert config.t == 2.0
    assert config.grid == [-1.0, 0.0, 1.0]
    assert config.method == 'oracle'
    assert config.out is None


def test_run_options_are_validated_together():
    document = {'model': {'sigma': -1, 'b': 0}, 'command': 'plot', 'target': 'K',
                'scan_range': [2, 1], 'rel_tol': 3, 'extra': 1}
    with pytest.raises(SchemaError) as info:
        parse_config(json.dumps(document))
    assert set(paths(info.value)) == {'model.sigma', 'command', 'target', 'scan_range', 'rel_tol', 'extra'}


def test_suite_and_what_lists():
    config = parse_config(json.dumps(fixtures.model_documents()['stable']),
                          {'command': 'check', 'suite': 'EQ43, INEQ_20', 'what': 'phi,Phi'})
    assert config.suite == ('EQ43', 'INEQ_20')
    assert config.what == ('phi', 'Phi')


def test_load_model_from_file_and_buffer(tmp_path):
    path = tmp_path / 'model.json'
    path.write_text(json.dumps(fixtures.model_documents()['tempered']), encoding='utf-8')
    processor = ModelConfigProcessor()
    model = processor.load_model_config(str(path))
    assert processor.last_loaded_model is model
    assert isinstance(model.jumps, TemperedStable)
    buffered = processor.load_model_config(io.StringIO(path.read_text(encoding='utf-8')))
    assert buffered == model
    with pytest.raises(SchemaError) as info:
        processor.load_model_config(str(tmp_path / 'missing.json'))
    assert paths(info.value) == ['config']


def test_schema_error_serializes():
    error = SchemaError([('sigma', 'must be >= 0: -1.0')])
    assert error.to_dict() == [{'path': 'sigma', 'reason': 'must be >= 0: -1.0'}]
    assert str(error) == 'sigma: must be >= 0: -1.0'
