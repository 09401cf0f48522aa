"""
Tests for the certification catalog and its runners
"""

import math

import numpy as np
import pytest

from data import fixtures
from data.models import GridSpec
from calculations.exponents import ExponentSuite
from analysis import validation
from analysis.validation import (CATALOG, CheckContext, CheckOutcome, GridError, SkipCheck,
                                 comparability, run_check, run_suite, spread)
from app_config import (FLAT_MAX_SPREAD, SANDWICH_MAX_SPREAD, TAIL_LAW_BAND, TAIL_LAW_LIMIT_BAND)

COARSE = GridSpec(points_per_decade=8)


def test_every_catalog_id_is_registered(stable_suite):
    run_check(stable_suite, 'INEQ_20', COARSE)
    assert len(CATALOG) == 32
    assert set(validation._REGISTRY) == set(CATALOG)


def test_unknown_ids_are_grid_errors(stable_suite):
    with pytest.raises(GridError):
        run_check(stable_suite, 'THM9')
    with pytest.raises(GridError):
        run_suite(stable_suite, ['INEQ_20', 'NOPE'])


def test_stable_inequalities_pass(stable_suite):
    report = run_check(stable_suite, 'INEQ_20', COARSE)
    assert report.status == 'passed'
    assert report.worst_ratio == pytest.approx(2.0 / 3.0, rel=1e-10)

    report = run_check(stable_suite, 'COR4', COARSE)
    assert report.passed
    assert report.empirical_constants['C_lower'] == pytest.approx(2.0 / math.sqrt(math.pi), rel=1e-10)

    report = run_check(stable_suite, 'EQ42', COARSE)
    assert report.passed
    assert report.empirical_constants['max_relative_error'] <= 1e-6


def test_stability_checks_record_refinement_drift(stable_suite):
    report = run_check(stable_suite, 'EQ63', COARSE)
    assert report.passed
    assert report.empirical_constants['x_phi2_over_phi1_min'] == pytest.approx(0.5, rel=1e-10)
    assert report.empirical_constants['refinement_drift'] < 1e-10

    unrefined = run_check(stable_suite, 'EQ63', GridSpec(points_per_decade=8, refine=False))
    assert 'refinement_drift' not in unrefined.empirical_constants


def test_failed_hypotheses_skip_with_a_note(stable_suite, brownian_suite):
    report = run_check(stable_suite, 'INEQ_47', COARSE)
    assert report.skipped
    assert report.notes == 'hypothesis failed: theta0 > 0'

    report = run_check(brownian_suite, 'THM2_UB', COARSE)
    assert report.skipped
    assert report.notes == 'hypothesis failed: sigma = 0'


def test_gaussian_saddle_ratio_is_one(brownian_suite):
    report = run_check(brownian_suite, 'THM1_RATIO', COARSE)
    assert report.passed
    assert report.empirical_constants['final_hardness'] >= 1e5
    assert report.empirical_constants['final_ratio'] == pytest.approx(1.0, abs=1e-6)


def test_suite_reports_in_catalog_order(stable_suite):
    reports, summary = run_suite(stable_suite, ['COR4', 'INEQ_47', 'INEQ_20'], COARSE)
    assert [r.check_id for r in reports] == ['INEQ_20', 'INEQ_47', 'COR4']
    assert summary['total'] == 3
    assert summary['passed'] == 2
    assert summary['skipped'] == 1
    assert summary['ok']
    assert summary['failed_checks'] == []


def test_failing_check_is_reported(stable_suite, monkeypatch):
    validation._load_catalog()

    def always_wrong(ctx):
        return CheckOutcome(False, math.inf, {'C': math.inf}, notes='forced')

    monkeypatch.setitem(validation._REGISTRY, 'PROP9', validation._Registered('PROP9', always_wrong, False))
    reports, summary = run_suite(stable_suite, ['PROP9'], COARSE)
    assert reports[0].status == 'failed'
    assert not summary['ok']
    assert summary['failed_checks'] == ['PROP9']


def test_scan_range_respects_anchor(tempered_suite):
    ctx = CheckContext(tempered_suite, GridSpec(lo=1e-2, hi=10.0))
    assert ctx.scan_range() == (1.0, 10.0)
    with pytest.raises(GridError):
        CheckContext(tempered_suite, GridSpec(lo=1e-2, hi=0.5)).scan_range()


def test_context_require_raises_skip(stable_suite):
    ctx = CheckContext(stable_suite, COARSE)
    ctx.require(True, 'fine')
    with pytest.raises(SkipCheck):
        ctx.require(False, 'theta0 > 0')


def test_comparability_helpers():
    lo, hi, width = spread(np.array([0.5, 1.0, 2.0]))
    assert (lo, hi, width) == (0.5, 2.0, 4.0)
    outcome = comparability('r', np.array([0.5, 2.0]))
    assert outcome.ok
    assert outcome.tracked == ('r_min', 'r_max')
    assert not comparability('r', np.array([0.0, 1.0])).ok
    with pytest.raises(SkipCheck):
        comparability('r', np.array([]))


def test_comparability_spread_bound():
    assert comparability('r', np.array([1.0, 9.0]), max_spread=10.0).ok
    outcome = comparability('r', np.array([1.0, 12.0]), max_spread=10.0)
    assert not outcome.ok
    assert outcome.worst_ratio == pytest.approx(12.0)


def test_stable_prop5_ratio_is_the_index(stable_suite):
    report = run_check(stable_suite, 'PROP5', COARSE)
    assert report.passed
    assert report.empirical_constants['min_ratio'] == pytest.approx(1.5, rel=1e-10)
    assert report.empirical_constants['C'] == pytest.approx(1.5, rel=1e-10)


EXACT_CHECKS = ['EQ43', 'COR4', 'EQ42', 'EQ17_45_72', 'INEQ_20', 'PROP5']
STABILITY_CHECKS = ['EQ44', 'PROP7', 'PROP8', 'PROP10', 'REM2', 'REM5', 'COR2', 'EQ63']


@pytest.fixture(params=['brownian', 'tempered', 'mixture'])
def reference_suite(request):
    return request.getfixturevalue(f'{request.param}_suite')


@pytest.mark.slow
@pytest.mark.parametrize('check_id', EXACT_CHECKS)
def test_exact_constant_checks_on_reference_models(reference_suite, check_id):
    report = run_check(reference_suite, check_id)
    assert report.status in ('passed', 'skipped'), report.notes


@pytest.mark.slow
@pytest.mark.parametrize('check_id', EXACT_CHECKS)
def test_exact_constant_checks_apply_to_stable_models(check_id):
    for alpha in (1.2, 1.5, 1.8):
        report = run_check(ExponentSuite(fixtures.stable(alpha)), check_id)
        assert report.passed, f'alpha={alpha}: {report.notes}'


@pytest.mark.slow
@pytest.mark.parametrize('suite_name', ['stable_suite', 'tempered_suite'])
@pytest.mark.parametrize('check_id', STABILITY_CHECKS)
def test_stability_checks_hold_under_refinement(request, suite_name, check_id):
    report = run_check(request.getfixturevalue(suite_name), check_id)
    assert report.status in ('passed', 'skipped'), report.notes
    if report.passed:
        assert report.empirical_constants.get('refinement_drift', 0.0) < 0.05


@pytest.mark.slow
@pytest.mark.parametrize('suite_name', ['stable_suite', 'tempered_suite'])
def test_saddle_ratio_reaches_target_hardness(request, suite_name):
    report = run_check(request.getfixturevalue(suite_name), 'THM1_RATIO', COARSE)
    assert report.passed, report.notes
    constants = report.empirical_constants
    assert constants['final_hardness'] >= 1e5
    assert abs(constants['final_ratio'] - 1.0) < 0.01
    assert abs(constants['ratio_at_hardness_1e3'] - 1.0) < 0.05


@pytest.mark.slow
def test_stable_density_checks_meet_their_bounds(stable_suite):
    flat = run_check(stable_suite, 'THM3_FLAT', COARSE)
    assert flat.passed, flat.notes
    assert flat.worst_ratio < FLAT_MAX_SPREAD

    sandwich = run_check(stable_suite, 'THM4_SANDWICH', COARSE)
    assert sandwich.passed, sandwich.notes
    assert sandwich.empirical_constants['overall_spread'] < SANDWICH_MAX_SPREAD

    tail = run_check(stable_suite, 'LEM4_LB', COARSE)
    assert tail.passed, tail.notes
    assert TAIL_LAW_BAND[0] <= tail.empirical_constants['c']
    assert tail.empirical_constants['max_ratio'] <= TAIL_LAW_BAND[1]
    lo, hi = TAIL_LAW_LIMIT_BAND
    assert lo <= tail.empirical_constants['last_decile_mean'] <= hi


@pytest.mark.slow
def test_stable_density_checks_pass_upper_and_mode_bounds(stable_suite):
    for check_id in ('THM2_UB', 'LEM3_LB'):
        report = run_check(stable_suite, check_id, COARSE)
        assert report.passed, report.notes
        assert math.isfinite(report.worst_ratio)


@pytest.mark.slow
@pytest.mark.parametrize('suite_name', ['stable_suite', 'tempered_suite'])
def test_full_suite_has_no_failures(request, suite_name):
    reports, summary = run_suite(request.getfixturevalue(suite_name))
    assert summary['total'] == len(CATALOG)
    assert summary['failed_checks'] == []
    assert summary['ok']
    assert summary['passed'] + summary['skipped'] == len(reports)
