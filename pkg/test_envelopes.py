"""
Tests for the eta majorant, density bounds and the three-regime envelope
"""

import math
from dataclasses import replace

import pytest

from data import fixtures
from data.models import LevyModel
from calculations.exponents import ExponentSuite
from calculations.levy_model import calibrated_stable_scale
from analysis.envelopes import (EnvelopeAnalyzer, EtaMajorant, HypothesisViolationError,
                                OutOfTimeRangeError, envelope_hypotheses, eta_doubling,
                                drift_compensator, upper_bound, tail_lower_shape, envelope)

STABLE_PHI_INV_ONE = (1.0 / 0.75) ** (2.0 / 3.0)


def test_eta_of_stable_model(stable_suite):
    majorant = EtaMajorant(stable_suite)
    assert majorant.A is None
    assert majorant(2.0) == pytest.approx(0.75 * 2.0 ** -2.5, rel=1e-12)
    # eta dominates the jump density by the constant sqrt(pi)
    c = calibrated_stable_scale(1.5)
    assert majorant(3.0) / (c * 3.0 ** -2.5) == pytest.approx(math.sqrt(math.pi), rel=1e-12)
    assert eta_doubling(majorant, [0.5, 1.0, 2.0]) == pytest.approx(2.0 ** 2.5, rel=1e-12)
    assert majorant(0.0) == math.inf
    with pytest.raises(ValueError):
        majorant(-1.0)


def test_eta_glues_at_anchor(tempered_suite):
    majorant = EtaMajorant(tempered_suite)
    assert majorant.A == pytest.approx(
        tempered_suite.big_phi_star(1.0) / abs(float(tempered_suite.phi(1.0))), rel=1e-14)
    assert majorant(2.0) == pytest.approx(majorant.A * float(tempered_suite.phi(0.5)) / 2.0, rel=1e-14)
    assert majorant(0.5) == pytest.approx(tempered_suite.big_phi_star(2.0) / 0.5, rel=1e-14)


def test_hypotheses_of_reference_models(stable_suite, brownian_suite, boundary_suite):
    assert envelope_hypotheses(stable_suite) == []
    failed = envelope_hypotheses(brownian_suite)
    assert 'sigma = 0' in failed
    assert '1 < alpha_hat <= beta_hat < 2' in failed
    failed = envelope_hypotheses(boundary_suite)
    assert 'theta1 = 0' in failed
    assert "phi'(0) = 0" in failed


def test_analyzer_parameters(stable_suite):
    with pytest.raises(ValueError):
        EnvelopeAnalyzer(stable_suite, M=1.0)
    with pytest.raises(ValueError):
        EnvelopeAnalyzer(stable_suite, rho0=0.0)


def test_upper_bound_shape(stable_suite):
    assert upper_bound(stable_suite, 1.0, 0.1) == pytest.approx(STABLE_PHI_INV_ONE, rel=1e-10)
    assert upper_bound(stable_suite, 1.0, 10.0) == pytest.approx(0.75 * 10.0 ** -2.5, rel=1e-12)
    assert upper_bound(stable_suite, 1.0, -10.0) == upper_bound(stable_suite, 1.0, 10.0)


def test_upper_bound_needs_pure_jump(brownian_suite):
    with pytest.raises(HypothesisViolationError) as info:
        upper_bound(brownian_suite, 1.0, 1.0)
    assert info.value.hypothesis == 'sigma = 0'


def test_upper_bound_crossover(stable_suite):
    analyzer = EnvelopeAnalyzer(stable_suite)
    crossing = analyzer.upper_bound_crossover(1.0)
    assert analyzer.majorant(crossing) == pytest.approx(STABLE_PHI_INV_ONE, rel=1e-9)


def test_drift_compensator(stable_suite):
    c = calibrated_stable_scale(1.5)
    b = stable_suite.model.b
    assert drift_compensator(stable_suite, 1.0) == b
    assert drift_compensator(stable_suite, 0.25) == pytest.approx(b - 2.0 * c, rel=1e-12)
    assert drift_compensator(stable_suite, 4.0) == pytest.approx(b + 2.0 * c * (1.0 - 0.5), rel=1e-12)
    with pytest.raises(ValueError):
        drift_compensator(stable_suite, 0.0)


def test_upper_bound_shift_uses_chosen_scale(stable_suite):
    analyzer = EnvelopeAnalyzer(stable_suite)
    shift = analyzer.upper_bound_shift(1.0, 'Phi')
    assert shift == pytest.approx(analyzer.drift_compensator(1.0 / STABLE_PHI_INV_ONE), rel=1e-10)
    with pytest.raises(ValueError):
        analyzer.upper_bound_shift(1.0, 'phi')


def test_mode_window(stable_suite):
    window = EnvelopeAnalyzer(stable_suite).mode_window(1.0)
    w = (2.0 / 0.75) ** (2.0 / 3.0)
    assert window.center == pytest.approx(-1.5 * math.sqrt(w), rel=1e-10)
    assert window.scale == pytest.approx(STABLE_PHI_INV_ONE, rel=1e-10)
    assert window.upper - window.lower == pytest.approx(2.0 / STABLE_PHI_INV_ONE, rel=1e-10)
    assert window.contains(window.center)
    assert not window.contains(window.upper + 1.0)


def test_time_gate(tempered_suite):
    analyzer = EnvelopeAnalyzer(tempered_suite)
    limit = analyzer.time_limit()
    assert limit == pytest.approx(1.0 / 0.75 / 2.0 ** -0.5, rel=1e-12)
    with pytest.raises(OutOfTimeRangeError):
        analyzer.mode_window(2.0 * limit)


def test_tail_lower_shape_and_region(stable_suite):
    c = calibrated_stable_scale(1.5)
    assert tail_lower_shape(stable_suite, 2.0, 3.0) == pytest.approx(2.0 * c * 3.0 ** -2.5, rel=1e-14)
    analyzer = EnvelopeAnalyzer(stable_suite)
    assert analyzer.tail_region(1.0, 10.0)
    assert not analyzer.tail_region(1.0, 1.0)


def test_flat_window(stable_suite):
    lo, hi = EnvelopeAnalyzer(stable_suite).flat_window(1.0)
    assert lo == pytest.approx(-1.0, rel=1e-10)
    assert hi == pytest.approx(1.0, rel=1e-10)


def test_three_regime_envelope(stable_suite):
    regime, value = envelope(stable_suite, 1.0, 0.0)
    assert regime.tag == 'bulk'
    assert value == pytest.approx(1.0, rel=1e-10)

    regime, value = envelope(stable_suite, 1.0, 2.0)
    assert regime.tag == 'right_tail'
    assert value == pytest.approx(0.5 ** 1.5 / 2.0, rel=1e-10)

    regime, value = envelope(stable_suite, 1.0, -2.0)
    assert regime.tag == 'left_tail'
    assert value == pytest.approx(math.exp(-32.0 / 27.0) / 0.75, rel=1e-10)


def test_envelope_refuses_models_outside_hypotheses(brownian_suite):
    with pytest.raises(HypothesisViolationError):
        envelope(brownian_suite, 1.0, 0.0)


def test_envelope_grid_matches_pointwise(stable_suite):
    analyzer = EnvelopeAnalyzer(stable_suite)
    xs = [-3.0, 0.5, 5.0]
    assert [v for _, v in analyzer.envelope_grid(1.0, xs)] == [analyzer.envelope(1.0, x)[1] for x in xs]


def test_non_monotone_density_has_no_upper_bound(custom_suite):
    base = fixtures.custom_stable(1.5)
    flagged = LevyModel(sigma=0.0, b=base.b, jumps=replace(base.jumps, monotone=False))
    suite = ExponentSuite(flagged)
    assert custom_suite.kernel.is_monotone()
    assert not suite.kernel.is_monotone()
    with pytest.raises(HypothesisViolationError) as info:
        upper_bound(suite, 1.0, 1.0)
    assert info.value.hypothesis == 'almost monotone jump density'


def test_tail_lower_shape_needs_lower_index_above_one(truncated_suite):
    assert truncated_suite.sigma == 0
    with pytest.raises(HypothesisViolationError) as info:
        tail_lower_shape(truncated_suite, 0.5, 2.0)
    assert info.value.hypothesis == 'alpha_hat > 1'
