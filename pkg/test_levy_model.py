"""
Tests for the jump-measure primitives and model validation
"""

import math

import pytest
from scipy import integrate, special

from data import fixtures
from data.models import LevyModel, Stable, TemperedStable, TruncatedStable, Custom, Mixture, Window
from calculations.errors import BoundedVariationError, DivergentMomentError, NonIntegrableError
from calculations.exponents import ExponentSuite
from calculations.levy_model import (LevyModelCalculator, upper_gamma, compensated_exp,
                                     calibrated_stable_scale, centered_drift, validate_model,
                                     jump_density, jump_tail, weighted_moment, mean_at_one)


def test_calibrated_scale_for_alpha_three_halves():
    assert calibrated_stable_scale(1.5) == pytest.approx(0.75 / math.sqrt(math.pi), rel=1e-14)


@pytest.mark.parametrize('z', [0.5, 3.0, 45.0])
def test_upper_gamma_negative_half_order(z):
    expected = 2.0 * math.exp(-z) / math.sqrt(z) - 2.0 * math.sqrt(math.pi) * special.erfc(math.sqrt(z))
    if z > 40:
        # the closed form cancels catastrophically here; compare with the leading asymptotics
        leading = z ** -1.5 * math.exp(-z)
        assert upper_gamma(-0.5, z) == pytest.approx(leading * (1 - 1.5 / z), rel=5e-3)
    else:
        assert upper_gamma(-0.5, z) == pytest.approx(expected, rel=1e-12)


def test_upper_gamma_special_orders():
    assert upper_gamma(0.0, 2.0) == pytest.approx(float(special.exp1(2.0)), rel=1e-14)
    assert upper_gamma(2.5, 0.0) == pytest.approx(float(special.gamma(2.5)), rel=1e-14)
    assert upper_gamma(1.0, math.inf) == 0.0
    with pytest.raises(DivergentMomentError):
        upper_gamma(-0.5, 0.0)


@pytest.mark.parametrize('x', [1e-6, 1e-4])
def test_compensated_exp_small_arguments(x):
    assert compensated_exp(x) == pytest.approx(x * x / 2 - x ** 3 / 6 + x ** 4 / 24, rel=1e-14)


@pytest.mark.parametrize('x', [0.5, 3.0])
def test_compensated_exp_matches_direct_formula(x):
    assert compensated_exp(x) == pytest.approx(math.expm1(-x) + x, rel=1e-14)


def test_stable_density_and_tail():
    model = fixtures.stable(1.5)
    c = calibrated_stable_scale(1.5)
    assert jump_density(model, 2.0) == pytest.approx(c * 2.0 ** -2.5, rel=1e-14)
    assert jump_tail(model, 2.0) == pytest.approx(c * 2.0 ** -1.5 / 1.5, rel=1e-12)


def test_weighted_moment_windows_add_up():
    model = fixtures.tempered(1.5, 1.0)
    whole = weighted_moment(model, 2, 0.5)
    below = weighted_moment(model, 2, 0.5, Window.below(1.0))
    above = weighted_moment(model, 2, 0.5, Window.above(1.0))
    assert below + above == pytest.approx(whole, rel=1e-10)
    middle = weighted_moment(model, 2, 0.5, Window.between(0.5, 1.0))
    assert middle < below


def test_weighted_moment_closed_form_for_stable():
    model = fixtures.stable(1.5)
    c = calibrated_stable_scale(1.5)
    assert weighted_moment(model, 2, 1.0) == pytest.approx(c * math.sqrt(math.pi), rel=1e-12)


def test_weighted_moment_divergent_at_zero():
    with pytest.raises(DivergentMomentError):
        weighted_moment(fixtures.stable(1.5), 1, 0.0, Window.below(1.0))


def test_weighted_moment_rejects_bad_order():
    with pytest.raises(ValueError):
        weighted_moment(fixtures.stable(1.5), 4, 1.0)


def test_centered_models_have_zero_mean():
    for model in (fixtures.stable(1.5), fixtures.tempered(1.5, 1.0), fixtures.mixture()):
        assert mean_at_one(model) == pytest.approx(0.0, abs=1e-12)


def test_boundary_mean_is_infinite():
    assert mean_at_one(fixtures.stable_boundary()) == math.inf


def test_centered_drift_of_stable():
    c = calibrated_stable_scale(1.5)
    assert centered_drift(Stable(alpha=1.5, scale=c)) == pytest.approx(-c / 0.5, rel=1e-12)
    assert centered_drift(None) == 0.0


def test_truncated_centered_drift_vanishes_at_unit_cutoff():
    assert centered_drift(TruncatedStable(alpha=0.5, cutoff=1.0)) == 0.0


def test_validate_accepts_reference_models():
    for model in (fixtures.brownian(), fixtures.stable(1.5), fixtures.tempered(1.5, 1.0),
                  fixtures.mixture(), fixtures.stable_boundary(), fixtures.truncated(0.5, 1.0, sigma=1.0)):
        verdict = validate_model(model)
        assert verdict.ok, verdict.violations


def test_validate_flags_bounded_variation():
    verdict = validate_model(fixtures.truncated(0.5, 1.0))
    assert not verdict.ok
    assert [code for code, _ in verdict.violations] == ['BoundedVariation']
    assert verdict.finite_variation_integral == pytest.approx(1.0 / 1.5, rel=1e-10)


def test_suite_refuses_bounded_variation():
    with pytest.raises(BoundedVariationError):
        ExponentSuite(fixtures.truncated(0.5, 1.0))


def test_validate_flags_non_integrable_custom_density():
    jumps = Custom(density=lambda x: x ** -3.5, singularity_order=2.5, decay_hint='polynomial')
    calculator = LevyModelCalculator(LevyModel(sigma=1.0, b=0.0, jumps=jumps))
    verdict = calculator.validate_model()
    assert not verdict.ok
    assert verdict.violations[0][0] == 'NonIntegrable'
    with pytest.raises(NonIntegrableError):
        calculator.ensure_valid()


def test_validate_flags_negative_custom_density():
    jumps = Custom(density=lambda x: -x ** -2.5, singularity_order=1.5, decay_hint='polynomial')
    verdict = validate_model(LevyModel(sigma=0.0, b=0.0, jumps=jumps))
    assert 'NegativeJumpDensity' in [code for code, _ in verdict.violations]


def test_custom_kernel_matches_closed_form_tail():
    custom = fixtures.custom_stable(1.5)
    closed = fixtures.stable(1.5)
    for u in (0.3, 1.0, 4.0):
        assert jump_tail(custom, u) == pytest.approx(jump_tail(closed, u), rel=1e-8)


def test_mixture_density_is_the_sum():
    c = calibrated_stable_scale(1.5)
    model = LevyModel(sigma=0.0, b=0.0, jumps=Mixture((Stable(1.5, c), TemperedStable(1.5, 1.0, c))))
    x = 0.7
    expected = c * x ** -2.5 * (1.0 + math.exp(-x))
    assert jump_density(model, x) == pytest.approx(expected, rel=1e-14)


def test_ladder_tail_readings_at_zero_theta():
    model = fixtures.stable(1.5)
    c = calibrated_stable_scale(1.5)
    calculator = LevyModelCalculator(model)
    x = 2.0
    expected = c * x ** -0.5 / (1.5 * 0.5)
    assert calculator.ladder_tail(x, 0.0) == pytest.approx(expected, rel=1e-8)
    assert calculator.ladder_tail(x, 0.0, 'as_printed') == pytest.approx(x * expected, rel=1e-8)
    with pytest.raises(ValueError):
        calculator.ladder_tail(x, 0.0, 'other')


def test_model_requires_a_process():
    with pytest.raises(ValueError):
        LevyModel(sigma=0.0, b=0.0)


def test_default_anchor_per_family():
    assert fixtures.tempered(1.5, 2.0).x0 == 2.0
    assert fixtures.truncated(0.5, 4.0, sigma=1.0).x0 == 0.25
    assert fixtures.stable(1.5).x0 == 0.0


@pytest.mark.parametrize('alpha', [1.2, 1.5, 1.8])
def test_validate_accepts_power_law_custom_density(alpha):
    verdict = validate_model(fixtures.custom_stable(alpha))
    assert verdict.ok, verdict.violations
    closed = validate_model(fixtures.stable(alpha))
    assert verdict.finite_variation_integral == pytest.approx(closed.finite_variation_integral, rel=1e-8)


@pytest.mark.parametrize('alpha', [1.5, 1.9])
def test_custom_moment_near_zero_matches_closed_form(alpha):
    c = calibrated_stable_scale(alpha)
    jumps = Custom(density=lambda x: c * x ** (-1.0 - alpha), singularity_order=alpha,
                   decay_hint='polynomial')
    model = LevyModel(sigma=0.0, b=0.0, jumps=jumps)
    expected = c * special.gamma(2.0 - alpha)
    assert weighted_moment(model, 2, 1.0) == pytest.approx(expected, rel=1e-8)
    below = weighted_moment(model, 2, 0.0, Window.below(1e-120))
    assert below == pytest.approx(c * 1e-120 ** (2.0 - alpha) / (2.0 - alpha), rel=1e-8)


def test_truncated_laplace_exponent_by_quadrature():
    suite = ExponentSuite(fixtures.truncated(0.5, 1.0, sigma=1.0))
    kernel = suite.kernel
    assert not kernel.closed_form
    lam = 2.0
    expected, _ = integrate.quad(lambda s: (math.expm1(-lam * s) + lam * s) * kernel.density(s),
                                 0.0, 1.0, epsabs=1e-14, epsrel=1e-12, limit=200)
    assert float(kernel.laplace(lam, 0)) == pytest.approx(expected, rel=1e-8)
