"""
Certifications of the exponent calculus: inequalities between phi, its derivatives,
the Pruitt functions, psi* and Phi*, and their inverses
"""

import math

import numpy as np

from analysis.validation import (register, CheckContext, CheckOutcome, SkipCheck,
                                 comparability, finite_positive)
from data.models import Stable
from calculations.exponents import log_grid
from calculations.quadrature import integrate_log
from app_config import CENTERED_TOL, LEM1_SAMPLES, INDEX_TOLERANCE


def _merge(*outcomes: CheckOutcome, notes: str = '') -> CheckOutcome:
    constants, tracked = {}, ()
    for outcome in outcomes:
        constants.update(outcome.constants)
        tracked += outcome.tracked
    return CheckOutcome(ok=all(o.ok for o in outcomes),
                        worst_ratio=max(o.worst_ratio for o in outcomes),
                        constants=constants, notes=notes, tracked=tracked)


def _positive_part(xs: np.ndarray, values: np.ndarray):
    keep = np.isfinite(values) & (values > 0)
    return xs[keep], values[keep]


@register('INEQ_20')
def check_ineq_20(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    xs = ctx.xs()
    f = np.asarray(s.phi(xs))
    d = xs * np.asarray(s.phi(xs, 1))
    ok = bool(np.all(f <= d + ctx.slack * (np.abs(f) + np.abs(d))))
    positive = (d > 0) & (f > 0)
    worst = float(np.max(f[positive] / d[positive])) if positive.any() else math.nan
    return CheckOutcome(ok, worst, {'max_phi_over_lam_dphi': worst})


@register('INEQ_47')
def check_ineq_47(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    ctx.require(s.theta0 > 0, 'theta0 > 0')
    xs = log_grid(1e-3 * s.theta1, s.theta1, ctx.grid.points_per_decade)
    ctx.description = f"x in [{xs[0]:.6g}, theta1], lambda in [1/64, 1]"
    lams = log_grid(1.0 / 64.0, 1.0, 8)
    X, L = np.meshgrid(xs, lams)
    lhs = L * -np.asarray(s.phi(X))
    rhs = -np.asarray(s.phi(L * X))
    ratio = lhs / rhs
    worst = float(ratio.max())
    return CheckOutcome(bool(np.all(lhs <= rhs * (1 + ctx.slack))), worst, {'max_ratio': worst})


@register('USC_PHI')
def check_usc_phi(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    xs = ctx.xs(lo=2.0 * s.theta1)
    xs, d = _positive_part(xs, np.asarray(s.phi(xs, 1)))
    i, j = ctx.pairs(len(xs))
    lam = xs[j] / xs[i]
    C1 = float(np.max(d[j] / (lam * d[i])))

    ys = ctx.xs(lo=2.0 * s.theta0)
    ys, f = _positive_part(ys, np.asarray(s.phi(ys)))
    k, m = ctx.pairs(len(ys))
    C2 = float(np.max(f[m] / ((ys[m] / ys[k]) ** 2 * f[k])))

    constants = {'C1': C1, 'C2': C2}
    ok = finite_positive(C1, C2)
    notes = ''
    if s.theta1 == 0 and abs(s.phi_d1_at_zero()) <= CENTERED_TOL:
        ok = ok and C1 <= 1 + ctx.slack
        notes = "phi'(0) = 0: phi'(lam x) <= lam phi'(x) asserted exactly"
    if s.theta1 > 0:
        constants['proof_expression'] = (s.theta1 * float(s.phi(s.theta1, 2))
                                         / float(s.phi(2.0 * s.theta1, 1)))
    return CheckOutcome(ok, C1, constants, notes)


@register('PROP5')
def check_prop5(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    xs = ctx.xs(lo=2.0 * s.theta0)
    r = xs * np.asarray(s.phi(xs, 1)) / np.asarray(s.phi(xs))
    lower_ok = bool(np.all(r >= 1 - ctx.slack))

    ys = ctx.xs(lo=2.0 * s.theta1)
    lhs = 2.0 * np.asarray(s.phi(ys, 1))
    rhs = ys * np.asarray(s.phi(ys, 2))
    second_ok = bool(np.all(lhs >= rhs * (1 - ctx.slack)))
    C = float(r.max())
    exact_ok, notes = True, ''
    if isinstance(s.model.jumps, Stable) and s.sigma == 0 and abs(s.phi_d1_at_zero()) <= CENTERED_TOL:
        alpha = s.model.jumps.alpha
        exact_ok = bool(np.all(np.abs(r - alpha) <= ctx.slack * alpha))
        if not exact_ok:
            notes = f'x dphi/phi departs from the stable index {alpha:g}'
    return CheckOutcome(lower_ok and second_ok and exact_ok and math.isfinite(C), C,
                        {'C': C, 'min_ratio': float(r.min()), 'max_x_dphi2_over_2dphi': float(np.max(rhs / lhs))}, notes)


@register('COR3')
def check_cor3(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    xs = ctx.xs()
    if s.theta0 > 0:
        xs = xs[(xs < 0.5 * s.theta0) | (xs > 2.0 * s.theta0)]
    if len(xs) == 0:
        raise SkipCheck('grid meets (0, theta0/2) or (2 theta0, inf)')
    r = np.abs(np.asarray(s.phi(xs))) / np.asarray(s.big_phi(xs))
    c = float(r.min())
    return CheckOutcome(finite_positive(c), 1.0 / c if c > 0 else math.inf, {'c': c})


@register('LSC_CHAIN')
def check_lsc_chain(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    alpha = ctx.index('phi_dd')
    ctx.require(alpha > 1, 'alpha_hat > 1')
    xs = ctx.xs(lo=max(s.x0, s.theta1))
    xs, d = _positive_part(xs, np.asarray(s.phi(xs, 1)))
    i, j = ctx.pairs(len(xs))
    ratio = (d[j] / d[i]) / (xs[j] / xs[i]) ** (alpha - 1.0)
    c = float(ratio.min())
    return CheckOutcome(finite_positive(c), 1.0 / c if c > 0 else math.inf, {'c': c, 'index': alpha - 1.0})


@register('EQ63', stability=True)
def check_eq63(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    ctx.require(ctx.index('phi_dd') > 1, 'alpha_hat > 1')
    xs = ctx.xs(lo=max(s.x0, 2.0 * s.theta1))
    return comparability('x_phi2_over_phi1', xs * np.asarray(s.phi(xs, 2)) / np.asarray(s.phi(xs, 1)))


@register('COR2', stability=True)
def check_cor2(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    ctx.require(ctx.index('phi_dd') > 1, 'alpha_hat > 1')
    xs = ctx.xs(lo=max(s.x0, 2.0 * s.theta0))
    return comparability('Phi_over_phi', np.asarray(s.big_phi(xs)) / np.asarray(s.phi(xs)))


@register('LEM2')
def check_lem2(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    xs = ctx.xs()
    truncated = np.array([s.kernel.moment(2, 0.0, 0.0, 1.0 / x) for x in xs])
    r = (s.sigma ** 2 + truncated) / np.asarray(s.phi(xs, 2))
    C = float(r.min())
    return CheckOutcome(finite_positive(C), 1.0 / C if C > 0 else math.inf, {'C': C})


@register('COR4')
def check_cor4(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    xs = ctx.xs()
    r = np.asarray(s.pruitt_K(1.0 / xs)) / np.asarray(s.big_phi(xs))
    upper_ok = bool(np.all(r <= math.e * (1 + ctx.slack)))
    C = float(r.min())
    return CheckOutcome(upper_ok and finite_positive(C), float(r.max()) / math.e,
                        {'C_lower': C, 'max_K_over_Phi': float(r.max())},
                        notes='upper constant e asserted exactly')


@register('LEM1')
def check_lem1(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    lo, hi = ctx.scan_range()
    if s.x0 > 0:
        lo = max(lo, s.x0 * (1 + 1e-6))
    ws = np.logspace(math.log10(lo), math.log10(hi), LEM1_SAMPLES)
    # lambda/w spans four decades; far smaller ratios drown the real part in cancellation
    rel = np.logspace(-2, 2, LEM1_SAMPLES)
    W, R = np.meshgrid(ws, rel)
    L = W * R
    lhs = np.real(np.asarray(s.phi(W)) - np.asarray(s.phi_complex(W + 1j * L)))
    rhs = L ** 2 * np.asarray(s.phi(np.maximum(L, W), 2))
    ctx.description = f"{LEM1_SAMPLES}x{LEM1_SAMPLES} (w, lambda), w in [{lo:.6g}, {hi:.6g}], lambda/w in [1e-2, 1e2]"
    ratio = lhs / rhs
    C = float(ratio.min())
    return CheckOutcome(finite_positive(C), 1.0 / C if C > 0 else math.inf, {'C': C})


@register('EQ42')
def check_eq42(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    rs = log_grid(1e-2, 1e2, 8)
    ctx.description = "log grid r in [1e-2, 1e2], 8/decade"
    lhs = np.asarray(s.pruitt_h(rs))
    rhs = np.array([2.0 * integrate_log(lambda v: float(s.pruitt_K(v)) / v, r, math.inf,
                                        rel_tol=1e-10, breakpoints=s.kernel.breakpoints) for r in rs])
    err = float(np.max(np.abs(lhs / rhs - 1.0)))
    return CheckOutcome(err <= 1e-6, err, {'max_relative_error': err})


@register('EQ43')
def check_eq43(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    xs = ctx.xs()
    psi = np.array([s.psi_star(x) for x in xs])
    r = psi / np.asarray(s.pruitt_h(1.0 / xs))
    lo, hi = float(r.min()), float(r.max())
    ok = lo >= (1.0 / 24.0) * (1 - ctx.slack) and hi <= 2.0 * (1 + ctx.slack)
    return CheckOutcome(ok, max(hi / 2.0, (1.0 / 24.0) / lo),
                        {'min_ratio': lo, 'max_ratio': hi}, notes='constants 1/24 and 2 asserted exactly')


@register('EQ78')
def check_eq78(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    ctx.require_jumps()
    ctx.require(s.kernel.is_monotone(), 'monotone jump density')
    rs = 1.0 / ctx.xs()
    nu = np.array([s.calculator.jump_density(r) for r in rs])
    K = np.asarray(s.pruitt_K(rs))
    h = np.asarray(s.pruitt_h(rs))
    r1 = rs * nu / K
    ok = bool(np.all(r1 <= 3.0 * (1 + ctx.slack)) and np.all(K <= h * (1 + ctx.slack)))
    worst = float(r1.max())
    return CheckOutcome(ok, worst / 3.0, {'max_r_nu_over_K': worst, 'max_K_over_h': float(np.max(K / h))},
                        notes='r nu(r) <= 3 K(r) for monotone densities')


@register('EQ44', stability=True)
def check_eq44(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    xs = ctx.xs()
    P = np.asarray(s.big_phi(xs))
    psi = np.array([s.psi_star(x) for x in xs])
    return _merge(comparability('psi_star_over_Phi', psi / P),
                  comparability('h_over_Phi', np.asarray(s.pruitt_h(1.0 / xs)) / P),
                  comparability('K_over_Phi', np.asarray(s.pruitt_K(1.0 / xs)) / P))


@register('EQ48')
def check_eq48(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    xs = ctx.xs()
    r = np.array([s.psi_star(x) for x in xs]) / np.asarray(s.re_psi(xs))
    C = float(r.max())
    ok = math.isfinite(C) and float(r.min()) >= 1 - ctx.slack
    return CheckOutcome(ok, C, {'C': C})


@register('COR5')
def check_cor5(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    rng = ctx.scan_range()
    ctx.xs()
    phi_dd = s.scaling_report('phi_dd', rng)
    re_psi = s.scaling_report('re_psi', rng)
    ctx.require(not (phi_dd.degenerate or re_psi.degenerate), 'non-degenerate scaling reports')
    gap = abs(phi_dd.alpha_hat - re_psi.alpha_hat)
    return CheckOutcome(gap <= INDEX_TOLERANCE, gap,
                        {'alpha_phi_dd': phi_dd.alpha_hat, 'alpha_re_psi': re_psi.alpha_hat,
                         'beta_phi_dd': phi_dd.beta_hat, 'beta_re_psi': re_psi.beta_hat})


@register('PROP6')
def check_prop6(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    rs = 1.0 / ctx.xs()
    r = np.asarray(s.pruitt_h(rs)) / np.asarray(s.pruitt_K(rs))
    C = float(r.max())
    return CheckOutcome(math.isfinite(C) and float(r.min()) >= 1 - ctx.slack, C, {'C': C})


def _inverse_values(ctx: CheckContext, envelope: str):
    s = ctx.suite
    lo, hi = ctx.scan_range()
    star = s.psi_star if envelope == 'psi' else s.big_phi_star
    return ctx.value_grid(star(lo), star(hi))


def _power_majorant(values: np.ndarray, inverse: np.ndarray, index: float) -> float:
    i, j = CheckContext.pairs(len(values))
    lam = values[j] / values[i]
    return float(np.max(inverse[j] / (lam ** (1.0 / index) * inverse[i])))


@register('PROP7', stability=True)
def check_prop7(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    alpha = ctx.index('re_psi')
    ctx.require(alpha > 0, 're_psi alpha_hat > 0')
    values = _inverse_values(ctx, 'psi')
    psi_inv = np.array([s.psi_inv(v) for v in values])
    h_inv = np.array([s.pruitt_h_inv(v) for v in values])
    outcome = comparability('psi_inv_times_h_inv', psi_inv * h_inv)
    C = _power_majorant(values, psi_inv, alpha)
    outcome.constants['C_power'] = C
    outcome.ok = outcome.ok and math.isfinite(C)
    return outcome


@register('PROP8', stability=True)
def check_prop8(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    alpha = ctx.index('Phi')
    ctx.require(alpha > 0, 'Phi alpha_hat > 0')
    values = _inverse_values(ctx, 'Phi')
    if s.x0 > 0:
        values = values[values > float(s.big_phi(s.x0))]
    psi_inv = np.array([s.psi_inv(v) for v in values])
    phi_inv = np.array([s.big_phi_inv(v) for v in values])
    outcome = comparability('psi_inv_over_Phi_inv', psi_inv / phi_inv)
    C = _power_majorant(values, phi_inv, alpha)
    outcome.constants['C_power'] = C
    outcome.ok = outcome.ok and math.isfinite(C)
    return outcome


@register('REM2', stability=True)
def check_rem2(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    xs = ctx.xs()
    r = np.asarray(s.big_phi(xs)) / np.array([s.big_phi_star(x) for x in xs])
    outcome = comparability('Phi_over_Phi_star', r)
    outcome.ok = outcome.ok and float(r.max()) <= 1 + ctx.slack
    return outcome


@register('PROP9')
def check_prop9(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    xs = ctx.xs()
    r = (xs * np.asarray(s.phi(xs, 1)) - np.asarray(s.phi(xs))) / np.asarray(s.big_phi(xs))
    C = float(r.max())
    return CheckOutcome(math.isfinite(C) and float(r.min()) >= -ctx.slack, C, {'C': C})


@register('PROP10', stability=True)
def check_prop10(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    xs = ctx.xs(lo=2.0 * s.theta0)
    stars = np.array([s.big_phi_star(x) for x in xs])
    first = comparability('Phi_star_over_phi', stars / np.asarray(s.phi(xs)))
    values = ctx.value_grid(float(s.phi(xs[0])), float(s.phi(xs[-1])))
    second = comparability('Phi_inv_over_phi_inv',
                           np.array([s.big_phi_inv(v) / s.phi_inv(v) for v in values]))
    return _merge(first, second)


@register('EQ17_45_72')
def check_eq17_45_72(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    xs = ctx.xs()
    i, j = ctx.pairs(len(xs))
    lam = xs[j] / xs[i]
    P = np.asarray(s.big_phi(xs))
    stars = np.array([s.big_phi_star(x) for x in xs])
    r72 = P[j] / (lam ** 2 * P[i])
    r45 = stars[j] / (lam ** 2 * stars[i])

    values = _inverse_values(ctx, 'Phi')
    inv = np.array([s.big_phi_inv(v) for v in values])
    k, m = ctx.pairs(len(values))
    r17 = (np.sqrt(values[m] / values[k]) * inv[k]) / inv[m]

    worst = float(max(r72.max(), r45.max(), r17.max()))
    ok = worst <= 1 + ctx.slack
    return CheckOutcome(ok, worst, {'max_eq72': float(r72.max()), 'max_eq45': float(r45.max()),
                                    'max_eq17': float(r17.max())},
                        notes='constants sqrt(lambda) and lambda^2 asserted exactly')


def _jump_ratio(ctx: CheckContext, lo: float) -> np.ndarray:
    s = ctx.suite
    ctx.require_pure_jump()
    ctx.require_jumps()
    freq = ctx.xs(lo=lo)
    if len(freq) == 0:
        raise SkipCheck('nonempty range below 1/x0')
    xs = 1.0 / freq
    nu = np.array([s.calculator.jump_density(x) for x in xs])
    return nu * xs / np.asarray(s.phi(freq))


@register('PROP11')
def check_prop11(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    r = _jump_ratio(ctx, max(s.x0, 2.0 * s.theta0))
    c = float(r.min())
    return CheckOutcome(finite_positive(c), 1.0 / c if c > 0 else math.inf, {'c_prime': c})


@register('REM5', stability=True)
def check_rem5(ctx: CheckContext) -> CheckOutcome:
    s = ctx.suite
    r = _jump_ratio(ctx, max(s.x0, 2.0 * s.theta0))
    return comparability('nu_over_phi_shape', r)
