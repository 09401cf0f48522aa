"""
Density-level certifications: the saddle-point ratio, the upper bound, the two lower
bounds, the flat bulk and the three-regime sandwich, all against the inversion oracle
"""

import logging
import math
from typing import Dict, List

import numpy as np

from analysis.validation import (register, CheckContext, CheckOutcome, SkipCheck,
                                 comparability, finite_positive)
from analysis.envelopes import envelope_hypotheses
from app_config import (FLAT_MAX_SPREAD, SANDWICH_MAX_SPREAD, SANDWICH_REGIME_SPREAD,
                        TAIL_LAW_BAND, TAIL_LAW_LIMIT_BAND)
from calculations.errors import OutOfRangeError

logger = logging.getLogger(__name__)

_RATIO_TARGET_HARDNESS = 1e5
_RATIO_TOLERANCE = 0.01
_MAX_HALVINGS = 80


def _times(ctx: CheckContext) -> List[float]:
    limit = ctx.analyzer.time_limit()
    times = [t for t in ctx.grid.t_values if t < limit]
    if not times:
        raise SkipCheck('t < 1/Phi(x0)')
    return times


def _symmetric_xs(ctx: CheckContext, scale: float, reach: float = 8.0) -> np.ndarray:
    xs = np.linspace(-reach, reach, ctx.grid.x_points) / scale
    if ctx.suite.x0 > 0:
        xs = xs[xs < 1.0 / ctx.suite.x0]
    return xs


def _describe(ctx: CheckContext, times: List[float], span: str):
    ctx.description = f"t in {tuple(times)}, {ctx.grid.x_points} points with {span}"


@register('THM1_RATIO')
def check_thm1_ratio(ctx: CheckContext) -> CheckOutcome:
    """p/p_asym at x = -1 while t halves from 1 until the hardness reaches 1e5"""
    ctx.require(ctx.index('phi_dd') > 1, 'alpha_hat > 1')
    x, t = -1.0, 1.0
    curve = []
    for _ in range(_MAX_HALVINGS):
        try:
            ratio, hardness = ctx.oracle.saddle_ratio(t, x)
        except OutOfRangeError:
            t /= 2.0
            continue
        curve.append((t, hardness, ratio))
        logger.debug("THM1_RATIO t=%g hardness=%.6g ratio=%.12g", t, hardness, ratio)
        if hardness >= _RATIO_TARGET_HARDNESS:
            break
        t /= 2.0
    ctx.description = f"x = -1, t = 2^-k until hardness >= {_RATIO_TARGET_HARDNESS:g}"
    if not curve:
        raise SkipCheck('saddle point above max(x0, theta1) at x = -1')

    t_final, hardness, ratio = curve[-1]
    deviation = abs(ratio - 1.0)
    constants = {'final_t': t_final, 'final_hardness': hardness, 'final_ratio': ratio}
    for t_k, h_k, r_k in curve:
        if h_k >= 1e3:
            constants['ratio_at_hardness_1e3'] = r_k
            break
    reached = hardness >= _RATIO_TARGET_HARDNESS
    notes = '' if reached else f'hardness stalled at {hardness:.3g}'
    return CheckOutcome(reached and deviation < _RATIO_TOLERANCE, deviation, constants, notes)


@register('THM2_UB')
def check_thm2_ub(ctx: CheckContext) -> CheckOutcome:
    """p(t, x + t b_r) against min{Phi^-1(1/t), t eta(|x|)}"""
    s, analyzer = ctx.suite, ctx.analyzer
    ctx.require_pure_jump()
    ctx.require_jumps()
    ctx.require(s.kernel.is_monotone(), 'almost monotone jump density')
    times = _times(ctx)
    _describe(ctx, times, 'x Phi^-1(1/t) in [-8, 8]')
    ratios = []
    for t in times:
        shift = analyzer.upper_bound_shift(t)
        for x in _symmetric_xs(ctx, s.big_phi_inv(1.0 / t)):
            ratios.append(ctx.oracle.density(t, x + shift).value / analyzer.upper_bound(t, x))
    sup = float(np.max(ratios))
    return CheckOutcome(finite_positive(sup), sup, {'C': sup})


@register('LEM3_LB')
def check_lem3_lb(ctx: CheckContext) -> CheckOutcome:
    """p >= c Phi^-1(1/t) on the mode window"""
    analyzer = ctx.analyzer
    ctx.require_pure_jump()
    times = _times(ctx)
    ratios = []
    for t in times:
        window = analyzer.mode_window(t)
        for x in np.linspace(window.lower, window.upper, ctx.grid.x_points):
            ratios.append(ctx.oracle.density(t, x).value / window.scale)
    _describe(ctx, times, f'x in the mode window (M={analyzer.M:g})')
    c = float(np.min(ratios))
    return CheckOutcome(finite_positive(c), 1.0 / c if c > 0 else math.inf,
                        {'c': c, 'max_ratio': float(np.max(ratios))})


@register('LEM4_LB')
def check_lem4_lb(ctx: CheckContext) -> CheckOutcome:
    """p >= c t nu(x) where x Phi^-1(1/t) >= rho0; the ratio approaches 1 along the tail"""
    s, analyzer = ctx.suite, ctx.analyzer
    ctx.require_pure_jump()
    ctx.require_jumps()
    ctx.require(ctx.index('phi_dd') > 1, 'alpha_hat > 1')
    times = _times(ctx)
    ratios, far = [], []
    for t in times:
        start = analyzer.rho0 / s.big_phi_inv(1.0 / t)
        per_time = []
        for x in np.geomspace(start, 64.0 * start, ctx.grid.x_points):
            if s.x0 > 0 and not x < 1.0 / s.x0:
                continue
            shape = analyzer.tail_lower_shape(t, x)
            if shape > 0:
                per_time.append(ctx.oracle.density(t, x).value / shape)
        ratios.extend(per_time)
        far.extend(per_time[-max(1, len(per_time) // 10):])
    if not ratios:
        raise SkipCheck('nu > 0 on the right-tail region')
    _describe(ctx, times, f'x Phi^-1(1/t) in [{analyzer.rho0:g}, {64 * analyzer.rho0:g}]')
    c, top = float(np.min(ratios)), float(np.max(ratios))
    far_mean = float(np.mean(far))
    in_band = TAIL_LAW_BAND[0] <= c and top <= TAIL_LAW_BAND[1]
    settles = TAIL_LAW_LIMIT_BAND[0] <= far_mean <= TAIL_LAW_LIMIT_BAND[1]
    notes = ''
    if not in_band:
        notes = f'p/(t nu) leaves [{TAIL_LAW_BAND[0]:g}, {TAIL_LAW_BAND[1]:g}]'
    elif not settles:
        notes = f'last-decile mean {far_mean:.4g} outside [{TAIL_LAW_LIMIT_BAND[0]:g}, {TAIL_LAW_LIMIT_BAND[1]:g}]'
    return CheckOutcome(finite_positive(c) and in_band and settles, 1.0 / c if c > 0 else math.inf,
                        {'c': c, 'max_ratio': top, 'last_decile_mean': far_mean}, notes)


@register('THM3_FLAT')
def check_thm3_flat(ctx: CheckContext) -> CheckOutcome:
    """p comparable to phi^-1(1/t) on |x phi^-1(1/t)| <= 1"""
    s = ctx.suite
    failed = envelope_hypotheses(s)
    if failed:
        raise SkipCheck(', '.join(failed))
    times = _times(ctx)
    ratios = []
    for t in times:
        lower, upper = ctx.analyzer.flat_window(t)
        scale = s.phi_inv(1.0 / t)
        for x in np.linspace(lower, upper, ctx.grid.x_points):
            ratios.append(ctx.oracle.density(t, x).value / scale)
    _describe(ctx, times, '|x phi^-1(1/t)| <= 1')
    return comparability('p_over_phi_inv', np.asarray(ratios), max_spread=FLAT_MAX_SPREAD)


@register('THM4_SANDWICH')
def check_thm4_sandwich(ctx: CheckContext) -> CheckOutcome:
    """p divided by the three-regime envelope, bounded above and below per regime"""
    s = ctx.suite
    failed = envelope_hypotheses(s)
    if failed:
        raise SkipCheck(', '.join(failed))
    times = _times(ctx)
    by_regime: Dict[str, List[float]] = {}
    for t in times:
        for x in _symmetric_xs(ctx, s.phi_inv(1.0 / t)):
            regime, value = ctx.analyzer.envelope(t, x)
            by_regime.setdefault(regime.tag, []).append(ctx.oracle.density(t, x).value / value)
    _describe(ctx, times, 'x phi^-1(1/t) in [-8, 8]')

    constants = {}
    ok = True
    wide = []
    for tag, ratios in by_regime.items():
        lo, hi = float(np.min(ratios)), float(np.max(ratios))
        constants[f'{tag}_min'] = lo
        constants[f'{tag}_max'] = hi
        ok = ok and finite_positive(lo, hi)
        if not (lo > 0 and hi / lo < SANDWICH_REGIME_SPREAD):
            wide.append(tag)
    everything = np.concatenate([np.asarray(r, dtype=float) for r in by_regime.values()])
    lo, hi = float(everything.min()), float(everything.max())
    overall = hi / lo if lo > 0 else math.inf
    constants['overall_spread'] = overall
    notes = ''
    if wide:
        notes = f"max/min >= {SANDWICH_REGIME_SPREAD:g} in {', '.join(wide)}"
    elif not overall < SANDWICH_MAX_SPREAD:
        notes = f'overall max/min {overall:.4g} >= {SANDWICH_MAX_SPREAD:g}'
    ok = ok and not wide and overall < SANDWICH_MAX_SPREAD
    return CheckOutcome(ok, overall, constants, notes)
