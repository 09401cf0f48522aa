"""
Saddle point w = (phi')^-1(-x/t) and the leading-order asymptotic density

p(t, x) ~ (2 pi t phi''(w))^(-1/2) * exp(-t (w phi'(w) - phi(w)))

accurate when the hardness t w^2 phi''(w) is large.
"""

import logging
import math

from data.models import SaddleResult, DensityEstimate
from calculations.errors import OutOfRangeError, NoConvergenceError
from calculations.exponents import ExponentSuite
from app_config import MAX_NEWTON_ITERATIONS, NON_CONTRACTING_LIMIT, OVERFLOW_GUARD

logger = logging.getLogger(__name__)

REGION_TAGS = ('inside', 'outside')


def saddle_floor(suite: ExponentSuite) -> float:
    """phi'(theta1+): infimum of the values -x/t that admit a saddle point"""
    if suite.theta1 > 0:
        return 0.0
    return suite.phi_d1_at_zero()


def saddle_w(suite: ExponentSuite, t: float, x: float) -> SaddleResult:
    """
    Solve phi'(w) = -x/t on (theta1, inf) by bracketed Newton with bisection fallback

    Raises:
        OutOfRangeError: -x/t <= phi'(theta1+), no saddle point exists
        NoConvergenceError: iteration budget exhausted
    """
    if not t > 0:
        raise ValueError(f"Time must be positive: {t}")
    if not math.isfinite(x):
        raise ValueError(f"x must be finite: {x}")
    y = -x / t
    floor = saddle_floor(suite)
    if not y > floor:
        raise OutOfRangeError(f"-x/t = {y:.6g} is not above phi'(theta1+) = {floor:.6g}")

    lo = suite.theta1
    hi = max(2.0 * suite.theta1, 1.0)
    while suite.phi(hi, 1) < y:
        lo = hi
        hi *= 2.0
        if hi > OVERFLOW_GUARD:
            raise NoConvergenceError(f"phi' does not reach {y:.6g} below the overflow guard")

    w = 0.5 * (lo + hi)
    previous = math.inf
    stalled = 0
    tolerance = 1e-13 * max(abs(y), 1e-300)
    for iteration in range(MAX_NEWTON_ITERATIONS):
        gap = float(suite.phi(w, 1)) - y
        if abs(gap) <= tolerance or hi - lo <= 4.0 * 2.2e-16 * w:
            break
        if gap < 0:
            lo = w
        else:
            hi = w
        stalled = stalled + 1 if abs(gap) > 0.5 * previous else 0
        previous = abs(gap)
        candidate = w - gap / float(suite.phi(w, 2))
        if stalled >= NON_CONTRACTING_LIMIT or not lo < candidate < hi:
            candidate = 0.5 * (lo + hi)
            stalled = 0
        w = candidate
        if suite.debug:
            logger.debug("saddle iteration %d: w=%.17g gap=%.3g", iteration, w, gap)
    else:
        raise NoConvergenceError(f"Saddle point for (t={t}, x={x}) did not converge")

    d2 = float(suite.phi(w, 2))
    hardness = t * w * w * d2
    exponent = t * (w * y - float(suite.phi(w)))
    prefactor = 1.0 / math.sqrt(2.0 * math.pi * t * d2)
    return SaddleResult(t=t, x=x, w=w, hardness=hardness, exponent=exponent, prefactor=prefactor)


def asym_density(suite: ExponentSuite, t: float, x: float) -> DensityEstimate:
    """Leading-order saddle-point density; the error indicator is 1/hardness"""
    saddle = saddle_w(suite, t, x)
    if saddle.hardness < 1:
        logger.warning("Low hardness %.3g at (t=%g, x=%g): asymptotic is unreliable", saddle.hardness, t, x)
    value = saddle.prefactor * math.exp(-saddle.exponent)
    return DensityEstimate(t=t, x=x, value=value, method='asym', error=1.0 / saddle.hardness,
                           hardness=saddle.hardness, contour_w=saddle.w)


def asym_region(suite: ExponentSuite, t: float, x: float, M: float,
                use_scale_gate: bool = False) -> str:
    """
    Classify (t, x) as 'inside' or 'outside' the region where the asymptotic is sharp.

    Inside requires a saddle point w > x0 with hardness > M. With use_scale_gate the
    point must also satisfy -x phi^-1(1/t) > M, which is only meaningful for
    t phi(x0 v 2 theta0) <= 1.
    """
    if not M > 0:
        raise ValueError(f"M must be positive: {M}")
    try:
        saddle = saddle_w(suite, t, x)
    except OutOfRangeError:
        return 'outside'
    if saddle.w <= suite.x0 or not saddle.hardness > M:
        return 'outside'
    if use_scale_gate:
        anchor = max(suite.x0, 2.0 * suite.theta0)
        if anchor > 0 and t * float(suite.phi(anchor)) > 1:
            return 'outside'
        if not -x * suite.phi_inv(1.0 / t) > M:
            return 'outside'
    return 'inside'


def stable_saddle_reference(alpha: float, t: float, x: float) -> float:
    """Closed-form saddle-point density for phi(lam) = lam^alpha, x < 0"""
    if not 1 < alpha <= 2:
        raise ValueError(f"alpha must be in (1, 2]: {alpha}")
    if not (t > 0 and x < 0):
        raise ValueError(f"Needs t > 0 and x < 0: t={t}, x={x}")
    u = -x / alpha
    k = alpha - 1.0
    prefactor = (u ** ((2.0 - alpha) / (2.0 * k)) * t ** (-1.0 / (2.0 * k))
                 / math.sqrt(2.0 * math.pi * alpha * k))
    return prefactor * math.exp(-k * t ** (-1.0 / k) * u ** (alpha / k))


def boundary_saddle_reference(t: float, x: float) -> float:
    """Saddle-point density for phi(lam) = lam ln(lam): w = e^(y-1) with y = -x/t"""
    if not t > 0:
        raise ValueError(f"Time must be positive: {t}")
    y = -x / t
    return math.exp(0.5 * (y - 1.0) - t * math.exp(y - 1.0)) / math.sqrt(2.0 * math.pi * t)


def printed_boundary_display(t: float, x: float) -> float:
    """The alternative closed form (2 pi t)^(-1/2) exp(-(y-1)/2 - e^(y-1)), y = -x/t"""
    if not t > 0:
        raise ValueError(f"Time must be positive: {t}")
    y = -x / t
    return math.exp(-0.5 * (y - 1.0) - math.exp(y - 1.0)) / math.sqrt(2.0 * math.pi * t)


def boundary_display_discrepancy(t: float, x: float) -> float:
    """Relative gap between the alternative display and the saddle-point formula"""
    exact = boundary_saddle_reference(t, x)
    printed = printed_boundary_display(t, x)
    return abs(printed - exact) / max(exact, printed, 1e-300)
