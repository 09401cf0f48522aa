"""
Density envelopes: the eta majorant and upper bound, mode-window and right-tail lower
bounds, the flat bulk estimate and the assembled three-regime envelope
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from data.models import Window, Regime, ModeWindow
from calculations.exponents import ExponentSuite
from calculations.saddlepoint import saddle_w
from app_config import (DEFAULT_MODE_M, DEFAULT_RHO0, DEFAULT_RHO1, DEFAULT_RHO2,
                        CENTERED_TOL, OVERFLOW_GUARD)

logger = logging.getLogger(__name__)


class HypothesisViolationError(Exception):
    """Custom exception for a model outside the hypotheses of an envelope"""

    def __init__(self, hypothesis: str, message: str = ''):
        self.hypothesis = hypothesis
        super().__init__(message or f"Hypothesis failed: {hypothesis}")


class OutOfTimeRangeError(HypothesisViolationError):
    """Custom exception for times outside (0, 1/Phi(x0))"""

    def __init__(self, t: float, limit: float):
        self.t = t
        self.limit = limit
        super().__init__('t < 1/Phi(x0)', f"t = {t} is outside (0, {limit:.6g})")


class EtaMajorant:
    """
    Nonincreasing majorant eta of the jump density.

    eta(s) = Phi*(1/s)/s below 1/x0 and A |phi(1/s)|/s above it, with
    A = Phi*(x0)/|phi(x0)| gluing the two pieces.
    """

    def __init__(self, suite: ExponentSuite):
        self.suite = suite
        self.x0 = suite.x0
        self.A: Optional[float] = None
        if self.x0 > 0:
            phi_x0 = abs(float(suite.phi(self.x0)))
            if phi_x0 == 0:
                raise HypothesisViolationError('phi(x0) != 0', f"phi vanishes at x0 = {self.x0}")
            self.A = suite.big_phi_star(self.x0) / phi_x0

    def __call__(self, s: float) -> float:
        return self.eta(s)

    def eta(self, s: float) -> float:
        if s < 0:
            raise ValueError(f"eta needs s >= 0: {s}")
        if s == 0:
            return math.inf
        if self.A is None or s < 1.0 / self.x0:
            return self.suite.big_phi_star(1.0 / s) / s
        return self.A * abs(float(self.suite.phi(1.0 / s))) / s

    def doubling_constant(self, grid: Sequence[float]) -> float:
        """Realized constant C in eta(s) <= C eta(2s) over the grid"""
        ratios = [self.eta(s) / self.eta(2.0 * s) for s in grid if s > 0]
        return float(max(ratios)) if ratios else math.nan


def envelope_hypotheses(suite: ExponentSuite) -> List[str]:
    """Names of the three-regime envelope hypotheses the model fails"""
    failed = []
    if suite.sigma != 0:
        failed.append('sigma = 0')
    if suite.theta1 != 0:
        failed.append('theta1 = 0')
    if not abs(suite.phi_d1_at_zero()) <= CENTERED_TOL:
        failed.append("phi'(0) = 0")
    report = suite.scaling_report('phi')
    if report.degenerate or not (1 < report.alpha_hat <= report.beta_hat < 2):
        failed.append('1 < alpha_hat <= beta_hat < 2')
    return failed


class EnvelopeAnalyzer:
    """Evaluates the density envelopes of one model"""

    def __init__(self,
                 suite: ExponentSuite,
                 M: float = DEFAULT_MODE_M,
                 rho0: float = DEFAULT_RHO0,
                 rho1: float = DEFAULT_RHO1,
                 rho2: float = DEFAULT_RHO2,
                 debug: bool = False):
        """
        Initialize envelope analyzer

        Args:
            suite: Exponent suite of the model
            M: Mode-window level, M > 1
            rho0: Right-tail gate x Phi^-1(1/t) >= rho0
            rho1: Left radius of the mode window in units of 1/Phi^-1(1/t)
            rho2: Right radius of the mode window
            debug: Log branch selection at DEBUG level
        """
        self.suite = suite
        self.M = M
        self.rho0 = rho0
        self.rho1 = rho1
        self.rho2 = rho2
        self.debug = debug
        self.validate_parameters()
        self._majorant: Optional[EtaMajorant] = None

    def validate_parameters(self):
        """Validate analyzer parameters"""
        if not self.M > 1:
            raise ValueError(f"M must exceed 1: {self.M}")
        for name in ('rho0', 'rho1', 'rho2'):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive: {getattr(self, name)}")

    @property
    def majorant(self) -> EtaMajorant:
        if self._majorant is None:
            self._majorant = EtaMajorant(self.suite)
        return self._majorant

    # --- gates ----------------------------------------------------------------------------------

    def time_limit(self) -> float:
        """Supremum of admissible times, 1/Phi(x0) (inf when x0 = 0)"""
        if self.suite.x0 == 0:
            return math.inf
        return 1.0 / float(self.suite.big_phi(self.suite.x0))

    def _require_time(self, t: float):
        if not t > 0:
            raise ValueError(f"Time must be positive: {t}")
        limit = self.time_limit()
        if not t < limit:
            raise OutOfTimeRangeError(t, limit)

    def _require_pure_jump(self):
        if self.suite.sigma != 0:
            raise HypothesisViolationError('sigma = 0')

    # --- upper bound ----------------------------------------------------------------------------

    def drift_compensator(self, r: float) -> float:
        """b_r = b + integral of s (1{s<r} - 1{s<1}) nu(ds)"""
        if not r > 0:
            raise ValueError(f"r must be positive: {r}")
        calc = self.suite.calculator
        if r < 1:
            return self.suite.model.b - calc.weighted_moment(1, 0.0, Window.between(r, 1.0))
        if r > 1:
            return self.suite.model.b + calc.weighted_moment(1, 0.0, Window.between(1.0, r))
        return self.suite.model.b

    def upper_bound(self, t: float, x: float) -> float:
        """min{Phi^-1(1/t), t eta(|x|)}: the upper-bound shape without its constant"""
        self._require_pure_jump()
        if not self.suite.kernel.is_monotone():
            raise HypothesisViolationError('almost monotone jump density')
        self._require_time(t)
        return min(self.suite.big_phi_inv(1.0 / t), t * self.majorant.eta(abs(x)))

    def upper_bound_shift(self, t: float, scale: str = 'psi') -> float:
        """Argument shift t b_r with r = 1/psi^-1(1/t), or r = 1/Phi^-1(1/t)"""
        if scale not in ('psi', 'Phi'):
            raise ValueError(f"Invalid scale: {scale}. Must be 'psi' or 'Phi'")
        inverse = self.suite.psi_inv(1.0 / t) if scale == 'psi' else self.suite.big_phi_inv(1.0 / t)
        return t * self.drift_compensator(1.0 / inverse)

    def upper_bound_crossover(self, t: float) -> float:
        """|x*| where Phi^-1(1/t) = t eta(|x*|)"""
        self._require_time(t)
        level = self.suite.big_phi_inv(1.0 / t)

        def gap(log_r):
            return math.log(t * self.majorant.eta(math.exp(log_r))) - math.log(level)

        lo, hi = -1.0, 1.0
        while gap(lo) <= 0:
            lo -= 2.0
            if lo < -math.log(OVERFLOW_GUARD):
                raise HypothesisViolationError('eta unbounded at 0')
        while gap(hi) > 0:
            hi += 2.0
            if hi > math.log(OVERFLOW_GUARD):
                raise HypothesisViolationError('eta vanishing at infinity')
        return math.exp(brentq(gap, lo, hi, xtol=1e-13))

    # --- lower bounds ----------------------------------------------------------------------------

    def mode_window(self, t: float, M: Optional[float] = None,
                    rho1: Optional[float] = None, rho2: Optional[float] = None) -> ModeWindow:
        """Window around -t phi'(Phi^-1(M/t)) with radii rho/Phi^-1(1/t)"""
        M = self.M if M is None else M
        rho1 = self.rho1 if rho1 is None else rho1
        rho2 = self.rho2 if rho2 is None else rho2
        if not M > 1:
            raise ValueError(f"M must exceed 1: {M}")
        self._require_pure_jump()
        self._require_time(t)
        report = self.suite.scaling_report('phi_dd')
        if report.degenerate or report.alpha_hat < 1:
            raise HypothesisViolationError('alpha_hat >= 1')
        center = -t * float(self.suite.phi(self.suite.big_phi_inv(M / t), 1))
        scale = self.suite.big_phi_inv(1.0 / t)
        return ModeWindow(center=center, lower=center - rho1 / scale, upper=center + rho2 / scale,
                          scale=scale)

    def tail_lower_shape(self, t: float, x: float) -> float:
        """t nu(x): the right-tail lower-bound shape"""
        self._require_pure_jump()
        if not x > 0:
            raise ValueError(f"x must be positive: {x}")
        report = self.suite.scaling_report('phi_dd')
        if report.degenerate or not report.alpha_hat > 1:
            raise HypothesisViolationError('alpha_hat > 1')
        return t * self.suite.calculator.jump_density(x)

    def tail_region(self, t: float, x: float, rho0: Optional[float] = None) -> bool:
        """x Phi^-1(1/t) >= rho0"""
        rho0 = self.rho0 if rho0 is None else rho0
        return x * self.suite.big_phi_inv(1.0 / t) >= rho0

    def flat_window(self, t: float, chi1: float = -1.0, chi2: float = 1.0) -> Tuple[float, float]:
        """x-interval chi1 < x phi^-1(1/t) < chi2 on which the density is flat"""
        if not chi1 < chi2:
            raise ValueError(f"chi1 must be below chi2: ({chi1}, {chi2})")
        scale = self.suite.phi_inv(1.0 / t)
        return chi1 / scale, chi2 / scale

    # --- three-regime envelope -----------------------------------------------------------------

    def regime(self, t: float, x: float) -> Regime:
        return Regime.from_boundary(x * self.suite.phi_inv(1.0 / t))

    def envelope(self, t: float, x: float) -> Tuple[Regime, float]:
        """
        Branch of the three-regime envelope selected by x phi^-1(1/t)

        Returns:
            (Regime, value) with the value free of the unknown constants
        """
        failed = envelope_hypotheses(self.suite)
        if failed:
            raise HypothesisViolationError(failed[0])
        self._require_time(t)
        if self.suite.x0 > 0 and not x < 1.0 / self.suite.x0:
            raise HypothesisViolationError('x < 1/x0')
        regime = self.regime(t, x)
        if regime.tag == 'left_tail':
            saddle = saddle_w(self.suite, t, x)
            value = math.exp(-saddle.exponent) / math.sqrt(t * float(self.suite.phi(saddle.w, 2)))
        elif regime.tag == 'bulk':
            value = self.suite.phi_inv(1.0 / t)
        else:
            value = t * float(self.suite.phi(1.0 / x)) / x
        if self.debug:
            logger.debug("envelope(t=%g, x=%g): %s %.17g", t, x, regime.tag, value)
        return regime, value

    def envelope_grid(self, t: float, xs: Sequence[float]) -> List[Tuple[Regime, float]]:
        return [self.envelope(t, x) for x in np.asarray(xs, dtype=float)]


def eta(majorant: EtaMajorant, s: float) -> float:
    return majorant.eta(s)


def eta_doubling(majorant: EtaMajorant, grid: Sequence[float]) -> float:
    return majorant.doubling_constant(grid)


def drift_compensator(suite: ExponentSuite, r: float) -> float:
    return EnvelopeAnalyzer(suite).drift_compensator(r)


def upper_bound(suite: ExponentSuite, t: float, x: float) -> float:
    return EnvelopeAnalyzer(suite).upper_bound(t, x)


def mode_window(suite: ExponentSuite, t: float, M: float = DEFAULT_MODE_M,
                rho1: float = DEFAULT_RHO1, rho2: float = DEFAULT_RHO2) -> ModeWindow:
    return EnvelopeAnalyzer(suite).mode_window(t, M, rho1, rho2)


def tail_lower_shape(suite: ExponentSuite, t: float, x: float) -> float:
    return EnvelopeAnalyzer(suite).tail_lower_shape(t, x)


def envelope(suite: ExponentSuite, t: float, x: float) -> Tuple[Regime, float]:
    return EnvelopeAnalyzer(suite).envelope(t, x)
