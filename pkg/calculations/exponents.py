"""
Laplace and characteristic exponents of a spectrally positive Levy model

ExponentSuite bundles phi and its derivatives, psi, the Pruitt functions K and h,
Phi(x) = x^2 phi''(x), the running suprema psi* and Phi* with their generalized inverses,
the roots theta0/theta1 and empirical weak-scaling reports.
"""

import logging
import math
import threading
from typing import Dict, Optional, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from data.models import LevyModel, Window, ScalingReport, SCALING_TARGETS
from calculations.errors import (NumericalError, DivergentMomentError, NoBracketError,
                                 PoleAtThetaError, QuadratureError)
from calculations.levy_model import LevyModelCalculator, ArrayLike, LADDER_READINGS
from calculations.envelope_table import MonotoneEnvelope
from app_config import (DEFAULT_REL_TOL, ROOT_TOL, OVERFLOW_GUARD, CHECK_POINTS_PER_DECADE,
                        CHECK_RANGE, INDEX_TOLERANCE, EXACT_SLACK, QUADRATURE_SLACK)

logger = logging.getLogger(__name__)


def _scalar_or_array(values: np.ndarray, like) -> ArrayLike:
    if np.ndim(like) == 0:
        return float(values)
    return values


def log_grid(lo: float, hi: float, points_per_decade: int) -> np.ndarray:
    """Log-spaced grid including both ends"""
    count = max(2, int(round(math.log10(hi / lo) * points_per_decade)) + 1)
    return np.logspace(math.log10(lo), math.log10(hi), count)


class ExponentSuite:
    """Evaluators for the exponents of one Levy model"""

    def __init__(self,
                 model: LevyModel,
                 rel_tol: float = DEFAULT_REL_TOL,
                 validate: bool = True,
                 debug: bool = False):
        """
        Initialize the suite and solve for the roots theta0, theta1

        Args:
            model: Levy triplet
            rel_tol: Relative tolerance of the jump-measure quadratures
            validate: Raise on models outside the unbounded-variation class
            debug: Log intermediate values at DEBUG level
        """
        self.model = model
        self.debug = debug
        self.calculator = LevyModelCalculator(model, rel_tol=rel_tol, debug=debug)
        if validate:
            self.calculator.ensure_valid()
        self.kernel = self.calculator.kernel
        self.slack = EXACT_SLACK if self.kernel.closed_form else QUADRATURE_SLACK
        self._lock = threading.Lock()
        self._psi_envelope: Optional[MonotoneEnvelope] = None
        self._phi_envelope: Optional[MonotoneEnvelope] = None
        self._reports: Dict[Tuple[str, Tuple[float, float], int], ScalingReport] = {}
        self.theta0, self.theta1 = self._solve_roots()
        if debug:
            logger.debug("roots: theta0=%.17g theta1=%.17g", self.theta0, self.theta1)

    @property
    def sigma(self) -> float:
        return self.model.sigma

    @property
    def x0(self) -> float:
        return self.model.x0

    # --- phi ------------------------------------------------------------------------------

    def phi(self, lam: ArrayLike, order: int = 0) -> ArrayLike:
        """
        Laplace exponent phi(lam) = log E exp(-lam X_1) or one of its first three derivatives

        Args:
            lam: Nonnegative argument (scalar or array)
            order: Derivative order in 0..3

        Returns:
            Value(s) of phi^(order) at lam
        """
        if order not in (0, 1, 2, 3):
            raise ValueError(f"Derivative order must be in 0..3: {order}")
        arr = np.asarray(lam, dtype=float)
        if np.any(~(arr >= 0)):
            raise ValueError(f"phi needs lambda >= 0: {lam}")
        s2, b = self.sigma ** 2, self.model.b
        if order == 0:
            gaussian = s2 * arr ** 2 - b * arr
        elif order == 1:
            gaussian = 2.0 * s2 * arr - b
        elif order == 2:
            gaussian = np.full_like(arr, 2.0 * s2)
        else:
            gaussian = np.zeros_like(arr)
        jumps = np.asarray(self.kernel.laplace(arr, order), dtype=float)
        return _scalar_or_array(gaussian + jumps, lam)

    def phi_complex(self, z) -> Union[complex, np.ndarray]:
        """Holomorphic extension of phi to Re z >= 0"""
        arr = np.asarray(z, dtype=complex)
        if np.any(arr.real < 0):
            raise ValueError("phi_complex needs Re z >= 0")
        values = self.sigma ** 2 * arr ** 2 - self.model.b * arr + self.kernel.laplace_complex_array(arr)
        if arr.ndim == 0:
            return complex(values)
        return values

    def char_exponent(self, xi) -> Union[complex, np.ndarray]:
        """psi(xi) = -phi(-i xi), so that E exp(i xi X_t) = exp(-t psi(xi))"""
        arr = np.asarray(xi, dtype=float)
        values = -np.asarray(self.phi_complex(-1j * arr), dtype=complex)
        if arr.ndim == 0:
            return complex(values)
        return values

    def re_psi(self, xi: ArrayLike) -> ArrayLike:
        """Re psi(xi) = sigma^2 xi^2 + integral of (1 - cos(xi s)) nu(ds)"""
        arr = np.abs(np.asarray(xi, dtype=float))
        if self.kernel.closed_form:
            return _scalar_or_array(np.real(np.asarray(self.char_exponent(arr))), xi)
        jumps = np.array([self.kernel.cosine_integral(v) for v in arr.ravel()]).reshape(arr.shape)
        return _scalar_or_array(self.sigma ** 2 * arr ** 2 + jumps, xi)

    # --- Pruitt functions ---------------------------------------------------------------------

    def pruitt_K(self, r: ArrayLike) -> ArrayLike:
        """K(r) = sigma^2/r^2 + r^-2 * integral over (0, r) of s^2 nu(ds)"""
        arr = np.asarray(r, dtype=float)
        if np.any(~(arr > 0)):
            raise ValueError(f"K needs r > 0: {r}")
        moments = np.array([self.kernel.moment(2, 0.0, 0.0, v) for v in arr.ravel()]).reshape(arr.shape)
        # divide before squaring: r^2 overflows long before K does
        return _scalar_or_array((self.sigma / arr) ** 2 + moments / arr / arr, r)

    def pruitt_h(self, r: ArrayLike) -> ArrayLike:
        """h(r) = sigma^2/r^2 + integral of (1 ^ s^2/r^2) nu(ds) = K(r) + nu((r, inf))"""
        arr = np.asarray(r, dtype=float)
        tails = np.array([self.kernel.tail(v) for v in arr.ravel()]).reshape(arr.shape)
        return _scalar_or_array(np.asarray(self.pruitt_K(arr)) + tails, r)

    def pruitt_h_inv(self, s: float) -> float:
        """Inverse of the strictly decreasing function h"""
        if not s > 0:
            raise ValueError(f"h^-1 needs s > 0: {s}")
        lo, hi = 1.0, 1.0
        while self.pruitt_h(lo) <= s:
            lo /= 2.0
            if lo < 1.0 / OVERFLOW_GUARD:
                raise NoBracketError(f"h never exceeds {s}")
        while self.pruitt_h(hi) > s:
            hi *= 2.0
            if hi > OVERFLOW_GUARD:
                raise NoBracketError(f"h never drops below {s}")
        return brentq(lambda r: self.pruitt_h(r) - s, lo, hi, xtol=ROOT_TOL * lo, rtol=ROOT_TOL)

    # --- Phi and envelopes --------------------------------------------------------------------

    def big_phi(self, x: ArrayLike) -> ArrayLike:
        """Phi(x) = x^2 phi''(x)"""
        arr = np.asarray(x, dtype=float)
        if np.any(~(arr > 0)):
            raise ValueError(f"Phi needs x > 0: {x}")
        return _scalar_or_array(arr ** 2 * np.asarray(self.phi(arr, 2)), x)

    def _envelope(self, name: str) -> MonotoneEnvelope:
        with self._lock:
            if name == 'Phi':
                if self._phi_envelope is None:
                    self._phi_envelope = MonotoneEnvelope(self.big_phi, name='Phi')
                return self._phi_envelope
            if self._psi_envelope is None:
                self._psi_envelope = MonotoneEnvelope(self.re_psi, name='psi')
            return self._psi_envelope

    def big_phi_star(self, r: float) -> float:
        return self._envelope('Phi').value(r)

    def big_phi_inv(self, s: float) -> float:
        """Right-sided inverse of Phi*; Phi*(Phi^-1(s)) = s"""
        return self._envelope('Phi').inverse(s)

    def psi_star(self, r: float) -> float:
        return self._envelope('psi').value(r)

    def psi_inv(self, s: float) -> float:
        return self._envelope('psi').inverse(s)

    def phi_inv(self, s: float) -> float:
        """Inverse of phi on (theta0, inf)"""
        if not s > 0:
            raise ValueError(f"phi^-1 needs s > 0: {s}")
        lo = self.theta0
        hi = max(1.0, 2.0 * lo)
        while self.phi(hi) <= s:
            lo = hi
            hi *= 2.0
            if hi > OVERFLOW_GUARD:
                raise NoBracketError(f"phi never exceeds {s}")
        root = brentq(lambda v: self.phi(v) - s, lo, hi, xtol=ROOT_TOL * max(lo, 1e-300), rtol=ROOT_TOL)
        return float(root)

    # --- roots ----------------------------------------------------------------------------------

    def phi_d1_at_zero(self) -> float:
        """phi'(0+), -inf when the jump tail has infinite mean"""
        try:
            return float(self.phi(0.0, 1))
        except DivergentMomentError:
            return -math.inf

    def _solve_roots(self) -> Tuple[float, float]:
        d0 = self.phi_d1_at_zero()
        # centered models land on phi'(0+) = 0 up to round-off
        if d0 >= -1e-14 * (1.0 + abs(self.model.b)):
            return 0.0, 0.0
        try:
            lo = 0.0 if math.isfinite(d0) else 1e-300
            hi = 1.0
            while self.phi(hi, 1) <= 0:
                lo = hi
                hi *= 2.0
                if hi > OVERFLOW_GUARD:
                    raise NoBracketError("phi' never becomes positive on the scan range")
            theta1 = brentq(lambda v: self.phi(v, 1), lo, hi, xtol=ROOT_TOL, rtol=ROOT_TOL)

            lo, hi = theta1, max(2.0 * theta1, 1.0)
            while self.phi(hi) <= 0:
                lo = hi
                hi *= 2.0
                if hi > OVERFLOW_GUARD:
                    raise NoBracketError("phi never becomes positive on the scan range")
            theta0 = brentq(lambda v: self.phi(v), lo, hi, xtol=ROOT_TOL, rtol=ROOT_TOL)
            for _ in range(2):
                slope = self.phi(theta0, 1)
                if slope > 0:
                    theta0 -= self.phi(theta0) / slope
        except Exception as e:
            if isinstance(e, NumericalError):
                raise
            raise NoBracketError(f"Error solving for theta0/theta1: {str(e)}")
        return float(theta0), float(theta1)

    def roots(self) -> Tuple[float, float]:
        """(theta0, theta1): largest root of phi and the point where phi' turns positive"""
        return self.theta0, self.theta1

    def ladder_exponent(self, lam: float) -> float:
        """Laplace exponent phi(lam)/(lam - theta0) of the ascending ladder height"""
        if not lam > 0:
            raise ValueError(f"Ladder exponent needs lambda > 0: {lam}")
        if abs(lam - self.theta0) <= ROOT_TOL * (1.0 + self.theta0):
            raise PoleAtThetaError(f"lambda = {lam} coincides with theta0 = {self.theta0}")
        return float(self.phi(lam)) / (lam - self.theta0)

    def ladder_tail(self, x: float, reading: str = 'corrected') -> float:
        return self.calculator.ladder_tail(x, self.theta0, reading)

    # --- scaling reports ------------------------------------------------------------------------

    def default_scan_range(self) -> Tuple[float, float]:
        lo = max(self.x0, CHECK_RANGE[0])
        hi = CHECK_RANGE[1] if CHECK_RANGE[1] > 10.0 * lo else 1e3 * lo
        return lo, hi

    def _scaling_values(self, target: str, xs: np.ndarray) -> np.ndarray:
        if target == 'phi':
            return np.asarray(self.phi(xs), dtype=float)
        if target == 'phi_dd':
            return np.asarray(self.phi(xs, 2), dtype=float)
        if target == 're_psi':
            return np.asarray(self.re_psi(xs), dtype=float)
        return np.asarray(self.big_phi(xs), dtype=float)

    def scaling_report(self,
                       target: str = 'Phi',
                       scan_range: Optional[Tuple[float, float]] = None,
                       points_per_decade: int = CHECK_POINTS_PER_DECADE) -> ScalingReport:
        """
        Empirical weak lower/upper scaling indices of a target function.

        Indices are the extreme chord slopes of log f over all grid pairs x < y; for
        phi_dd the index of phi'' is shifted by 2 so that stable models report alpha.
        c_hat and C_hat are the extreme ratios (f(y)/f(x)) / (y/x)^index over all pairs.
        A declared model index is checked against alpha_hat for phi_dd and Phi.
        """
        if target not in SCALING_TARGETS:
            raise ValueError(f"Invalid scaling target: {target}. Must be one of {SCALING_TARGETS}")
        if scan_range is None:
            scan_range = self.default_scan_range()
        lo, hi = float(scan_range[0]), float(scan_range[1])
        key = (target, (lo, hi), points_per_decade)
        with self._lock:
            if key in self._reports:
                return self._reports[key]

        report = self._compute_scaling(target, lo, hi, points_per_decade)
        with self._lock:
            self._reports[key] = report
        return report

    def _compute_scaling(self, target: str, lo: float, hi: float, points_per_decade: int) -> ScalingReport:
        nan = math.nan
        if not (0 < lo < hi and math.isfinite(hi)):
            return ScalingReport(target, (lo, hi), nan, nan, nan, nan, 0, degenerate=True,
                                 notes='empty or invalid scan range')
        if lo < self.x0:
            logger.warning("Scan range starts below x0 = %g", self.x0)
        xs = log_grid(lo, hi, points_per_decade)
        try:
            fs = self._scaling_values(target, xs)
        except QuadratureError as e:
            return ScalingReport(target, (lo, hi), nan, nan, nan, nan, 0, degenerate=True,
                                 notes=f'evaluation failed: {str(e)}')
        keep = np.isfinite(fs) & (fs > 0)
        xs, fs = xs[keep], fs[keep]
        if len(xs) < 2:
            return ScalingReport(target, (lo, hi), nan, nan, nan, nan, int(len(xs)), degenerate=True,
                                 notes='fewer than two points with a positive value')

        log_x, log_f = np.log(xs), np.log(fs)
        dx = log_x[None, :] - log_x[:, None]
        df = log_f[None, :] - log_f[:, None]
        upper = np.triu(np.ones_like(dx, dtype=bool), k=1)
        slopes = df[upper] / dx[upper]
        shift = 2.0 if target == 'phi_dd' else 0.0
        alpha_hat = float(slopes.min()) + shift
        beta_hat = float(slopes.max()) + shift

        lower_index = alpha_hat
        upper_index = beta_hat
        if self.model.declared_alpha is not None and target != 're_psi':
            lower_index = min(lower_index, self.model.declared_alpha)
        if self.model.declared_beta is not None and target != 're_psi':
            upper_index = max(upper_index, self.model.declared_beta)
        c_hat = float(min(1.0, np.exp(df[upper] - (lower_index - shift) * dx[upper]).min()))
        C_hat = float(max(1.0, np.exp(df[upper] - (upper_index - shift) * dx[upper]).max()))
        if self.debug:
            logger.debug("scaling %s on (%g, %g): alpha=%.6f beta=%.6f c=%.4g C=%.4g",
                         target, lo, hi, alpha_hat, beta_hat, c_hat, C_hat)
        declared_consistent = None
        notes = ''
        if self.model.declared_alpha is not None and target in ('phi_dd', 'Phi'):
            declared_consistent = self.model.declared_alpha <= alpha_hat + INDEX_TOLERANCE
            if not declared_consistent:
                notes = (f"declared_alpha {self.model.declared_alpha:g} exceeds alpha_hat "
                         f"{alpha_hat:.6g} + {INDEX_TOLERANCE:g}")
                logger.warning("Scaling report for %s: %s", target, notes)
        return ScalingReport(target, (lo, hi), alpha_hat, beta_hat, c_hat, C_hat, int(len(xs)),
                             notes=notes, declared_consistent=declared_consistent)
