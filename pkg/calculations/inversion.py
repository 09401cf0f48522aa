"""
Contour-inversion oracle for transition densities

p(t, x) = (1 / 2 pi i) * integral over Re z = w of exp(t phi(z) + z x) dz

evaluated on a vertical line Re z = w, rescaled by s = (t phi''(w))^(-1/2) so that the
integrand is close to exp(-u^2/2) when w is the saddle point. The half-line integral is
truncated where a fitted stretched-exponential majorant drops below tolerance, then
computed with Gauss-Legendre panels refined dyadically.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from data.models import DensityEstimate, OracleConfig
from calculations.errors import (OutOfRangeError, NoConvergenceError,
                                 NegativeDensityError, DivergentMomentError)
from calculations.exponents import ExponentSuite
from calculations.quadrature import gauss_legendre, quad_checked, integrate_log
from calculations.saddlepoint import saddle_w, asym_density
from app_config import (GL_NODES, ORACLE_TAIL_SAFETY, ORACLE_MAX_REFINEMENT_DEPTH, max_workers)

logger = logging.getLogger(__name__)

_INITIAL_RADIUS = 8.0
_MAX_RADIUS = 2.0 ** 40
_LEFT_EXPONENT_CUTOFF = 40.0
_RIGHT_EXTENT = 1000.0


@dataclass(frozen=True)
class _Contour:
    w: float
    scale: float
    log_prefactor: float


@dataclass(frozen=True)
class _LineIntegral:
    value: float
    error: float
    nodes: int
    radius: float


class InversionOracle:
    """Evaluates transition densities by numerical Laplace inversion"""

    def __init__(self, suite: ExponentSuite, config: Optional[OracleConfig] = None, debug: bool = False):
        """
        Initialize oracle

        Args:
            suite: Exponent suite of the model
            config: Tolerance, contour and node-budget settings
            debug: Log panel refinement at DEBUG level
        """
        self.suite = suite
        self.config = config or OracleConfig()
        self.debug = debug

    # --- contours ----------------------------------------------------------------------------

    def _saddle_contour(self, t: float, x: float) -> Optional[_Contour]:
        try:
            saddle = saddle_w(self.suite, t, x)
        except OutOfRangeError:
            return None
        if saddle.w <= max(self.suite.x0, self.suite.theta1):
            return None
        return _Contour(saddle.w, 1.0 / math.sqrt(t * float(self.suite.phi(saddle.w, 2))), -saddle.exponent)

    def _fixed_contour(self, t: float, x: float, w: float) -> _Contour:
        d2 = float(self.suite.phi(w, 2))
        return _Contour(w, 1.0 / math.sqrt(t * d2), t * float(self.suite.phi(w)) + w * x)

    def contour(self, t: float, x: float) -> _Contour:
        """Abscissa and scale of the inversion line for (t, x)"""
        if not isinstance(self.config.contour_w, str):
            return self._fixed_contour(t, x, float(self.config.contour_w))
        contour = self._saddle_contour(t, x)
        if contour is not None:
            return contour
        w = self.suite.big_phi_inv(1.0 / t)
        if x != 0:
            w = min(w, 1.0 / abs(x))
        return self._fixed_contour(t, x, w)

    # --- line integral -----------------------------------------------------------------------

    def _integrand(self, t: float, x: float, w: float, scale: float) -> Tuple[Callable, Callable]:
        phi_w = complex(self.suite.phi_complex(w)) if w > 0 else 0j

        def exponent(u: np.ndarray) -> np.ndarray:
            v = scale * np.asarray(u, dtype=float)
            z = w + 1j * v
            return t * (np.asarray(self.suite.phi_complex(z)) - phi_w) + 1j * v * x

        def integrand(u: np.ndarray) -> np.ndarray:
            with np.errstate(over='ignore', under='ignore'):
                return np.exp(exponent(u)).real

        def log_modulus(u: float) -> float:
            return float(exponent(np.array([u]))[0].real)

        return integrand, log_modulus

    def _panel_sum(self, integrand: Callable, radius: float, panels: int) -> Tuple[float, float]:
        nodes, weights = gauss_legendre(GL_NODES)
        edges = np.linspace(0.0, radius, panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        points = mid[:, None] + half[:, None] * nodes[None, :]
        values = integrand(points.ravel()).reshape(points.shape)
        return float(np.sum(half * (values @ weights))), float(np.sum(half * (np.abs(values) @ weights)))

    def _tail_bound(self, log_modulus: Callable, radius: float) -> Tuple[float, float]:
        """
        Fit -log|integrand| ~ C u^kappa on {U/2, U} and integrate the fitted majorant beyond U.

        Returns:
            (bound, kappa), kappa NaN when no fit was possible
        """
        l_half = -log_modulus(0.5 * radius)
        l_full = -log_modulus(radius)
        if not (l_full > l_half > 0 and math.isfinite(l_full)):
            return (math.inf if not l_full > 700 else 0.0), math.nan
        kappa = self.config.tail_alpha or math.log(l_full / l_half) / math.log(2.0)
        if not kappa > 0:
            return math.inf, kappa
        # integral of exp(-C u^kappa) over (U, inf) is Gamma(1/kappa, C U^kappa) / (kappa C^(1/kappa))
        a = 1.0 / kappa
        q = float(special.gammaincc(a, l_full))
        if q == 0.0:
            return 0.0, kappa
        log_c = math.log(l_full) - kappa * math.log(radius)
        log_tail = math.log(q) + float(special.gammaln(a)) - a * log_c - math.log(kappa)
        return ORACLE_TAIL_SAFETY * math.exp(min(log_tail, 700.0)), kappa

    def _line_integral(self, t: float, x: float, w: float, scale: float, slope: float) -> _LineIntegral:
        rel_tol = self.config.rel_tol
        integrand, log_modulus = self._integrand(t, x, w, scale)
        # initial panels span at most about two oscillations of the phase
        width = 1.0 if slope == 0 else min(1.0, 4.0 * math.pi / slope)
        radius = _INITIAL_RADIUS
        while True:
            bound, _ = self._tail_bound(log_modulus, radius)
            if math.isfinite(bound) or radius >= _MAX_RADIUS:
                if math.isfinite(bound):
                    break
                raise NoConvergenceError(f"Integrand does not decay on the line Re z = {w:.6g}")
            radius *= 2.0

        last = math.nan
        while True:
            panels = max(1, int(math.ceil(radius / width)))
            previous, _ = self._panel_sum(integrand, radius, panels)
            change = math.inf
            for depth in range(ORACLE_MAX_REFINEMENT_DEPTH):
                panels *= 2
                if panels * GL_NODES > self.config.max_nodes:
                    raise NoConvergenceError(
                        f"Node cap {self.config.max_nodes} reached at (t={t}, x={x}), change={change:.3g}")
                current, magnitude = self._panel_sum(integrand, radius, panels)
                change = abs(current - previous)
                previous = current
                # cancellation caps the reachable accuracy at round-off of the modulus integral
                if change <= max(0.1 * rel_tol * abs(current), 1e-14 * magnitude):
                    break
            else:
                raise NoConvergenceError(f"Panel refinement did not converge at (t={t}, x={x})")

            bound, kappa = self._tail_bound(log_modulus, radius)
            # below kappa = 1 the fitted majorant is not trusted alone: the radius must also settle
            settled = not kappa < 1 or abs(current - last) <= rel_tol * abs(current)
            if (bound <= rel_tol * abs(current) and settled) or radius >= _MAX_RADIUS:
                break
            last = current
            radius *= 2.0

        if self.debug:
            logger.debug("line integral (t=%g, x=%g): w=%.6g radius=%g panels=%d value=%.17g",
                         t, x, w, radius, panels, current)
        return _LineIntegral(current, change + bound, panels * GL_NODES, radius)

    def _assemble(self, t: float, x: float, contour: _Contour, line: _LineIntegral,
                  method: str) -> DensityEstimate:
        factor = math.exp(contour.log_prefactor) * contour.scale / math.pi
        value = factor * line.value
        error = factor * line.error
        clamped = False
        if value < 0:
            if value < -self.config.rel_tol:
                raise NegativeDensityError(f"Inversion gave p({t}, {x}) = {value:.6g}")
            logger.warning("Clamped slightly negative density %.3g at (t=%g, x=%g)", value, t, x)
            value, clamped = 0.0, True
        return DensityEstimate(t=t, x=x, value=value, method=method, error=error,
                               contour_w=contour.w, nodes_used=line.nodes, clamped=clamped)

    # --- public operations -------------------------------------------------------------------

    def density(self, t: float, x: float) -> DensityEstimate:
        """Density on the auto-selected (or configured) vertical contour"""
        if not t > 0:
            raise ValueError(f"Time must be positive: {t}")
        contour = self.contour(t, x)
        try:
            drift = float(self.suite.phi(contour.w, 1))
        except DivergentMomentError:
            drift = 0.0
        slope = contour.scale * abs(x + t * drift)
        line = self._line_integral(t, x, contour.w, contour.scale, slope)
        return self._assemble(t, x, contour, line, 'oracle')

    def saddle_ratio(self, t: float, x: float) -> Tuple[float, float]:
        """
        Ratio of the inverted density to the saddle-point asymptotic at (t, x).

        Both carry the factor exp(-t(w phi'(w) - phi(w))), which cancels, so the ratio
        stays finite where the density itself underflows.

        Returns:
            (ratio, hardness)
        """
        saddle = saddle_w(self.suite, t, x)
        if saddle.w <= max(self.suite.x0, self.suite.theta1):
            raise OutOfRangeError(f"Saddle point {saddle.w:.6g} is not above max(x0, theta1)")
        scale = 1.0 / math.sqrt(t * float(self.suite.phi(saddle.w, 2)))
        line = self._line_integral(t, x, saddle.w, scale, 0.0)
        return scale * line.value / math.pi / saddle.prefactor, saddle.hardness

    def density_psi(self, t: float, x: float) -> DensityEstimate:
        """Density along the imaginary axis from the characteristic exponent"""
        if not t > 0:
            raise ValueError(f"Time must be positive: {t}")
        scale = self.suite.big_phi_inv(1.0 / t)
        contour = _Contour(0.0, scale, 0.0)
        line = self._line_integral(t, x, 0.0, scale, scale * abs(x))
        return self._assemble(t, x, contour, line, 'oracle_psi')

    def cross_contour(self, t: float, x: float) -> Tuple[float, float, float]:
        a = self.density(t, x).value
        b = self.density_psi(t, x).value
        return a, b, abs(a - b) / max(a, b, 1e-300)

    def total_mass(self, t: float) -> float:
        """
        Integral of p(t, .) over the line.

        The left end is where the saddle-point exponent exceeds 40; beyond the right end
        X the mass is replaced by t * nu((X, inf)).
        """
        if not t > 0:
            raise ValueError(f"Time must be positive: {t}")
        spread = 1.0 / self.suite.big_phi_inv(1.0 / t)
        mean = t * self.suite.model.b if self.suite.model.jumps is None else 0.0
        left = mean - spread
        while True:
            try:
                if saddle_w(self.suite, t, left).exponent > _LEFT_EXPONENT_CUTOFF:
                    break
            except OutOfRangeError:
                pass
            left = mean - 2.0 * (mean - left)
            if mean - left > 1e12 * spread:
                raise NoConvergenceError("Left tail of the density does not close")

        def p(x):
            return self.density(t, x).value

        if self.suite.model.jumps is None:
            right = 2.0 * mean - left
            return quad_checked(p, left, right, rel_tol=1e-9, abs_floor=1e-12)
        right = _RIGHT_EXTENT * spread
        body = quad_checked(p, left, 0.0, rel_tol=1e-9, abs_floor=1e-12)
        body += integrate_log(p, 0.0, right, rel_tol=1e-9, abs_floor=1e-12)
        return body + t * self.suite.kernel.tail(right)

    def sweep(self, t: float, xs: Sequence[float], method: str = 'oracle') -> List[DensityEstimate]:
        """Evaluate a method over an x-grid concurrently, preserving order"""
        evaluators = {'oracle': self.density, 'oracle_psi': self.density_psi,
                      'asym': lambda tt, xx: asym_density(self.suite, tt, xx)}
        if method not in evaluators:
            raise ValueError(f"Invalid method: {method}. Must be one of {tuple(evaluators)}")
        evaluator = evaluators[method]
        with ThreadPoolExecutor(max_workers=max_workers()) as pool:
            return list(pool.map(lambda xx: evaluator(t, xx), xs))


def density_oracle(suite: ExponentSuite, t: float, x: float,
                   config: Optional[OracleConfig] = None) -> DensityEstimate:
    return InversionOracle(suite, config).density(t, x)


def oracle_psi_route(suite: ExponentSuite, t: float, x: float,
                     config: Optional[OracleConfig] = None) -> DensityEstimate:
    return InversionOracle(suite, config).density_psi(t, x)


def oracle_cross_contour(suite: ExponentSuite, t: float, x: float,
                         config: Optional[OracleConfig] = None) -> Tuple[float, float, float]:
    return InversionOracle(suite, config).cross_contour(t, x)


def total_mass(suite: ExponentSuite, t: float, config: Optional[OracleConfig] = None) -> float:
    return InversionOracle(suite, config).total_mass(t)
