"""
Adaptive quadrature helpers: log-substituted QUADPACK integration, oscillatory
weights and Gauss-Legendre panels
"""

import logging
import math
from functools import lru_cache
from typing import Callable, Iterable, Optional, Tuple

import numpy as np
from scipy import integrate

from calculations.errors import QuadratureError, DivergentMomentError
from app_config import DEFAULT_REL_TOL, MAX_QUAD_EVALUATIONS, QUAD_SUBINTERVAL_LIMIT

logger = logging.getLogger(__name__)

_LOG_MAX = 700.0
_LOG_MIN = -745.0


class _EvaluationBudget:
    """Counts integrand evaluations across the pieces of one integral"""

    def __init__(self, cap: int):
        self.cap = cap
        self.used = 0

    def wrap(self, f: Callable[[float], float]) -> Callable[[float], float]:
        def counted(v):
            self.used += 1
            if self.used > self.cap:
                raise QuadratureError(f"Evaluation cap of {self.cap} reached")
            return f(v)
        return counted


def quad_checked(f: Callable[[float], float],
                 a: float,
                 b: float,
                 rel_tol: float = DEFAULT_REL_TOL,
                 abs_floor: float = 1e-300,
                 weight: Optional[str] = None,
                 wvar: Optional[float] = None) -> float:
    """
    Run scipy.integrate.quad and turn unreliable results into exceptions.

    QUADPACK warnings are accepted when the reported error estimate is still within a
    hundred times the requested tolerance; divergence (ier=5) becomes
    DivergentMomentError, anything else QuadratureError.
    """
    kwargs = {'epsrel': rel_tol, 'epsabs': abs_floor, 'full_output': 1}
    if weight is not None:
        kwargs['weight'] = weight
        kwargs['wvar'] = wvar
        if not math.isinf(b):
            kwargs['limit'] = QUAD_SUBINTERVAL_LIMIT
        else:
            kwargs['limlst'] = 200
    else:
        kwargs['limit'] = QUAD_SUBINTERVAL_LIMIT

    try:
        out = integrate.quad(f, a, b, **kwargs)
    except QuadratureError:
        raise
    except Exception as e:
        raise QuadratureError(f"Quadrature on ({a}, {b}) raised: {str(e)}")

    value, abserr = float(out[0]), float(out[1])
    if not math.isfinite(value):
        raise QuadratureError(f"Quadrature on ({a}, {b}) returned {value}")
    if len(out) > 3:
        message = str(out[3])
        if 'divergent' in message.lower():
            raise DivergentMomentError(f"Integral on ({a}, {b}) is probably divergent")
        if abserr <= max(100.0 * rel_tol * abs(value), abs_floor):
            logger.warning("Accepted QUADPACK warning on (%g, %g): %s", a, b, message.splitlines()[0])
        else:
            raise QuadratureError(
                f"Quadrature on ({a}, {b}) failed: {message.splitlines()[0]} "
                f"(value={value:.6g}, abserr={abserr:.3g})")
    return value


def _log_bounds(lo: float, hi: float) -> Tuple[float, float]:
    va = math.log(lo) if lo > 0 else -math.inf
    vb = math.log(hi) if math.isfinite(hi) else math.inf
    return va, vb


def integrate_log(f: Callable[[float], float],
                  lo: float,
                  hi: float,
                  rel_tol: float = DEFAULT_REL_TOL,
                  breakpoints: Iterable[float] = (),
                  abs_floor: float = 1e-300,
                  max_evaluations: int = MAX_QUAD_EVALUATIONS) -> float:
    """
    Integrate f over (lo, hi) with the substitution s = e^v.

    The range is split at 1 and at any breakpoints inside it; each piece is integrated in
    log-scale where power-law singularities at 0 and heavy tails become smooth.
    """
    if hi <= lo:
        return 0.0
    cuts = sorted({lo, hi, *(p for p in list(breakpoints) + [1.0] if lo < p < hi)})
    budget = _EvaluationBudget(max_evaluations)

    def g(v):
        if v > _LOG_MAX or v < _LOG_MIN:
            return 0.0
        s = math.exp(v)
        return f(s) * s

    counted = budget.wrap(g)
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        va, vb = _log_bounds(a, b)
        va = max(va, _LOG_MIN) if math.isfinite(va) else va
        total += quad_checked(counted, va, vb, rel_tol=rel_tol, abs_floor=abs_floor)
    logger.debug("integrate_log(%g, %g): %d evaluations", lo, hi, budget.used)
    return total


def integrate_oscillatory(f: Callable[[float], float],
                          lo: float,
                          hi: float,
                          omega: float,
                          kind: str,
                          rel_tol: float = DEFAULT_REL_TOL,
                          abs_floor: float = 1e-300) -> float:
    """
    Integrate f(s) * cos(omega s) or f(s) * sin(omega s) over (lo, hi).

    Finite ranges go to QAWO, infinite ones to QAWF, which integrates cycle by cycle
    between zeros of the weight and extrapolates the series of cycle contributions.
    """
    if hi <= lo:
        return 0.0
    if omega == 0.0:
        if kind == 'sin':
            return 0.0
        return quad_checked(f, lo, hi, rel_tol=rel_tol, abs_floor=abs_floor)
    sign = 1.0
    if omega < 0:
        omega = -omega
        if kind == 'sin':
            sign = -1.0
    if math.isinf(hi):
        # QAWF accepts only an absolute tolerance
        return sign * quad_checked(f, lo, hi, rel_tol=rel_tol, abs_floor=max(abs_floor, 1e-15),
                                   weight=kind, wvar=omega)
    return sign * quad_checked(f, lo, hi, rel_tol=rel_tol, abs_floor=abs_floor,
                               weight=kind, wvar=omega)


@lru_cache(maxsize=8)
def gauss_legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]"""
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gl_panel(g: Callable[[np.ndarray], np.ndarray], a: float, b: float, n: int) -> float:
    """Apply the n-point Gauss-Legendre rule to a vectorised integrand on [a, b]"""
    nodes, weights = gauss_legendre(n)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    return float(half * np.dot(weights, g(mid + half * nodes)))
