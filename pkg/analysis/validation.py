"""
Certification catalog: registry, sample grids and the runners that turn check functions
into CheckReports
"""

import importlib
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from data.models import CheckReport, GridSpec, OracleConfig
from calculations.exponents import ExponentSuite, log_grid
from calculations.inversion import InversionOracle
from analysis.envelopes import EnvelopeAnalyzer, HypothesisViolationError
from app_config import CHECK_RANGE, STABILITY_DRIFT, max_workers

logger = logging.getLogger(__name__)

CATALOG = (
    'INEQ_20', 'INEQ_47', 'USC_PHI', 'PROP5', 'COR3', 'LSC_CHAIN', 'EQ63', 'COR2', 'LEM2',
    'COR4', 'LEM1', 'EQ42', 'EQ43', 'EQ78', 'EQ44', 'EQ48', 'COR5', 'PROP6', 'PROP7', 'PROP8',
    'REM2', 'PROP9', 'PROP10', 'EQ17_45_72', 'PROP11', 'REM5', 'THM1_RATIO', 'THM2_UB',
    'LEM3_LB', 'LEM4_LB', 'THM3_FLAT', 'THM4_SANDWICH',
)

_CHECK_MODULES = ('analysis.exponent_checks', 'analysis.density_checks')


class GridError(Exception):
    """Custom exception for malformed sample grids"""
    pass


class SkipCheck(Exception):
    """Raised by a check whose hypothesis does not hold for the model"""

    def __init__(self, hypothesis: str):
        self.hypothesis = hypothesis
        super().__init__(hypothesis)


@dataclass
class CheckOutcome:
    """Raw result of a check function before it becomes a CheckReport"""
    ok: bool
    worst_ratio: float
    constants: Dict[str, float] = field(default_factory=dict)
    notes: str = ''
    tracked: Tuple[str, ...] = ()


@dataclass(frozen=True)
class _Registered:
    check_id: str
    func: Callable[['CheckContext'], CheckOutcome]
    stability: bool


_REGISTRY: Dict[str, _Registered] = {}


def register(check_id: str, stability: bool = False):
    """Decorator adding a check function to the catalog"""
    if check_id not in CATALOG:
        raise ValueError(f"Unknown check id: {check_id}")

    def decorator(func):
        _REGISTRY[check_id] = _Registered(check_id, func, stability)
        return func
    return decorator


def _load_catalog():
    for name in _CHECK_MODULES:
        importlib.import_module(name)


class CheckContext:
    """Model, grids and shared evaluators handed to every check function"""

    def __init__(self, suite: ExponentSuite, grid: GridSpec, oracle_config: Optional[OracleConfig] = None):
        self.suite = suite
        self.grid = grid
        self.analyzer = EnvelopeAnalyzer(suite)
        self.oracle = InversionOracle(suite, oracle_config)
        self.description = ''

    @property
    def slack(self) -> float:
        return self.suite.slack

    def scan_range(self) -> Tuple[float, float]:
        lo = self.grid.lo if self.grid.lo is not None else max(self.suite.x0, CHECK_RANGE[0])
        lo = max(lo, self.suite.x0) if self.suite.x0 > 0 else lo
        hi = self.grid.hi if self.grid.hi is not None else max(CHECK_RANGE[1], 1e3 * self.suite.x0)
        if not (0 < lo < hi and math.isfinite(hi)):
            raise GridError(f"Empty scan range ({lo}, {hi})")
        return lo, hi

    def xs(self, lo: Optional[float] = None, hi: Optional[float] = None,
           points_per_decade: Optional[int] = None) -> np.ndarray:
        """Log grid over the scan range, optionally clipped to (lo, hi)"""
        p_lo, p_hi = self.scan_range()
        lo = p_lo if lo is None else max(lo, p_lo)
        hi = p_hi if hi is None else min(hi, p_hi)
        ppd = points_per_decade or self.grid.points_per_decade
        if not lo < hi:
            return np.array([])
        self.description = f"log grid [{lo:.6g}, {hi:.6g}], {ppd}/decade"
        return log_grid(lo, hi, ppd)

    def value_grid(self, lo: float, hi: float) -> np.ndarray:
        """Coarser log grid in the value space of Phi/psi for inverse-function checks"""
        return log_grid(lo, hi, max(2, self.grid.points_per_decade // 8))

    @staticmethod
    def pairs(n: int) -> Tuple[np.ndarray, np.ndarray]:
        i, j = np.triu_indices(n, k=1)
        return i, j

    def require(self, condition: bool, hypothesis: str):
        if not condition:
            raise SkipCheck(hypothesis)

    def require_jumps(self):
        self.require(self.suite.model.jumps is not None, 'nu != 0')

    def require_pure_jump(self):
        self.require(self.suite.sigma == 0, 'sigma = 0')

    def index(self, target: str = 'phi_dd') -> float:
        report = self.suite.scaling_report(target, self.scan_range())
        self.require(not report.degenerate, f'non-degenerate {target} scaling report')
        return report.alpha_hat


def finite_positive(*values: float) -> bool:
    return all(math.isfinite(v) and v > 0 for v in values)


def spread(ratios: np.ndarray) -> Tuple[float, float, float]:
    """(min, max, max/min) of a ratio array"""
    ratios = np.asarray(ratios, dtype=float)
    lo, hi = float(ratios.min()), float(ratios.max())
    return lo, hi, hi / lo if lo > 0 else math.inf


def comparability(name: str, ratios: np.ndarray, notes: str = '',
                  max_spread: float = math.inf) -> CheckOutcome:
    """Outcome of a two-sided comparability claim: ratios finite, positive and max/min below max_spread"""
    if len(ratios) == 0:
        raise SkipCheck(f'nonempty range for {name}')
    lo, hi, width = spread(ratios)
    return CheckOutcome(ok=finite_positive(lo, hi) and width < max_spread, worst_ratio=width,
                        constants={f'{name}_min': lo, f'{name}_max': hi},
                        notes=notes, tracked=(f'{name}_min', f'{name}_max'))


def _drift(a: float, b: float) -> float:
    if a == b:
        return 0.0
    return abs(a - b) / max(abs(a), abs(b))


def run_check(suite: ExponentSuite,
              check_id: str,
              grid_spec: Optional[GridSpec] = None,
              oracle_config: Optional[OracleConfig] = None) -> CheckReport:
    """
    Run one certification and report it

    Args:
        suite: Exponent suite of the model
        check_id: Catalog identifier
        grid_spec: Sample grids (defaults from app_config)
        oracle_config: Settings for density-level checks

    Returns:
        CheckReport with status passed, failed or skipped
    """
    _load_catalog()
    if check_id not in _REGISTRY:
        raise GridError(f"Unknown check id: {check_id}")
    grid_spec = grid_spec or GridSpec()
    entry = _REGISTRY[check_id]
    ctx = CheckContext(suite, grid_spec, oracle_config)
    try:
        outcome = entry.func(ctx)
    except (SkipCheck, HypothesisViolationError) as e:
        hypothesis = getattr(e, 'hypothesis', str(e))
        logger.info("%s skipped: %s", check_id, hypothesis)
        return CheckReport(check_id, ctx.description, 'skipped', notes=f'hypothesis failed: {hypothesis}')

    constants = dict(outcome.constants)
    notes = outcome.notes
    ok = outcome.ok
    if entry.stability and grid_spec.refine and outcome.tracked:
        refined = entry.func(CheckContext(suite, grid_spec.refined(), oracle_config))
        drift = max(_drift(outcome.constants[k], refined.constants[k]) for k in outcome.tracked)
        constants['refinement_drift'] = drift
        if not drift < STABILITY_DRIFT:
            ok = False
            notes = (notes + '; ' if notes else '') + f'ratio drift {drift:.3g} under grid refinement'
    status = 'passed' if ok else 'failed'
    if not ok:
        logger.warning("%s failed: worst ratio %.6g %s", check_id, outcome.worst_ratio, notes)
    return CheckReport(check_id, ctx.description, status, outcome.worst_ratio, constants, notes)


def run_suite(suite: ExponentSuite,
              subset: Union[str, Sequence[str]] = 'all',
              grid_spec: Optional[GridSpec] = None,
              oracle_config: Optional[OracleConfig] = None) -> Tuple[List[CheckReport], Dict[str, object]]:
    """
    Run a set of checks concurrently, reported in catalog order

    Returns:
        (reports, summary) where summary counts statuses and 'ok' is False iff any check failed
    """
    if subset == 'all':
        ids = list(CATALOG)
    else:
        unknown = [c for c in subset if c not in CATALOG]
        if unknown:
            raise GridError(f"Unknown check ids: {unknown}")
        ids = [c for c in CATALOG if c in set(subset)]
    with ThreadPoolExecutor(max_workers=max_workers()) as pool:
        reports = list(pool.map(lambda c: run_check(suite, c, grid_spec, oracle_config), ids))
    summary = {
        'total': len(reports),
        'passed': sum(r.status == 'passed' for r in reports),
        'failed': sum(r.status == 'failed' for r in reports),
        'skipped': sum(r.status == 'skipped' for r in reports),
    }
    summary['ok'] = summary['failed'] == 0
    summary['failed_checks'] = [r.check_id for r in reports if r.status == 'failed']
    return reports, summary
