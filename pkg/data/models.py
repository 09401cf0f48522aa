"""
Data models for spectrally positive Levy processes and their density estimates
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Dict, Any, Tuple, Callable, Union, List

from app_config import (ORACLE_REL_TOL, ORACLE_MAX_NODES, CHECK_POINTS_PER_DECADE,
                        DENSITY_CHECK_TIMES, DENSITY_CHECK_POINTS)


DECAY_HINTS = ('exponential', 'polynomial')


@dataclass(frozen=True)
class Stable:
    """Stable jump density scale * x^(-1-alpha), alpha in (1, 2)"""
    alpha: float
    scale: float = 1.0
    family = 'stable'

    def __post_init__(self):
        if not 1 < self.alpha < 2:
            raise ValueError(f"Stable alpha must be in (1, 2): {self.alpha}")
        if not self.scale > 0:
            raise ValueError(f"Stable scale must be positive: {self.scale}")

    def to_dict(self) -> Dict[str, Any]:
        return {'family': self.family, 'alpha': self.alpha, 'scale': self.scale}


@dataclass(frozen=True)
class StableBoundary:
    """Cauchy-type jump density scale * x^(-2) (the alpha = 1 boundary case)"""
    scale: float = 1.0
    family = 'stable_boundary'

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError(f"StableBoundary scale must be positive: {self.scale}")

    @property
    def alpha(self) -> float:
        return 1.0

    def to_dict(self) -> Dict[str, Any]:
        return {'family': self.family, 'scale': self.scale}


@dataclass(frozen=True)
class TemperedStable:
    """Tempered stable jump density scale * exp(-theta x) * x^(-1-alpha)"""
    alpha: float
    theta: float
    scale: float = 1.0
    family = 'tempered_stable'

    def __post_init__(self):
        if not 0 < self.alpha < 2:
            raise ValueError(f"TemperedStable alpha must be in (0, 2): {self.alpha}")
        if not self.theta > 0:
            raise ValueError(f"TemperedStable theta must be positive: {self.theta}")
        if not self.scale > 0:
            raise ValueError(f"TemperedStable scale must be positive: {self.scale}")

    def to_dict(self) -> Dict[str, Any]:
        return {'family': self.family, 'alpha': self.alpha, 'theta': self.theta,
                'scale': self.scale}


@dataclass(frozen=True)
class TruncatedStable:
    """Truncated stable jump density scale * x^(-1-alpha) on (0, cutoff)"""
    alpha: float
    cutoff: float
    scale: float = 1.0
    family = 'truncated_stable'

    def __post_init__(self):
        if not 0 < self.alpha < 2:
            raise ValueError(f"TruncatedStable alpha must be in (0, 2): {self.alpha}")
        if not self.cutoff > 0:
            raise ValueError(f"TruncatedStable cutoff must be positive: {self.cutoff}")
        if not self.scale > 0:
            raise ValueError(f"TruncatedStable scale must be positive: {self.scale}")

    def to_dict(self) -> Dict[str, Any]:
        return {'family': self.family, 'alpha': self.alpha, 'cutoff': self.cutoff,
                'scale': self.scale}


@dataclass(frozen=True)
class Custom:
    """
    User supplied jump density.

    The density alone cannot tell whether the measure has unbounded variation or how
    fast it decays, so both behaviours have to be declared: singularity_order is rho in
    nu(x) ~ x^(-1-rho) near 0, decay_hint drives tail truncation.
    """
    density: Callable[[float], float]
    singularity_order: float
    decay_hint: str = 'exponential'
    tail_hint: Optional[Callable[[float], float]] = None
    monotone: Optional[bool] = None
    family = 'custom'

    def __post_init__(self):
        if not callable(self.density):
            raise ValueError("Custom density must be callable")
        if self.decay_hint not in DECAY_HINTS:
            raise ValueError(f"Invalid decay_hint: {self.decay_hint}. Must be one of {DECAY_HINTS}")
        if not math.isfinite(self.singularity_order):
            raise ValueError(f"Singularity order must be finite: {self.singularity_order}")

    def to_dict(self) -> Dict[str, Any]:
        return {'family': self.family, 'singularity_order': self.singularity_order,
                'decay_hint': self.decay_hint}


@dataclass(frozen=True)
class Mixture:
    """Sum of jump measures"""
    components: Tuple[Any, ...]
    family = 'mixture'

    def __post_init__(self):
        object.__setattr__(self, 'components', tuple(self.components))
        if not self.components:
            raise ValueError("Mixture needs at least one component")
        for component in self.components:
            if not isinstance(component, JUMP_FAMILY_TYPES):
                raise ValueError(f"Invalid mixture component: {component!r}")

    def to_dict(self) -> Dict[str, Any]:
        return {'family': self.family,
                'components': [component.to_dict() for component in self.components]}


JUMP_FAMILY_TYPES = (Stable, StableBoundary, TemperedStable, TruncatedStable, Custom, Mixture)
JumpFamily = Union[Stable, StableBoundary, TemperedStable, TruncatedStable, Custom, Mixture]


def default_x0(jumps: Optional[JumpFamily]) -> float:
    """Smallest anchor above which weak lower scaling of phi'' is expected"""
    if jumps is None or isinstance(jumps, (Stable, StableBoundary, Custom)):
        return 0.0
    if isinstance(jumps, TemperedStable):
        return jumps.theta
    if isinstance(jumps, TruncatedStable):
        return 1.0 / jumps.cutoff
    return max(default_x0(component) for component in jumps.components)


@dataclass(frozen=True)
class LevyModel:
    """Levy triplet (sigma, b, nu) under the 1{x<1} truncation convention"""
    sigma: float
    b: float
    jumps: Optional[JumpFamily] = None
    x0: Optional[float] = None
    declared_alpha: Optional[float] = None
    declared_beta: Optional[float] = None

    def __post_init__(self):
        """Validate data after initialization"""
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise ValueError(f"Sigma must be a nonnegative real: {self.sigma}")
        if not math.isfinite(self.b):
            raise ValueError(f"Drift must be finite: {self.b}")
        if self.jumps is not None and not isinstance(self.jumps, JUMP_FAMILY_TYPES):
            raise ValueError(f"Invalid jump family: {self.jumps!r}")
        if self.jumps is None and self.sigma == 0:
            raise ValueError("Model without jumps needs sigma > 0")
        if self.x0 is None:
            object.__setattr__(self, 'x0', default_x0(self.jumps))
        if not (math.isfinite(self.x0) and self.x0 >= 0):
            raise ValueError(f"Scaling anchor x0 must be a nonnegative real: {self.x0}")
        if (self.declared_alpha is not None and self.declared_beta is not None
                and self.declared_alpha > self.declared_beta):
            raise ValueError(f"declared_alpha {self.declared_alpha} exceeds declared_beta {self.declared_beta}")

    @property
    def is_brownian(self) -> bool:
        return self.jumps is None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization"""
        data = {'sigma': self.sigma, 'b': self.b, 'x0': self.x0}
        if self.jumps is not None:
            data['jumps'] = self.jumps.to_dict()
        if self.declared_alpha is not None:
            data['declared_alpha'] = self.declared_alpha
        if self.declared_beta is not None:
            data['declared_beta'] = self.declared_beta
        return data


@dataclass(frozen=True)
class Window:
    """Integration window for jump-measure moments"""
    kind: str = 'all'
    lo: float = 0.0
    hi: float = math.inf

    KINDS = ('all', 'below', 'above', 'between')

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"Invalid window kind: {self.kind}. Must be one of {self.KINDS}")
        if self.lo < 0 or self.hi < self.lo:
            raise ValueError(f"Invalid window bounds: ({self.lo}, {self.hi})")

    @classmethod
    def all(cls) -> 'Window':
        return cls('all')

    @classmethod
    def below(cls, r: float) -> 'Window':
        return cls('below', 0.0, r)

    @classmethod
    def above(cls, r: float) -> 'Window':
        return cls('above', r, math.inf)

    @classmethod
    def between(cls, lo: float, hi: float) -> 'Window':
        return cls('between', lo, hi)


@dataclass(frozen=True)
class ValidationVerdict:
    """Outcome of validate_model: ok, or the list of violated invariants"""
    ok: bool
    violations: Tuple[Tuple[str, str], ...] = ()
    finite_variation_integral: float = math.nan

    def to_dict(self) -> Dict[str, Any]:
        return {
            'ok': self.ok,
            'violations': [{'code': code, 'reason': reason} for code, reason in self.violations],
            'finite_variation_integral': self.finite_variation_integral,
        }


SCALING_TARGETS = ('phi', 'phi_dd', 're_psi', 'Phi')


@dataclass(frozen=True)
class ScalingReport:
    """Empirical weak-scaling indices of one exponent-derived function"""
    target: str
    scan_range: Tuple[float, float]
    alpha_hat: float
    beta_hat: float
    c_hat: float
    C_hat: float
    points: int
    degenerate: bool = False
    notes: str = ''
    declared_consistent: Optional[bool] = None

    def __post_init__(self):
        if self.target not in SCALING_TARGETS:
            raise ValueError(f"Invalid scaling target: {self.target}. Must be one of {SCALING_TARGETS}")
        if not self.degenerate:
            if self.alpha_hat > self.beta_hat:
                raise ValueError(f"alpha_hat {self.alpha_hat} exceeds beta_hat {self.beta_hat}")
            if not (0 < self.c_hat <= 1 <= self.C_hat):
                raise ValueError(f"Comparability constants out of order: c={self.c_hat}, C={self.C_hat}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            'target': self.target,
            'scan_range': list(self.scan_range),
            'alpha_hat': self.alpha_hat,
            'beta_hat': self.beta_hat,
            'c_hat': self.c_hat,
            'C_hat': self.C_hat,
            'points': self.points,
            'degenerate': self.degenerate,
            'notes': self.notes,
            'declared_consistent': self.declared_consistent,
        }


@dataclass(frozen=True)
class SaddleResult:
    """Saddle point w = (phi')^-1(-x/t) and the quantities built from it"""
    t: float
    x: float
    w: float
    hardness: float
    exponent: float
    prefactor: float

    def __post_init__(self):
        if not self.w > 0:
            raise ValueError(f"Saddle point must be positive: {self.w}")
        if not self.prefactor > 0:
            raise ValueError(f"Prefactor must be positive: {self.prefactor}")


DENSITY_METHODS = ('asym', 'oracle', 'oracle_psi', 'envelope')


@dataclass(frozen=True)
class DensityEstimate:
    """A density value tagged with how it was obtained and how far to trust it"""
    t: float
    x: float
    value: float
    method: str
    error: float
    hardness: Optional[float] = None
    contour_w: Optional[float] = None
    nodes_used: Optional[int] = None
    clamped: bool = False
    regime: Optional[str] = None

    def __post_init__(self):
        if self.method not in DENSITY_METHODS:
            raise ValueError(f"Invalid method: {self.method}. Must be one of {DENSITY_METHODS}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            't': self.t, 'x': self.x, 'value': self.value, 'method': self.method,
            'error': self.error, 'hardness': self.hardness, 'contour_w': self.contour_w,
            'nodes_used': self.nodes_used, 'clamped': self.clamped, 'regime': self.regime,
        }


@dataclass(frozen=True)
class OracleConfig:
    """Settings of the contour-inversion oracle"""
    rel_tol: float = ORACLE_REL_TOL
    contour_w: Union[str, float] = 'auto'
    max_nodes: int = ORACLE_MAX_NODES
    tail_alpha: Optional[float] = None

    def __post_init__(self):
        if not 0 < self.rel_tol < 1:
            raise ValueError(f"rel_tol must be in (0, 1): {self.rel_tol}")
        if isinstance(self.contour_w, str):
            if self.contour_w != 'auto':
                raise ValueError(f"contour_w must be 'auto' or a positive number: {self.contour_w}")
        elif not (math.isfinite(self.contour_w) and self.contour_w > 0):
            raise ValueError(f"Fixed contour abscissa must be positive: {self.contour_w}")
        if self.max_nodes < 64:
            raise ValueError(f"max_nodes too small: {self.max_nodes}")
        if self.tail_alpha is not None and not self.tail_alpha > 0:
            raise ValueError(f"tail_alpha must be positive: {self.tail_alpha}")


REGIME_TAGS = ('left_tail', 'bulk', 'right_tail')


@dataclass(frozen=True)
class Regime:
    """Branch of the three-regime envelope selected by x * phi^-1(1/t)"""
    tag: str
    boundary_value: float

    def __post_init__(self):
        if self.tag not in REGIME_TAGS:
            raise ValueError(f"Invalid regime tag: {self.tag}")
        if self.tag != self.classify(self.boundary_value):
            raise ValueError(f"Regime {self.tag} inconsistent with boundary value {self.boundary_value}")

    @staticmethod
    def classify(boundary_value: float) -> str:
        if boundary_value <= -1:
            return 'left_tail'
        if boundary_value <= 1:
            return 'bulk'
        return 'right_tail'

    @classmethod
    def from_boundary(cls, boundary_value: float) -> 'Regime':
        return cls(cls.classify(boundary_value), boundary_value)


@dataclass(frozen=True)
class ModeWindow:
    """x-interval around -t phi'(Phi^-1(M/t)) where the density is flat"""
    center: float
    lower: float
    upper: float
    scale: float

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper


CHECK_STATUSES = ('passed', 'failed', 'skipped')


@dataclass
class CheckReport:
    """Outcome of one numerical certification"""
    check_id: str
    grid: str
    status: str
    worst_ratio: float = math.nan
    empirical_constants: Dict[str, float] = field(default_factory=dict)
    notes: str = ''

    def __post_init__(self):
        if self.status not in CHECK_STATUSES:
            raise ValueError(f"Invalid status: {self.status}. Must be one of {CHECK_STATUSES}")

    @property
    def passed(self) -> bool:
        return self.status == 'passed'

    @property
    def skipped(self) -> bool:
        return self.status == 'skipped'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'check_id': self.check_id,
            'grid': self.grid,
            'status': self.status,
            'passed': self.passed,
            'worst_ratio': self.worst_ratio,
            'empirical_constants': dict(self.empirical_constants),
            'notes': self.notes,
        }


@dataclass(frozen=True)
class GridSpec:
    """Sample grids used by the certification catalog"""
    lo: Optional[float] = None
    hi: Optional[float] = None
    points_per_decade: int = CHECK_POINTS_PER_DECADE
    t_values: Tuple[float, ...] = DENSITY_CHECK_TIMES
    x_points: int = DENSITY_CHECK_POINTS
    refine: bool = True

    def __post_init__(self):
        object.__setattr__(self, 't_values', tuple(self.t_values))
        if self.lo is not None and not self.lo > 0:
            raise ValueError(f"Grid lower end must be positive: {self.lo}")
        if self.lo is not None and self.hi is not None and not self.hi > self.lo:
            raise ValueError(f"Grid upper end must exceed lower end: ({self.lo}, {self.hi})")
        if self.points_per_decade < 2:
            raise ValueError(f"points_per_decade must be >= 2: {self.points_per_decade}")
        if self.x_points < 3:
            raise ValueError(f"x_points must be >= 3: {self.x_points}")
        if not self.t_values or any(not t > 0 for t in self.t_values):
            raise ValueError(f"t_values must be positive: {self.t_values}")

    def refined(self) -> 'GridSpec':
        return GridSpec(self.lo, self.hi, 2 * self.points_per_decade, self.t_values,
                        2 * self.x_points - 1, refine=False)


COMMANDS = ('exponent', 'density', 'check', 'scaling')


@dataclass
class RunConfig:
    """Fully validated CLI run configuration"""
    command: str
    model: LevyModel
    grid: Optional[List[float]] = None
    what: Tuple[str, ...] = ()
    method: str = 'all'
    t: Optional[float] = None
    rel_tol: float = ORACLE_REL_TOL
    suite: Union[str, Tuple[str, ...]] = 'all'
    target: str = 'Phi'
    scan_range: Optional[Tuple[float, float]] = None
    out: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"Invalid command: {self.command}. Must be one of {COMMANDS}")
        if not 0 < self.rel_tol < 1:
            raise ValueError(f"rel_tol must be in (0, 1): {self.rel_tol}")
        if self.grid is not None:
            values = list(self.grid)
            if any(not math.isfinite(v) for v in values):
                raise ValueError("Grid values must be finite")
            if any(b <= a for a, b in zip(values, values[1:])):
                raise ValueError("Grid must be strictly increasing")
