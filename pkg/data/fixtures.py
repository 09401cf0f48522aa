"""
Reference models with known closed forms, used by the tests and as CLI examples
"""

import math
from typing import Dict

from data.models import (LevyModel, Stable, StableBoundary, TemperedStable, TruncatedStable,
                         Custom, Mixture)
from calculations.levy_model import calibrated_stable_scale, centered_drift


def brownian(sigma: float = 1.0, b: float = 0.0) -> LevyModel:
    """phi(lam) = sigma^2 lam^2 - b lam"""
    return LevyModel(sigma=sigma, b=b)


def stable(alpha: float = 1.5) -> LevyModel:
    """Centered stable model calibrated so that phi(lam) = lam^alpha"""
    jumps = Stable(alpha=alpha, scale=calibrated_stable_scale(alpha))
    return LevyModel(sigma=0.0, b=centered_drift(jumps), jumps=jumps)


def stable_boundary(scale: float = 1.0) -> LevyModel:
    """Centered alpha = 1 model: phi(lam) = scale * lam * ln(lam)"""
    jumps = StableBoundary(scale=scale)
    return LevyModel(sigma=0.0, b=centered_drift(jumps), jumps=jumps)


def tempered(alpha: float = 1.5, theta: float = 1.0) -> LevyModel:
    """Centered tempered stable model with the calibrated stable scale"""
    jumps = TemperedStable(alpha=alpha, theta=theta, scale=calibrated_stable_scale(alpha))
    return LevyModel(sigma=0.0, b=centered_drift(jumps), jumps=jumps)


def mixture() -> LevyModel:
    """Stable 1.5 plus tempered stable 1.2, centered"""
    jumps = Mixture((Stable(alpha=1.5, scale=calibrated_stable_scale(1.5)),
                     TemperedStable(alpha=1.2, theta=1.0, scale=calibrated_stable_scale(1.2))))
    return LevyModel(sigma=0.0, b=centered_drift(jumps), jumps=jumps)


def truncated(alpha: float = 0.5, cutoff: float = 1.0, sigma: float = 0.0) -> LevyModel:
    """
    Truncated stable model. With alpha < 1 and sigma = 0 it has bounded variation and
    fails validation; sigma > 0 restores the unbounded-variation class.
    """
    jumps = TruncatedStable(alpha=alpha, cutoff=cutoff)
    return LevyModel(sigma=sigma, b=centered_drift(jumps), jumps=jumps)


def custom_stable(alpha: float = 1.5) -> LevyModel:
    """The calibrated stable density supplied as a user callable (quadrature path)"""
    scale = calibrated_stable_scale(alpha)
    jumps = Custom(density=lambda x: scale * x ** (-1.0 - alpha),
                   singularity_order=alpha,
                   decay_hint='polynomial',
                   tail_hint=lambda u: scale * u ** -alpha / alpha,
                   monotone=True)
    return LevyModel(sigma=0.0, b=-scale / (alpha - 1.0), jumps=jumps)


def model_documents() -> Dict[str, dict]:
    """JSON model documents of the fixtures the CLI accepts"""
    return {
        'brownian': {'sigma': 1.0, 'b': 0.0},
        'stable': {'sigma': 0.0, 'b': 'centered', 'jumps': {'family': 'stable', 'alpha': 1.5}},
        'stable_boundary': {'sigma': 0.0, 'b': 'centered', 'jumps': {'family': 'stable_boundary'}},
        'tempered': {'sigma': 0.0, 'b': 'centered',
                     'jumps': {'family': 'tempered_stable', 'alpha': 1.5, 'theta': 1.0,
                               'scale': calibrated_stable_scale(1.5)}},
        'truncated': {'sigma': 1.0, 'b': 'centered',
                      'jumps': {'family': 'truncated_stable', 'alpha': 0.5, 'cutoff': 1.0}},
    }


def gaussian_density(t: float, x: float, sigma: float = 1.0) -> float:
    """Exact transition density of the model phi(lam) = sigma^2 lam^2"""
    variance = 2.0 * sigma ** 2 * t
    return math.exp(-x * x / (2.0 * variance)) / math.sqrt(2.0 * math.pi * variance)
