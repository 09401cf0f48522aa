"""Configuration constants for the spectrally positive density toolkit"""

import os

# Quadrature
DEFAULT_REL_TOL = 1e-10
MAX_QUAD_EVALUATIONS = 10**6
QUAD_SUBINTERVAL_LIMIT = 500
SERIES_SWITCH = 1e-3          # |z s| below which expm1(-zs) + zs uses its Taylor series
DENSITY_LOG_CAP = 600.0       # near-zero quadratures start where nu(s) <= e^600 under the declared singularity

# Root finding
ROOT_TOL = 1e-12
MAX_NEWTON_ITERATIONS = 200
NON_CONTRACTING_LIMIT = 3
OVERFLOW_GUARD = 1e300

# Monotone envelope tables
ENVELOPE_NODES_PER_DECADE = 512
ENVELOPE_INITIAL_RANGE = (1e-3, 1e3)
ENVELOPE_EXTENSION_FACTOR = 1e3
ENVELOPE_LOCAL_SAMPLES = 8
ENVELOPE_MIN_ARGUMENT = 1e-250
ENVELOPE_MAX_ARGUMENT = 1e250
ENVELOPE_INVERSE_RTOL = 1e-15     # brentq refuses rtol below 4 * machine epsilon

# Contour-inversion oracle
ORACLE_REL_TOL = 1e-9
GL_NODES = 32
ORACLE_MAX_NODES = 2**21
ORACLE_TAIL_SAFETY = 4.0
ORACLE_MAX_REFINEMENT_DEPTH = 30

# Envelope constants
DEFAULT_MODE_M = 2.0
DEFAULT_RHO1 = 1.0
DEFAULT_RHO2 = 1.0
DEFAULT_RHO0 = 2.0 * DEFAULT_MODE_M
CENTERED_TOL = 1e-8

# Validation grids
CHECK_POINTS_PER_DECADE = 64
CHECK_RANGE = (1e-3, 1e3)
LEM1_SAMPLES = 16
DENSITY_CHECK_TIMES = (0.05, 0.2, 1.0)
DENSITY_CHECK_POINTS = 33
STABILITY_DRIFT = 0.05
EXACT_SLACK = 1e-9
QUADRATURE_SLACK = 1e-7
INDEX_TOLERANCE = 0.1

# Density-level acceptance bounds
SANDWICH_MAX_SPREAD = 100.0
SANDWICH_REGIME_SPREAD = 20.0
FLAT_MAX_SPREAD = 10.0
TAIL_LAW_BAND = (0.5, 2.0)
TAIL_LAW_LIMIT_BAND = (0.8, 1.25)

# CLI
OUTPUT_SIGNIFICANT_DIGITS = 17
EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_NUMERICAL = 3
EXIT_HYPOTHESIS = 4
THREADS_ENV_VAR = 'SPD_THREADS'


def max_workers() -> int:
    """Worker cap for grid sweeps, honouring SPD_THREADS when set"""
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw:
        try:
            value = int(raw)
            if value >= 1:
                return value
        except ValueError:
            pass
    return os.cpu_count() or 1
