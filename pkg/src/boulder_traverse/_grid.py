"""Shared constants for the pose-resolver kernels.

Both kernel backends consume the same precomputed pitch grid so their coarse
scans see bit-identical inputs.
"""

import numpy as np

from .settings import ALPHA_MAX, ALPHA_COARSE_STEP, ALPHA_REFINE_TOL

N_ALPHA = int(round(2.0 * ALPHA_MAX / ALPHA_COARSE_STEP)) + 1
ALPHA_GRID = np.linspace(-ALPHA_MAX, ALPHA_MAX, N_ALPHA)
COS_ALPHA = np.cos(ALPHA_GRID)
SIN_ALPHA = np.sin(ALPHA_GRID)

INVPHI = (np.sqrt(5.0) - 1.0) / 2.0
INVPHI2 = (3.0 - np.sqrt(5.0)) / 2.0

REFINE_TOL = ALPHA_REFINE_TOL

# relax status codes
STATUS_CONVERGED_GRAD = 0
STATUS_CONVERGED_STEP = 1
STATUS_MAX_ITERS = 2
