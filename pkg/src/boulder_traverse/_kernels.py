"""Kernel backend dispatch.

The numba backend is the default; set BOULDER_TRAVERSE_NUMBA=0 to force the
pure-numpy reference path. BOULDER_TRAVERSE_THREADS caps the worker count of
the parallel seed relaxation.
"""

from __future__ import annotations

import os

import numpy as np

from .settings import DescentSettings

_env = os.environ.get("BOULDER_TRAVERSE_NUMBA", "1").strip().lower()
_want_numba = _env not in ("0", "false", "no", "off")

if _want_numba:
    try:
        from . import _kernels_numba as _impl

        BACKEND = "numba"
    except ImportError:
        from . import _kernels_numpy as _impl

        BACKEND = "numpy"
else:
    from . import _kernels_numpy as _impl

    BACKEND = "numpy"


def pack_settings(s: DescentSettings) -> np.ndarray:
    """Flatten the descent settings for the compiled kernels."""
    return np.array(
        [
            s.step_init,
            s.step_min,
            s.grad_tol_z,
            float(s.iter_max),
            s.delta_xy,
            s.delta_theta,
            s.theta_arm,
            s.polish_step_init,
            s.polish_step_min,
        ],
        dtype=np.float64,
    )


def apply_thread_cap() -> None:
    """Cap numba's worker threads from BOULDER_TRAVERSE_THREADS, if set."""
    if BACKEND != "numba":
        return
    raw = os.environ.get("BOULDER_TRAVERSE_THREADS", "").strip()
    if not raw:
        return
    try:
        n = int(raw)
    except ValueError:
        return
    if n < 1:
        return
    import numba

    numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


resolve_z = _impl.resolve_z
grad_z = _impl.grad_z
relax_run = _impl.relax_run
morph_run = _impl.morph_run
batch_descent = _impl.batch_descent
