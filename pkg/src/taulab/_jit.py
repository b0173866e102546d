"""Backend selection for the hot kernels.

``TAULAB_BACKEND=numpy`` forces the pure-numpy path; anything else uses numba
when it imports cleanly.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAS_NUMBA = numba is not None
BACKEND = "numpy" if os.environ.get("TAULAB_BACKEND", "").lower() == "numpy" or not HAS_NUMBA else "numba"


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise the undecorated function."""
    if HAS_NUMBA:
        return numba.njit(*args, cache=True, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn
