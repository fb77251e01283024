"""Backend selection for the hot kernels.

Set ``WITTCONICS_NUMBA=0`` in the environment to force the pure-numpy path.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("WITTCONICS_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


def njit(func):
    """Compile with numba when available; otherwise return the function unchanged."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
