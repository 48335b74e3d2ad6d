"""Numba switch.

Set ``TREESVM_DISABLE_NUMBA=1`` to run every hot kernel on the pure-numpy
path. The flag is read once at import time.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None

USE_NUMBA = numba is not None and os.environ.get("TREESVM_DISABLE_NUMBA", "0") not in ("1", "true", "yes")


def njit(fn):
    """``numba.njit(cache=True)`` when enabled, identity otherwise."""
    if USE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
