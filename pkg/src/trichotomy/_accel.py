"""Numba switch.

Set ``TRICHOTOMY_DISABLE_NUMBA=1`` to run every hot kernel through its
pure-numpy fallback instead of the jitted loop.
"""

import os

_FLAG = os.environ.get("TRICHOTOMY_DISABLE_NUMBA", "").strip().lower()

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba ships with the environment
    _numba = None

USE_NUMBA = _numba is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if _numba is None:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn
    kwargs.setdefault("cache", True)
    return _numba.njit(*args, **kwargs)
