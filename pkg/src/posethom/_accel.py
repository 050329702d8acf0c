"""Numba switch.

Kernels are compiled whenever numba is importable; ``POSETHOM_NUMBA=0``
routes the dispatcher to the pure-numpy kernels instead (debugging, and the
benchmark that compares both paths).
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_flag = os.environ.get("POSETHOM_NUMBA", "1").strip().lower()
USE_NUMBA = numba is not None and _flag not in ("0", "false", "no", "off")


def njit(func):
    if numba is None:  # pragma: no cover
        return func
    return numba.njit(cache=True)(func)
