"""Numba acceleration switch.

Hot kernels are written once as plain functions over numpy arrays and
compiled with ``numba.njit`` when available.  Setting the environment
variable ``PERCOLAB_NO_NUMBA=1`` (before import) forces the pure-numpy
interpreter path; the same functions then run undecorated.  Useful for
debugging kernels and for benchmarking the compiled speedup
(see benchmarks/bench_kernels.py).
"""

from __future__ import annotations

import os

__all__ = ["HAS_NUMBA", "NUMBA_DISABLED", "njit"]

NUMBA_DISABLED = os.environ.get("PERCOLAB_NO_NUMBA", "").strip().lower() in {
    "1",
    "true",
    "yes",
}

HAS_NUMBA = False
if not NUMBA_DISABLED:
    try:
        from numba import njit as _numba_njit

        HAS_NUMBA = True
    except ImportError:
        HAS_NUMBA = False

if HAS_NUMBA:

    def njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        return _numba_njit(*args, **kwargs)

else:

    def njit(*args, **kwargs):
        # identity decorator: kernels run as plain python over numpy arrays
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap
