"""Kernel backend selection: numba-compiled or pure numpy.

The hot kernels are written in a numba-compatible numpy subset and compiled
once at import when numba is available.  Set FLOQUET_BARRIER_BACKEND=numpy to
force the interpreted fallback (useful for debugging and as a baseline for
benchmarks/bench_backends.py); =numba insists on compilation.
"""

from __future__ import annotations

import os

_requested = os.environ.get("FLOQUET_BARRIER_BACKEND", "auto").lower()
if _requested not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"FLOQUET_BARRIER_BACKEND must be auto|numba|numpy, got {_requested!r}"
    )

if _requested == "numpy":
    BACKEND = "numpy"
else:
    try:
        import numba  # noqa: F401

        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        BACKEND = "numpy"


def jit(func):
    """Compile `func` with numba when the numba backend is active."""
    if BACKEND == "numba":
        import numba

        return numba.njit(cache=True, nogil=True)(func)
    return func
