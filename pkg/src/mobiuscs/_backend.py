"""Kernel backend selection.

Hot inner loops (trajectory integration, lattice sums on dense grids) are
compiled with numba when it is importable.  Setting the environment variable
``MOBIUSCS_NO_NUMBA=1`` before import forces the pure numpy/Python path; the
kernels are written so the same source runs under both backends.  The
``benchmarks/`` scripts time one backend against the other.
"""

import os

ENV_FLAG = "MOBIUSCS_NO_NUMBA"


def numba_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in ("1", "true", "yes", "on")


try:
    if numba_disabled():
        raise ImportError("numba disabled via " + ENV_FLAG)
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        # mimic the decorator-with-arguments form of numba.njit
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


def py_func(kernel):
    """Return the uncompiled Python version of a (possibly) jitted kernel."""
    return getattr(kernel, "py_func", kernel)
