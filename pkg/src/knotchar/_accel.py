"""Numba switch.

Kernels in :mod:`knotchar.kernels` are compiled with numba unless the
environment variable ``KNOTCHAR_DISABLE_JIT`` is set to a truthy value, in
which case the vectorised numpy implementations are used instead.  The flag
is read once at import time.
"""

import os

_flag = os.environ.get("KNOTCHAR_DISABLE_JIT", "").strip().lower()
JIT_REQUESTED = _flag in ("", "0", "false", "no", "off")

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

JIT_ENABLED = JIT_REQUESTED and HAVE_NUMBA


def njit(*args, **kwargs):
    """``numba.njit`` with on-disk caching, or a no-op without numba."""
    if HAVE_NUMBA:
        import numba

        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda f: f
