"""Optional numba acceleration.

Set ``LAZARD_NUMBA=0`` in the environment to force the pure-numpy kernels.
"""
import os

USE_NUMBA = os.environ.get("LAZARD_NUMBA", "1").lower() not in ("0", "false", "no", "off")

if USE_NUMBA:
    try:
        import numba as _nb
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if USE_NUMBA:
    import functools

    njit = functools.partial(_nb.njit, cache=True, nogil=True)
else:

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f
