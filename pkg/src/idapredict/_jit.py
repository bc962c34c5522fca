"""Numba switch.

Hot kernels are decorated with :func:`njit` from this module.  Setting
``IDAPREDICT_NOJIT=1`` in the environment replaces the decorator with the
identity so every kernel runs as plain Python/NumPy (slow, but useful for
debugging and for the kernel benchmark).
"""

import os

NOJIT = os.environ.get("IDAPREDICT_NOJIT", "").strip().lower() in ("1", "true", "yes")

if NOJIT:
    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(fn):
            return fn
        return wrap

    prange = range
else:
    import numba

    def njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        if len(args) == 1 and callable(args[0]):
            return numba.njit(**kwargs)(args[0])
        return numba.njit(*args, **kwargs)

    prange = numba.prange


def backend():
    return "python" if NOJIT else "numba"
