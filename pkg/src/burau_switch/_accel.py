"""JIT switch for the numeric kernels.

Set ``BURAU_SWITCH_DISABLE_JIT=1`` to run every kernel as plain numpy/Python.
The flag is read once at import time; it also takes effect when numba is
not importable.
"""
import os

_FLAG = "BURAU_SWITCH_DISABLE_JIT"


def _env_disabled():
    return os.environ.get(_FLAG, "").strip().lower() not in ("", "0", "false", "no")


try:
    import numba
except ImportError:  # pragma: no cover - numba ships with the env
    numba = None

JIT_ENABLED = numba is not None and not _env_disabled()


def njit(*args, **kwargs):
    """``numba.njit`` when enabled, otherwise an identity decorator."""
    if JIT_ENABLED:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def wrap(func):
        return func

    return wrap


def backend_name():
    return "numba" if JIT_ENABLED else "numpy"
