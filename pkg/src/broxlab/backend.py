"""Kernel backend selection.

Hot numeric routines exist in two interchangeable flavours: a numba-jitted
one and a pure numpy/python one.  The active flavour is chosen once at
import time from the ``BROXLAB_BACKEND`` environment variable ("numba" or
"numpy"; default is numba when importable) and can be switched at runtime
with :func:`set_backend`, which benchmarks and tests use to compare both.
"""

from __future__ import annotations

import importlib.util
import os

try:
    import numba
    from numba import types

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only on numba-less installs
    numba = None
    types = None
    HAS_NUMBA = False

ENV_VAR = "BROXLAB_BACKEND"

_backend = None
_numba_impl = None


def _initial_backend() -> str:
    choice = os.environ.get(ENV_VAR, "").strip().lower()
    if choice in ("numba", "numpy"):
        if choice == "numba" and not HAS_NUMBA:
            raise RuntimeError(f"{ENV_VAR}=numba requested but numba is not importable")
        return choice
    return "numba" if HAS_NUMBA else "numpy"


def get_backend() -> str:
    """Name of the active backend, "numba" or "numpy"."""
    global _backend
    if _backend is None:
        _backend = _initial_backend()
    return _backend


def set_backend(name: str) -> None:
    """Switch backends at runtime.

    Objects built afterwards use the new backend; objective kernels cache
    per backend, so existing objectives keep working after a switch.
    """
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    _backend = name


def using_numba() -> bool:
    return get_backend() == "numba"


# Scalar objective kernels have the fixed signature float64(float64[::1])
# so that jitted drivers taking them as first-class function arguments
# compile once instead of respecializing per objective.
def scalar_signature():
    return types.float64(types.float64[::1])


def scalar_function_type():
    return types.FunctionType(scalar_signature())


def jit_scalar(pyfunc):
    """Compile a scalar objective kernel for the numba flavour."""
    return numba.njit(scalar_signature(), cache=False)(pyfunc)


# (name, signature builder) for every routine in _numeric, in dependency
# order: by the time a later routine compiles, its callees already resolve
# to jitted versions inside the fresh module copy.
def _numeric_signatures():
    f8 = types.float64
    i8 = types.int64
    vec = types.float64[::1]
    mat = types.float64[:, ::1]
    fn = scalar_function_type()
    return [
        ("eval_point", f8(fn, vec)),
        ("eval_batch", types.void(fn, mat, vec)),
        ("ternary_refine", types.UniTuple(f8, 2)(fn, f8, f8, i8)),
        ("grid_solve_1d", i8(fn, f8, f8, i8, i8, vec, vec)),
        ("ball_eval", f8(fn, vec, mat, vec, vec)),
        ("pgd_refine", f8(fn, vec, mat, vec, i8, f8)),
        ("multistart_solve", i8(fn, vec, mat, mat, i8, i8, f8, mat, vec)),
    ]


def _load_numba_numeric():
    """Fresh copy of broxlab._numeric with every routine njit-compiled."""
    spec = importlib.util.find_spec("broxlab._numeric")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    for name, sig in _numeric_signatures():
        jitted = numba.njit(sig, cache=True)(getattr(mod, name))
        setattr(mod, name, jitted)
    return mod


def numeric():
    """The numeric-core module matching the active backend."""
    global _numba_impl
    if using_numba():
        if _numba_impl is None:
            _numba_impl = _load_numba_numeric()
        return _numba_impl
    from broxlab import _numeric

    return _numeric
