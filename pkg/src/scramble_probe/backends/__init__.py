"""Kernel backend selection.

The hot gate loops exist twice: a numba-compiled module and a pure-numpy
fallback with identical semantics.  The active path is chosen once at
import from the SCRAMBLE_PROBE_KERNELS environment variable:

    SCRAMBLE_PROBE_KERNELS=numba   require the compiled path
    SCRAMBLE_PROBE_KERNELS=numpy   force the fallback
    SCRAMBLE_PROBE_KERNELS=auto    compiled if numba imports, else fallback

`use()` switches the path at runtime (tests and the kernel benchmark do
this); simulation code fetches the module via `kernels()` per circuit, so
the switch takes effect immediately.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

from . import numpy_kernels

ENV_VAR = "SCRAMBLE_PROBE_KERNELS"

_modules = {"numpy": numpy_kernels}
_active = "numpy"


def _load_numba():
    if "numba" not in _modules:
        from . import numba_kernels

        _modules["numba"] = numba_kernels
    return _modules["numba"]


def _resolve(choice: str) -> str:
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        _load_numba()
        return "numba"
    if choice == "auto":
        try:
            _load_numba()
            return "numba"
        except ImportError:
            return "numpy"
    raise ValueError(f"{ENV_VAR} must be numba, numpy, or auto; got {choice!r}")


def active() -> str:
    return _active


def kernels():
    return _modules[_active]


def use(name: str) -> str:
    """Switch the kernel path; returns the previously active name."""
    global _active
    previous = _active
    _active = _resolve(name)
    return previous


@contextmanager
def using(name: str):
    previous = use(name)
    try:
        yield kernels()
    finally:
        use(previous)


use(os.environ.get(ENV_VAR, "auto"))
