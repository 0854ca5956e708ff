"""Kernel backend selection.

The compiled extension is preferred when built; the NumPy/SciPy fallback
is always available. MIBRV_BACKEND=numpy|cython forces a choice at
import time, and use_backend() switches at runtime (the benchmark uses
this to compare both).
"""

import os
import warnings

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built; pure fallback still works
    _ckernels = None

_BACKENDS = {"numpy": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels


def _default_backend():
    requested = os.environ.get("MIBRV_BACKEND")
    if requested:
        if requested in _BACKENDS:
            return _BACKENDS[requested]
        warnings.warn(
            f"MIBRV_BACKEND={requested!r} is not available "
            f"(have: {', '.join(sorted(_BACKENDS))}); using the default",
            RuntimeWarning,
            stacklevel=2,
        )
    return _BACKENDS.get("cython", _pykernels)


_active = _default_backend()


def backend_name() -> str:
    """Name of the kernel backend currently in use."""
    return _active.BACKEND_NAME


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def use_backend(name: str) -> None:
    """Switch kernel backends at runtime ("numpy" or "cython")."""
    global _active
    try:
        _active = _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown backend {name!r}; available: {', '.join(sorted(_BACKENDS))}"
        ) from None


def cross_distance_matrix(a, b):
    return _active.cross_distance_matrix(a, b)


def operator_table(a, b, k):
    return _active.operator_table(a, b, k)


def operator_table_block(a, refs, offsets, k):
    return _active.operator_table_block(a, refs, offsets, k)
