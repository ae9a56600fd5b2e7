"""Kernel backend selection.

The hot kernels (field matmul, echelon reduction, scalar inverse) exist twice:
as numba @njit functions and as a pure-numpy fallback with identical contracts.
``MANIAC_BACKEND`` picks one: "numba", "numpy", or "auto" (default: numba when
importable).  ``use()`` swaps at runtime, which the benchmark relies on.
"""

from __future__ import annotations

import os

from . import _kernels_numpy

K = _kernels_numpy
_active = "numpy"


def use(name: str) -> str:
    """Select the kernel backend ("numba", "numpy" or "auto"); returns the choice."""
    global K, _active
    if name == "auto":
        try:
            from . import _kernels_numba  # noqa: F401
            name = "numba"
        except ImportError:
            name = "numpy"
    if name == "numba":
        from . import _kernels_numba
        K = _kernels_numba
    elif name == "numpy":
        K = _kernels_numpy
    else:
        raise ValueError(f"unknown backend {name!r}")
    _active = name
    return name


def active() -> str:
    return _active


use(os.environ.get("MANIAC_BACKEND", "auto"))
