"""Backend selection for the batch kernels.

The compiled extension is used when it imports; set ``KWRADIAL_PURE_PYTHON=1``
to force the numpy fallback (the test-suite runs both).
"""
from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("KWRADIAL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

qmul = _impl.qmul
im_basis = _impl.im_basis
wedge11 = _impl.wedge11
trace_density = _impl.trace_density
bracket_sum = _impl.bracket_sum


def get_backend(name: str):
    """Return the kernel module for ``"python"`` or ``"cython"``."""
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")
