"""Hot kernels with a compiled backend and a pure-Python fallback.

The compiled extension is used when it imports; set ``MWSN_PURE_PYTHON=1``
to force the fallback.  ``BACKEND`` names the active one.
"""
import os

from . import _fallback

if os.environ.get("MWSN_PURE_PYTHON", "") == "1":
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
dcd_hinge = (_compiled or _fallback).dcd_hinge

__all__ = ["BACKEND", "dcd_hinge", "compiled_available"]


def compiled_available():
    return _compiled is not None


def get_backend(name):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name == "python":
        return _fallback
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")
