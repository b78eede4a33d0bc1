"""Backend selection for the RK4 trajectory kernel.

The compiled extension (``growthmfg._kernel``) is used when it imports;
otherwise the pure-Python fallback takes over.  Set the environment variable
``GROWTHMFG_PURE_PYTHON=1`` before import to force the fallback (useful for
benchmarking the two backends against each other).
"""

from __future__ import annotations

import os

from . import _kernel_py
from ._kernel_py import BLOWUP_LIMIT, STATUS_DIVERGED, STATUS_DOMAIN, STATUS_OK

try:
    from . import _kernel as _compiled
except ImportError:
    _compiled = None

_FORCE_PYTHON = os.environ.get("GROWTHMFG_PURE_PYTHON", "").lower() in ("1", "true", "yes")

if _compiled is not None and not _FORCE_PYTHON:
    BACKEND = "compiled"
    integrate_states = _compiled.integrate_states
else:
    BACKEND = "python"
    integrate_states = _kernel_py.integrate_states


def available_backends() -> dict:
    """Name -> ``integrate_states`` callable for every importable backend."""
    backends = {"python": _kernel_py.integrate_states}
    if _compiled is not None:
        backends["compiled"] = _compiled.integrate_states
    return backends
