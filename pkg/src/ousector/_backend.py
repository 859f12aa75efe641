"""Select the pairwise-kernel implementation at import.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
numpy fallback.  Setting ``OUSECTOR_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _pycore

pure = _pycore

try:
    from . import _ckernels as compiled
except ImportError:
    compiled = None

if compiled is None or os.environ.get("OUSECTOR_PURE_PYTHON", "") not in ("", "0"):
    core = _pycore
else:
    core = compiled

BACKEND = "cython" if core is compiled else "python"


def available():
    """Mapping of backend name to module, for tests and benchmarks."""
    out = {"python": _pycore}
    if compiled is not None:
        out["cython"] = compiled
    return out
