"""Kernel selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python ``_fallback``. Setting ``MARKETNET_PURE_PYTHON=1`` forces the
fallback.
"""

import logging
import os

import numpy as np

from . import _fallback

log = logging.getLogger(__name__)


def load(name=None):
    """Return the kernel module called ``name`` ("compiled" or "python")."""
    if name == "python":
        return _fallback
    try:
        from . import _kernels
    except ImportError:
        if name == "compiled":
            raise
        log.info("compiled kernels unavailable, using the pure-Python fallback")
        return _fallback
    return _kernels


def available():
    names = ["python"]
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        return names
    return ["compiled"] + names


kernels = load("python" if os.environ.get("MARKETNET_PURE_PYTHON", "0") not in ("", "0") else None)
BACKEND = kernels.BACKEND


def xlog2x_table(n):
    """``t[c] = c*log2(c)`` for ``c = 0..n`` (``t[0] = 0``)."""
    c = np.arange(n + 1, dtype=np.float64)
    out = np.zeros(n + 1)
    out[1:] = c[1:] * np.log2(c[1:])
    return out
