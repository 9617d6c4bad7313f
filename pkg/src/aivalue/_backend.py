"""Kernel backend selection.

Imports the compiled extension when present, else the pure-Python
fallback.  Both expose the same functions with bit-identical numerics;
the compiled one is simply faster.  Set AIVALUE_PURE_PYTHON=1 to force
the fallback (used by the benchmark and the backend-parity tests).
"""

from __future__ import annotations

import os

if os.environ.get("AIVALUE_PURE_PYTHON") == "1":
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]


def backend_name() -> str:
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return kernels.BACKEND
