"""Kernel backend selection.

Prefers the compiled Cython kernels when the extension built; otherwise
falls back to the pure-Python implementations. Set GREENLOOP_PURE_PY=1 to
force the fallback (used by the parity tests and the benchmark).
"""

import os

if os.environ.get("GREENLOOP_PURE_PY"):
    from . import _kernels_py as kernels

    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]

        BACKEND = "python"


def backend_name() -> str:
    """Name of the kernel backend active in this process."""
    return BACKEND
