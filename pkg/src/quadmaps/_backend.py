"""Kernel backend selection.

The hot loops live twice: in the compiled extension ``quadmaps._kernels``
(Cython) and in the pure-Python mirror ``quadmaps._kernels_py``.  The
compiled one is preferred when importable; set the environment variable
``QUADMAPS_PURE=1`` to force the fallback (used by tests and benchmarks).
"""

from __future__ import annotations

import os

if os.environ.get("QUADMAPS_PURE"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels


def backend_name() -> str:
    return "compiled" if kernels.IS_COMPILED else "pure"
