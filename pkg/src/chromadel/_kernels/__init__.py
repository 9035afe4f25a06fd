"""Backend selection for the GF(2) reduction kernel.

The compiled extension is preferred; the pure-python implementation is
a drop-in replacement selected at import time when the extension is
unavailable or CHROMADEL_PURE=1 is set.
"""
from __future__ import annotations

import os

BACKEND = "python"

if os.environ.get("CHROMADEL_PURE") == "1":
    from ._reduction_py import reduce_columns
else:
    try:
        from ._reduction import reduce_columns  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:  # pragma: no cover - build without extension
        from ._reduction_py import reduce_columns

__all__ = ["reduce_columns", "BACKEND"]
