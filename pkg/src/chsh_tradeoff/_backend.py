"""Backend selection: compiled kernels when available, pure Python otherwise.

Set CHSH_PURE=1 to force the pure backend (useful for timing comparisons and
for debugging; results are bit-identical either way).
"""
from __future__ import annotations

import os

if os.environ.get("CHSH_PURE", "0") not in ("", "0"):
    from . import _kernels as impl
else:
    try:
        from . import _fastcore as impl  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels as impl  # type: ignore[no-redef]


def backend_name() -> str:
    """Name of the active compute backend ("cython" or "pure")."""
    return impl.BACKEND
