"""Kernel selection: compiled extension when importable, pure Python otherwise.

Set ``DESIGNCODED_PURE=1`` to force the pure-Python kernels.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("DESIGNCODED_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py

fnv1a64 = _impl.fnv1a64
xor_bytes = _impl.xor_bytes
rref = _impl.rref
FNV_OFFSET = _kernels_py.FNV_OFFSET
