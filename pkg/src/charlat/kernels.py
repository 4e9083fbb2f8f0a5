"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ``CHARLAT_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("CHARLAT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

xgcd = _pykernels.xgcd
hnf_mod = _impl.hnf_mod
local_valuations = _impl.local_valuations
det_mod_p = _impl.det_mod_p
rank_profile_mod_p = _impl.rank_profile_mod_p
matmul_mod = _impl.matmul_mod

__all__ = [
    "BACKEND",
    "xgcd",
    "hnf_mod",
    "local_valuations",
    "det_mod_p",
    "rank_profile_mod_p",
    "matmul_mod",
]
