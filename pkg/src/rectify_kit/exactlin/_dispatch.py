"""Select the modular elimination backend at import time.

The compiled Cython kernel is preferred; the numpy fallback is used when the
extension was not built.  ``RECTIFY_KIT_FP_BACKEND=python`` forces the
fallback (useful for benchmarking and debugging).
"""

from __future__ import annotations

import os

from . import _fp_py

_forced = os.environ.get("RECTIFY_KIT_FP_BACKEND", "")

if _forced == "python":
    impl = _fp_py
else:
    try:
        from . import _fpkernel as impl  # type: ignore[no-redef]
    except ImportError:
        impl = _fp_py

BACKEND = impl.BACKEND
rref = impl.rref
rank = impl.rank
kernel = impl.kernel
solve = impl.solve
matmul = impl.matmul
