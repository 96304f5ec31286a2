"""Kernel selection.

The compiled GMP kernels are used when the extension imports; otherwise the
pure-Python kernels take over. ``UMBRA_PURE_PYTHON=1`` forces the fallback.
"""

import os

from umbra import _kernels_py

if os.environ.get("UMBRA_PURE_PYTHON") == "1":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from umbra import _kernels as _impl
        BACKEND = "gmp"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

conv = _impl.conv
conv2 = _impl.conv2
matmul = _impl.matmul
