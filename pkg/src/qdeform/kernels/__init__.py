"""Hot-loop kernels with a compiled core and a numpy fallback.

The compiled extension is used when it was built and importable; setting
``QDEFORM_PURE_PYTHON=1`` forces the fallback.  ``BACKEND`` names the
implementation in use.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("QDEFORM_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

recurrence_table = _impl.recurrence_table
zero_diagonal_jacobi_eigvals = _impl.zero_diagonal_jacobi_eigvals

__all__ = ["BACKEND", "recurrence_table", "zero_diagonal_jacobi_eigvals"]
