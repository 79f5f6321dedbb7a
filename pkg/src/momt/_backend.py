"""Import-time selection of the eigensolver backend.

The compiled extension is preferred when importable; setting the
environment variable ``MOMT_PURE`` to anything but ``0`` forces the
pure reference implementation.  Both backends expose ``jacobi_eigh``
with identical semantics (see ``_jacobi_py`` for the readable source).
"""

import os

from . import _jacobi_py

if os.environ.get("MOMT_PURE", "").strip() not in ("", "0"):
    _impl = _jacobi_py
    BACKEND = "python"
else:
    try:
        from . import _jacobi as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _jacobi_py
        BACKEND = "python"

jacobi_eigh = _impl.jacobi_eigh
DEFAULT_EIG_TOL = _jacobi_py.DEFAULT_EIG_TOL
MAX_SWEEPS = _jacobi_py.MAX_SWEEPS
