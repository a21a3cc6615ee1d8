"""Select the subset-search backend at import time.

The compiled ``_ckernel`` is used when it was built; otherwise, or when the
environment variable ``SEGREKIT_PURE`` is set to a non-empty value, the
pure-Python ``_pykernel`` is used.
"""

import os

from . import _pykernel

if os.environ.get("SEGREKIT_PURE"):
    search = _pykernel.search
    BACKEND = "python"
else:
    try:
        from ._ckernel import search
        BACKEND = "cython"
    except ImportError:  # extension not built
        search = _pykernel.search
        BACKEND = "python"

__all__ = ["search", "BACKEND"]
