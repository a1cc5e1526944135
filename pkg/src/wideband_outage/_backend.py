"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; the
environment variable WIDEBAND_OUTAGE_BACKEND forces "compiled" or
"pure" explicitly.
"""

import os

from . import _pykernels

_FORCED = os.environ.get("WIDEBAND_OUTAGE_BACKEND", "").strip().lower()

if _FORCED in ("", "compiled"):
    try:
        from . import _kernels as kernels

        BACKEND = "compiled"
    except ImportError:
        if _FORCED == "compiled":
            raise
        kernels = _pykernels
        BACKEND = "pure"
elif _FORCED in ("pure", "python", "numpy"):
    kernels = _pykernels
    BACKEND = "pure"
else:
    raise ValueError(
        f"WIDEBAND_OUTAGE_BACKEND={_FORCED!r} not recognized; use 'compiled' or 'pure'"
    )
