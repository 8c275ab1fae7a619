"""Select the integration backend at import time.

The compiled extension is preferred; the pure-Python fallback takes over when
the extension is missing (source checkout without a build) or when
``QSEARCH_FORCE_FALLBACK`` is set to a non-empty value other than ``0``.
"""

from __future__ import annotations

import os

from . import _fallback

_force_fallback = os.environ.get("QSEARCH_FORCE_FALLBACK", "") not in ("", "0")

if _force_fallback:
    _impl = _fallback
    COMPILED = False
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        COMPILED = True
    except ImportError:
        _impl = _fallback
        COMPILED = False

BACKEND_NAME = "compiled" if COMPILED else "fallback"

full_star_rk4 = _impl.full_star_rk4
custom_star_rk4 = _impl.custom_star_rk4
reduced_trial_rk4 = _impl.reduced_trial_rk4
reduced_opt_rk4 = _impl.reduced_opt_rk4
