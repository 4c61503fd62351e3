"""Kernel backend selection.

Imports the compiled extension when available, otherwise the pure-Python
fallback. ``HETSIM_PURE=1`` forces the fallback (useful for benchmarking and
for verifying that both backends agree).
"""

import os

if os.environ.get("HETSIM_PURE") == "1":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
rss_profile = _impl.rss_profile
