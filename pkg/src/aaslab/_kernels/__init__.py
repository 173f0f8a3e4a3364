"""Hot-kernel dispatch: compiled extension when available, else pure Python.

Set ``AASLAB_PURE_PYTHON=1`` to force the fallback (useful for benchmarking
and for verifying that both paths agree).
"""

from __future__ import annotations

import os

from . import _pykernels

_impl = _pykernels
if not os.environ.get("AASLAB_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pykernels

BACKEND: str = _impl.BACKEND

commutator_counts = _impl.commutator_counts
convolve = _impl.convolve
convolve_positions = _impl.convolve_positions


def backends() -> dict[str, object]:
    """All importable kernel backends, keyed by name."""
    out: dict[str, object] = {"python": _pykernels}
    try:
        from . import _ckernels

        out["c"] = _ckernels
    except ImportError:
        pass
    return out
