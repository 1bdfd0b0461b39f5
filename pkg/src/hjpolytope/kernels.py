"""Backend selection for the hot kernels.

The compiled extension ``_ckernels`` is used when it was built; otherwise
the pure-Python ``_pykernels`` take over.  Setting ``HJPOLYTOPE_PURE_PYTHON=1``
forces the fallback.  Both backends return identical results.
"""
import os

from . import _pykernels

if os.environ.get("HJPOLYTOPE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

bareiss_det = _impl.bareiss_det
bareiss_rank = _impl.bareiss_rank
nullspace_vector = _impl.nullspace_vector
enumerate_facets = _impl.enumerate_facets
hitting_set = _impl.hitting_set
greedy_hitting_set = _pykernels.greedy_hitting_set


def backends():
    """Map of available backend name -> kernel module."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
