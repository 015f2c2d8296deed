"""Hot-kernel dispatch: compiled Cython core when built, numpy otherwise.

Set ``TREEHARM_PURE=1`` to force the numpy fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
if os.environ.get("TREEHARM_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py
else:
    _impl = _kernels_py

prefix_lengths = _impl.prefix_lengths
prefix_counts = _impl.prefix_counts
pairwise_prefix = _impl.pairwise_prefix

__all__ = ["BACKEND", "prefix_lengths", "prefix_counts", "pairwise_prefix"]
