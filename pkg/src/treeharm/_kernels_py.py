"""Pure numpy implementations of the hot kernels.

Vertices are addressed by (depth, index within sphere). The ancestor of a
depth-``a`` vertex ``k`` at depth ``t`` is ``k // ratios[t]`` with
``ratios[t] = |S_a| / |S_t|``.
"""
import numpy as np

_CHUNK = 1 << 20


def prefix_lengths(level_size, ratios, x_anc, limit):
    """Common-prefix length with ``x`` for every vertex of one sphere."""
    ratios = np.asarray(ratios, dtype=np.int64)
    x_anc = np.asarray(x_anc, dtype=np.int64)
    out = np.empty(level_size, dtype=np.int64)
    for start in range(0, level_size, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, level_size), dtype=np.int64)
        j = np.zeros(k.size, dtype=np.int64)
        alive = np.ones(k.size, dtype=bool)
        for t in range(1, limit + 1):
            alive &= (k // ratios[t]) == x_anc[t]
            j += alive
        out[start:start + k.size] = j
    return out


def prefix_counts(level_size, ratios, x_anc, limit):
    """Histogram of :func:`prefix_lengths`, length ``limit + 1``."""
    counts = np.zeros(limit + 1, dtype=np.int64)
    for start in range(0, level_size, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, level_size), dtype=np.int64)
        j = np.zeros(k.size, dtype=np.int64)
        alive = np.ones(k.size, dtype=bool)
        for t in range(1, limit + 1):
            alive &= (k // ratios[t]) == x_anc[t]
            j += alive
        counts += np.bincount(j, minlength=limit + 1)
    return counts


def pairwise_prefix(anc):
    """Pairwise common-prefix lengths.

    ``anc`` is an (M, R+1) int64 matrix of ancestor indices with -1 past each
    vertex's depth.
    """
    anc = np.asarray(anc, dtype=np.int64)
    m, width = anc.shape
    j = np.zeros((m, m), dtype=np.int64)
    alive = np.ones((m, m), dtype=bool)
    for t in range(1, width):
        col = anc[:, t]
        alive &= (col[:, None] == col[None, :]) & (col[:, None] >= 0)
        j += alive
    return j
