"""Pure numpy trial-loop kernel (fallback backend).

Same contract and same arithmetic as ``_kernels_numba.py``, vectorized
across blocks instead of looping: every block advances one draw per
pass, with masked updates for blocks that are between trials or already
done.  Each float operation happens in the same order per trial as in
the numba kernel, so the outputs are bit-identical; the tests assert
that.  The ``workers`` argument is accepted and ignored (a single
vectorized pass has no thread pool to size).
"""

from __future__ import annotations

import numpy as np

from .rng import PHI, block_key, mix64, uniform53

__all__ = ["mc_blocks"]

_NO_MIN = np.int64(2**62)


def mc_blocks(seed, t, weights, block_sizes, workers=None):
    """Run all blocks; see the numba twin for the output contract."""
    nb = block_sizes.shape[0]
    K = weights.shape[0]
    t = float(t)
    key = block_key(seed, np.arange(nb, dtype=np.uint64))
    j = np.zeros(nb, np.uint64)
    s = np.zeros(nb, np.float64)
    n = np.zeros(nb, np.int64)
    done = np.zeros(nb, np.int64)
    counts = np.zeros(nb, np.int64)
    means = np.zeros(nb, np.float64)
    m2s = np.zeros(nb, np.float64)
    mins = np.full(nb, _NO_MIN)
    maxs = np.zeros(nb, np.int64)

    active = done < block_sizes
    while active.any():
        with np.errstate(over="ignore"):
            j = np.where(active, j + np.uint64(1), j)
            u = uniform53(mix64(key + PHI * j))
        s = np.where(active, s + weights[np.minimum(n, K - 1)] * u, s)
        n = np.where(active, n + 1, n)
        crossed = active & (s > t)
        stuck = active & ~crossed & (n >= K)
        if stuck.any():
            # some trial outran the weight table: caller retries longer
            return counts, means, m2s, mins, maxs, True

        # Welford update, same operation order as the scalar kernel
        x = n.astype(np.float64)
        count1 = counts + 1
        delta = x - means
        mean1 = means + delta / count1
        delta2 = x - mean1
        m21 = m2s + delta * delta2
        counts = np.where(crossed, count1, counts)
        means = np.where(crossed, mean1, means)
        m2s = np.where(crossed, m21, m2s)
        mins = np.where(crossed & (n < mins), n, mins)
        maxs = np.where(crossed & (n > maxs), n, maxs)

        done = done + crossed
        s = np.where(crossed, 0.0, s)
        n = np.where(crossed, 0, n)
        active = done < block_sizes
    return counts, means, m2s, mins, maxs, False
