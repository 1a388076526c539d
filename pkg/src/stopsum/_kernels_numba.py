"""Numba trial-loop kernel.

One prange block per simulation block: regenerate that block's draws
from its counter key, run trials to the crossing, and fold each
crossing index into block-local running moments.  The arithmetic here
(draw order, update order, scaling) must stay in lockstep with
``_kernels_numpy.py``; the backend equivalence tests enforce exact
equality of every output array.
"""

from __future__ import annotations

import warnings

import numpy as np
from numba import config, get_num_threads, njit, prange, set_num_threads
from numba.core.errors import NumbaWarning

# environment noise from the threading-layer probe (e.g. an old TBB);
# harmless, numba falls back to another layer
warnings.filterwarnings("ignore", message=".*TBB.*", category=NumbaWarning)

__all__ = ["mc_blocks"]

_PHI = np.uint64(0x9E3779B97F4A7C15)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)
_INV53 = 1.0 / 9007199254740992.0
_NO_MIN = np.int64(2**62)


@njit(cache=True)
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX_A
    z = (z ^ (z >> np.uint64(27))) * _MIX_B
    return z ^ (z >> np.uint64(31))


@njit(cache=True, parallel=True)
def _blocks(seed, t, w, sizes):
    nb = sizes.shape[0]
    K = w.shape[0]
    counts = np.zeros(nb, np.int64)
    means = np.zeros(nb, np.float64)
    m2s = np.zeros(nb, np.float64)
    mins = np.full(nb, _NO_MIN)
    maxs = np.zeros(nb, np.int64)
    ofl = np.zeros(nb, np.int64)
    for b in prange(nb):
        key = _mix64(np.uint64(seed) + _PHI * (np.uint64(b) + np.uint64(1)))
        j = np.uint64(0)
        count = np.int64(0)
        mean = 0.0
        m2 = 0.0
        mn = _NO_MIN
        mx = np.int64(0)
        bad = False
        for _ in range(sizes[b]):
            s = 0.0
            n = 0
            while s <= t:
                if n >= K:
                    bad = True
                    break
                j += np.uint64(1)
                u = np.float64(_mix64(key + _PHI * j) >> np.uint64(11)) * _INV53
                s = s + w[n] * u
                n += 1
            if bad:
                break
            x = np.float64(n)
            count += 1
            delta = x - mean
            mean += delta / count
            delta2 = x - mean
            m2 += delta * delta2
            if n < mn:
                mn = n
            if n > mx:
                mx = n
        counts[b] = count
        means[b] = mean
        m2s[b] = m2
        mins[b] = mn
        maxs[b] = mx
        ofl[b] = 1 if bad else 0
    return counts, means, m2s, mins, maxs, ofl


def mc_blocks(seed, t, weights, block_sizes, workers=None):
    """Run all blocks, optionally clamping the thread count to ``workers``.

    Returns per-block ``(counts, means, m2s, mins, maxs, overflowed)``;
    ``overflowed`` True means some trial ran past the weight table and
    the whole run must be retried with a longer table.
    """
    prev = get_num_threads()
    if workers is not None:
        set_num_threads(max(1, min(int(workers), config.NUMBA_NUM_THREADS)))
    try:
        counts, means, m2s, mins, maxs, ofl = _blocks(
            np.uint64(seed), float(t), weights, block_sizes
        )
    finally:
        if workers is not None:
            set_num_threads(prev)
    return counts, means, m2s, mins, maxs, bool(ofl.any())
