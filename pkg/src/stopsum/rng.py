"""Counter-based uniform random draws.

The simulator needs reproducible streams that do not depend on how work
is scheduled, so instead of a stateful generator every draw is a pure
function of ``(seed, block, index)``:

* block ``b`` owns the 64-bit key ``mix64(seed + PHI * (b + 1))``,
* draw ``j`` of that block is ``mix64(key + PHI * (j + 1))``,
* a 64-bit word maps to [0, 1) by taking its top 53 bits.

``mix64`` is the splitmix64 finalizer (Stafford's mix 13), whose output
passes BigCrush when driven by a Weyl sequence, which is exactly how it
is driven here.  Blocks are therefore independent substreams that can be
generated in any order, on any worker, with bit-identical results.

The numba kernels inline the same constants; ``mix64`` here is the
vectorized numpy form and doubles as the reference implementation the
tests check both backends against.
"""

from __future__ import annotations

import numpy as np

__all__ = ["PHI", "mix64", "block_key", "uniform53", "block_uniforms"]

# 2**64 / golden ratio, the Weyl increment of splitmix64
PHI = np.uint64(0x9E3779B97F4A7C15)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


def mix64(z: np.ndarray | np.uint64) -> np.ndarray | np.uint64:
    """splitmix64 finalizer on uint64 scalars or arrays (wrapping)."""
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _MIX_A
        z = (z ^ (z >> np.uint64(27))) * _MIX_B
        return z ^ (z >> np.uint64(31))


def block_key(seed: int, block: int | np.ndarray) -> np.uint64 | np.ndarray:
    """Key of one simulation block (or an array of blocks)."""
    b = np.asarray(block, dtype=np.uint64)
    with np.errstate(over="ignore"):
        key = mix64(np.uint64(seed) + PHI * (b + np.uint64(1)))
    return key if key.ndim else key[()]


def uniform53(word: np.ndarray | np.uint64) -> np.ndarray | np.float64:
    """Map 64-bit words to floats in [0, 1) using their top 53 bits."""
    return (word >> np.uint64(11)).astype(np.float64) * _INV53


def block_uniforms(seed: int, block: int, count: int) -> np.ndarray:
    """First ``count`` uniforms of one block, for tests and diagnostics."""
    key = block_key(seed, block)
    j = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        words = mix64(key + PHI * j)
    return uniform53(words)
