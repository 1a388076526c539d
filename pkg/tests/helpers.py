"""Shared test helpers.

The reference simulator here re-derives the Monte Carlo stream with
plain Python big-int hashing and float arithmetic, no numpy and no
package RNG code.  Matching it bit-for-bit is the strongest available
evidence that both production kernels implement the documented stream
and the documented moment updates, rather than merely agreeing with
each other.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_PHI = 0x9E3779B97F4A7C15


def mix64_ref(z: int) -> int:
    """splitmix64 finalizer on Python ints (reference implementation)."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def reference_block(seed: int, block: int, size: int, t: float, weights) -> dict:
    """Simulate one block exactly as the kernels do, in pure Python.

    Returns the block moments plus the raw crossing indexes (which the
    kernels do not expose), for distribution-level checks.
    """
    weights = [float(w) for w in weights]
    key = mix64_ref(seed + _PHI * (block + 1))
    j = 0
    count = 0
    mean = 0.0
    m2 = 0.0
    lo = None
    hi = 0
    ns = []
    for _ in range(size):
        s = 0.0
        n = 0
        while s <= t:
            if n >= len(weights):
                raise AssertionError("reference trial ran past the weight table")
            j += 1
            u = (mix64_ref(key + _PHI * j) >> 11) * 2.0**-53
            s = s + weights[n] * u
            n += 1
        x = float(n)
        count += 1
        delta = x - mean
        mean += delta / count
        delta2 = x - mean
        m2 += delta * delta2
        lo = n if lo is None else min(lo, n)
        hi = max(hi, n)
        ns.append(n)
    return {"count": count, "mean": mean, "m2": m2, "min": lo, "max": hi, "ns": ns}
