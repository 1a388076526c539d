"""Backend selection for the simulation kernels.

Two interchangeable implementations of the trial loop exist: a numba
``@njit`` kernel (default when numba imports) and a vectorized pure
numpy fallback.  Both produce bit-identical per-block statistics, which
the test suite asserts, so switching backends is purely a performance
decision.

Selection order: an explicit ``backend=`` argument wins, then the
``STOPSUM_BACKEND`` environment variable, then numba when available.
"""

from __future__ import annotations

import os

__all__ = ["HAS_NUMBA", "BACKENDS", "BackendError", "active_backend", "mc_kernel"]

ENV_VAR = "STOPSUM_BACKEND"
BACKENDS = ("numba", "numpy")

try:  # pragma: no cover - exercised implicitly on import
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    HAS_NUMBA = False


class BackendError(RuntimeError):
    """Requested backend cannot run in this environment."""


def active_backend(override: str | None = None) -> str:
    """Resolve which kernel implementation to use.

    Parameters
    ----------
    override : str, optional
        Explicit choice, ``"numba"`` or ``"numpy"``.  ``None`` defers to
        the ``STOPSUM_BACKEND`` environment variable, and in its absence
        to numba when importable.
    """
    choice = override if override is not None else os.environ.get(ENV_VAR)
    if choice is None:
        return "numba" if HAS_NUMBA else "numpy"
    choice = choice.strip().lower()
    if choice not in BACKENDS:
        raise BackendError(
            f"unknown backend {choice!r}: expected one of {', '.join(BACKENDS)}"
        )
    if choice == "numba" and not HAS_NUMBA:
        raise BackendError("backend 'numba' requested but numba is not importable")
    return choice


def mc_kernel(backend: str | None = None):
    """Return the trial-loop kernel for the resolved backend.

    The kernel signature is shared:
    ``kernel(seed, t, weights, block_sizes, workers) ->
    (counts, means, m2s, mins, maxs, overflowed)``.
    """
    name = active_backend(backend)
    if name == "numba":
        from ._kernels_numba import mc_blocks
    else:
        from ._kernels_numpy import mc_blocks
    return mc_blocks
