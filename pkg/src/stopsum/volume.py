"""Exact region volumes and the resulting slow-but-sure expectation.

``region_volume`` computes the probability

    p_m(t) = Vol{ x in [0,1]^m : a_1 x_1 + ... + a_m x_m <= t },

the volume of a box-clipped simplex, by inclusion-exclusion over the
box's upper faces: shifting ``t`` by every subset of the weights and
alternating signs turns the clipped volume into a signed sum of
unclipped simplex volumes ``(t - sum(S))_+**m / (m! prod a_j)``.  The
formula is exact (up to rounding, which the cancellation figure
monitors), so summing ``p_m`` over ``m`` gives an analytic-free route to
the expected crossing count

    E[N](t) = sum_{m >= 0} p_m(t),

used throughout the tests as the oracle every other evaluator must
match.  It is deliberately independent of :mod:`stopsum.series` and
:mod:`stopsum.analytic`: no shared formulas beyond the subset walk.

Dimension is capped (default 30) because the subset sum has ``2**m``
terms before pruning; within the cap, pruning keeps realistic workloads
to a tiny fraction of that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .sequence import WeightSequence
from .subsets import signed_shifts
from .summation import CompensatedSum

__all__ = [
    "MAX_DIMENSION",
    "VolumeResult",
    "MCVolume",
    "DimensionCapError",
    "region_volume",
    "oracle_expectation",
    "mc_volume",
]

MAX_DIMENSION = 30


class DimensionCapError(RuntimeError):
    """Exact evaluation would need more dimensions than the cap allows."""


@dataclass(frozen=True)
class VolumeResult:
    """An exact volume with its conditioning diagnostic.

    ``cancellation`` is the ratio of the sum of absolute subset terms to
    the absolute result, roughly the factor by which the alternating sum
    magnified relative rounding error; 1 means no cancellation.
    """

    value: float
    m: int
    cancellation: float


@dataclass(frozen=True)
class MCVolume:
    """A hit-or-miss volume estimate with its binomial standard error."""

    estimate: float
    stderr: float
    trials: int


def region_volume(seq: WeightSequence, m: int, t: float) -> VolumeResult:
    """Exact volume of ``{x in [0,1]^m : sum a_i x_i <= t}``.

    Shortcuts: ``t <= 0`` gives 0, ``t >= a_1 + ... + a_m`` gives 1
    (both exact, no enumeration).  Otherwise the signed subset sum runs
    with per-term ratio accumulation (each term is a product of
    ``shift / (j * a_j)`` factors, so no raw factorial ever appears) and
    compensated summation.

    Raises
    ------
    DimensionCapError
        If ``m`` exceeds :data:`MAX_DIMENSION`.
    """
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < 0:
        raise ValueError(f"dimension must be a nonnegative integer, got {m!r}")
    if m > MAX_DIMENSION:
        raise DimensionCapError(
            f"exact volume in dimension {m} exceeds the cap of {MAX_DIMENSION} "
            f"(2**m subset terms); use the simulator instead"
        )
    if not math.isfinite(t):
        raise ValueError(f"threshold must be finite, got {t}")
    if m == 0:
        return VolumeResult(1.0 if t >= 0.0 else 0.0, 0, 1.0)
    if t <= 0.0:
        return VolumeResult(0.0, m, 1.0)
    weights = [seq.term_extended(j) for j in range(1, m + 1)]
    if t >= seq.prefix_sum(m):
        return VolumeResult(1.0, m, 1.0)

    terms, _, _ = signed_shifts(weights, t)
    acc = CompensatedSum()
    abs_acc = 0.0
    for sub in terms:
        piece = 1.0
        for j in range(1, m + 1):
            piece *= sub.shift / (j * weights[j - 1])
        acc.add(sub.sign * piece)
        abs_acc += piece
    value = acc.value
    cancellation = abs_acc / abs(value) if value != 0.0 else math.inf
    # the true volume lies in (0, 1); clamp rounding overshoot only
    value = min(max(value, 0.0), 1.0)
    return VolumeResult(value, m, cancellation)


def oracle_expectation(
    seq: WeightSequence,
    t: float,
    eps: float = 1e-12,
    max_dim: int = MAX_DIMENSION,
) -> float:
    """Expected crossing count by direct volume summation.

    Sums ``1 + p_1(t) + p_2(t) + ...`` until the remaining tail is
    provably below ``eps``.  The certificate uses the plain simplex
    bound ``p_m <= t**m / (m! prod_{j<=m} a_j)``: once its stepwise
    ratio ``r`` drops under one half the geometric tail
    ``bound * r / (1 - r)`` applies.

    Raises
    ------
    DimensionCapError
        If certification needs a dimension above ``max_dim``.
    """
    if not math.isfinite(t) or t < 0.0:
        raise ValueError(f"threshold must be finite and >= 0, got {t}")
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    acc = CompensatedSum(1.0)  # p_0 = 1
    bound = 1.0
    m = 0
    while True:
        r = t / ((m + 1) * seq.term_extended(m + 1))
        if r < 0.5 and bound * r / (1.0 - r) < eps:
            return acc.value
        m += 1
        if m > max_dim:
            raise DimensionCapError(
                f"tail below {eps} needs dimension > {max_dim} at t={t}; "
                f"use the simulator instead"
            )
        acc.add(region_volume(seq, m, t).value)
        bound *= r


def mc_volume(
    seq: WeightSequence,
    m: int,
    t: float,
    trials: int = 100_000,
    seed: int = 42,
) -> MCVolume:
    """Hit-or-miss Monte Carlo check of :func:`region_volume`.

    Draws ``trials`` points of ``[0,1]^m`` from the package's
    counter-based stream (block 0 of the given seed) and counts how
    often the weighted sum stays at or below ``t``.  The standard error
    is the binomial one, so the exact volume should sit within a few
    standard errors of the estimate.  Pure numpy by design: this is a
    cross-check of the exact formula, not a performance path.
    """
    if m < 1:
        raise ValueError(f"dimension must be >= 1, got {m}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    weights = seq.weight_table(m)
    draws = rng.block_uniforms(seed, 0, trials * m).reshape(trials, m)
    hits = int(np.count_nonzero(draws @ weights <= t))
    p = hits / trials
    stderr = math.sqrt(p * (1.0 - p) / trials)
    return MCVolume(p, stderr, trials)
