"""Monte Carlo simulation of the crossing count.

A run is split into fixed-size blocks.  Block ``b`` regenerates its
draws from the counter key ``(seed, b)``, so results depend only on
``(seed, trials, block, t, weights)``: not on the backend, not on how
many threads execute, not on scheduling order.  The kernels return raw
per-block moments; this module owns everything around them, in plain
Python shared by both backends, so the final statistics and the
convergence trace are bit-identical too:

* sizing the weight table (with a certified overshoot so that a trial
  running past it is astronomically unlikely, and a grow-and-retry loop
  in case it happens anyway),
* folding block moments together with the exact pairwise-merge update,
* assembling :class:`TrialStats` and the per-block
  :class:`ConvergenceTrace`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .backend import mc_kernel
from .sequence import WeightSequence

__all__ = [
    "TrialStats",
    "TraceRow",
    "ConvergenceTrace",
    "DivergingTrialError",
    "run_experiment",
]

DEFAULT_BLOCK = 500
DEFAULT_STEP_CAP = 10**9
# longest weight table worth materializing; a trial that genuinely needs
# more terms than this is diverging for any practical purpose
TABLE_HARD_CAP = 10**7
# ln(2**-80): per-trial overshoot probability target for the table size
_LOG_TARGET = -80.0 * math.log(2.0)


class DivergingTrialError(RuntimeError):
    """A trial would need more draws than the per-trial step cap."""


@dataclass(frozen=True)
class TrialStats:
    """Aggregate statistics of the crossing counts of one run."""

    trials: int
    mean: float
    variance: float
    stderr: float
    min_n: int
    max_n: int


@dataclass(frozen=True)
class TraceRow:
    """Running statistics after one more block of trials."""

    trials: int
    running_mean: float
    running_stderr: float


@dataclass(frozen=True)
class ConvergenceTrace:
    """Block-by-block view of how the estimate settled."""

    rows: tuple[TraceRow, ...]

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)


def _block_sizes(trials: int, block: int) -> np.ndarray:
    full, rest = divmod(trials, block)
    sizes = [block] * full
    if rest:
        sizes.append(rest)
    return np.asarray(sizes, dtype=np.int64)


def _table_length(seq: WeightSequence, t: float, cap: int) -> int:
    """Weight-table length making an overshooting trial negligible.

    A trial still running after ``m`` draws has probability at most
    ``t**m / (m! a_1 ... a_m)`` (the simplex bound).  Walk that bound in
    log space until it certifiably drops below 2**-80 and keeps
    shrinking.  Failing to get there within ``cap`` terms means trials
    cannot be bounded by the step cap.
    """
    if t <= 0.0:
        return 8
    logb = 0.0
    m = 0
    while m < cap:
        m += 1
        logb += math.log(t) - math.log(m) - math.log(seq.term_extended(m))
        if logb < _LOG_TARGET and t < (m + 1) * seq.term_extended(m + 1):
            return max(m, 8)
    raise DivergingTrialError(
        f"simulating {seq} at t={t} cannot be capped at {cap} draws per "
        f"trial; the crossing time is diverging or the step cap is too low"
    )


def run_experiment(
    seq: WeightSequence,
    t: float,
    trials: int,
    seed: int = 42,
    block: int = DEFAULT_BLOCK,
    step_cap: int = DEFAULT_STEP_CAP,
    workers: int | None = None,
    backend: str | None = None,
) -> tuple[TrialStats, ConvergenceTrace]:
    """Simulate ``trials`` crossings of threshold ``t``.

    Parameters
    ----------
    seq, t
        Weight sequence and threshold (``t >= 0``; at ``t = 0`` every
        trial stops after one draw, a useful smoke case).
    trials, seed, block
        Run shape.  Results are a pure function of these plus ``t`` and
        the weights; ``block`` changes the trace granularity and the
        block keys, so it is part of the reproducibility contract.
    step_cap
        Per-trial draw budget.  A sequence/threshold pair whose table
        certification or an actual trial would exceed it raises
        :class:`DivergingTrialError`.
    workers, backend
        Execution resources only: any combination returns bit-identical
        results.  ``workers`` clamps the numba thread count (ignored by
        the numpy backend); ``backend`` overrides the default choice,
        see :mod:`stopsum.backend`.
    """
    if not math.isfinite(t) or t < 0.0:
        raise ValueError(f"threshold must be finite and >= 0, got {t}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if block < 1:
        raise ValueError(f"block size must be >= 1, got {block}")
    if step_cap < 1:
        raise ValueError(f"step cap must be >= 1, got {step_cap}")
    if workers is not None and workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")

    kernel = mc_kernel(backend)
    sizes = _block_sizes(trials, block)
    cap = min(step_cap, TABLE_HARD_CAP)
    length = min(_table_length(seq, t, cap), cap)
    while True:
        table = seq.weight_table(length)
        counts, means, m2s, mins, maxs, overflowed = kernel(
            seed, t, table, sizes, workers
        )
        if not overflowed:
            break
        if length >= cap:
            raise DivergingTrialError(
                f"a trial exceeded the per-trial step cap of {cap} draws "
                f"at t={t} for {seq}"
            )
        length = min(length * 4, cap)

    # canonical merge: fold blocks left to right with the exact
    # pairwise-merge update, identically on every backend
    rows = []
    count = 0
    mean = 0.0
    m2 = 0.0
    min_n = None
    max_n = 0
    for b in range(len(sizes)):
        cb = int(counts[b])
        if cb == 0:
            continue
        total = count + cb
        delta = float(means[b]) - mean
        mean = mean + delta * (cb / total)
        m2 = m2 + float(m2s[b]) + delta * delta * (count * cb / total)
        count = total
        bmin = int(mins[b])
        min_n = bmin if min_n is None else min(min_n, bmin)
        max_n = max(max_n, int(maxs[b]))
        variance = m2 / (count - 1) if count > 1 else 0.0
        rows.append(TraceRow(count, mean, math.sqrt(variance / count)))

    variance = m2 / (count - 1) if count > 1 else 0.0
    stats = TrialStats(
        trials=count,
        mean=mean,
        variance=variance,
        stderr=math.sqrt(variance / count),
        min_n=min_n,
        max_n=max_n,
    )
    return stats, ConvergenceTrace(tuple(rows))
