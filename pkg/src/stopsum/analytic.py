"""Closed-form evaluation of the expected crossing count.

Write ``f(t)`` for the expected number of uniform draws needed to push
``a_1 x_1 + ... + a_n x_n`` past ``t``.  Three regimes:

* ``t <= a_1``: ``f(t)`` is a single entire series, evaluated by
  :func:`stopsum.series.tail_series` with ``n = 0``.
* ``a_n < t <= a_{n+1}``: split ``f(t) = sum_m p_m`` at dimension
  ``n``, where ``p_m`` is the chance the sum is still at or below ``t``
  after ``m`` draws.  Because ``t <= a_{n+1}``, every inclusion-
  exclusion subset touching a weight past ``a_n`` is dead, and the tail
  ``sum_{m >= n} p_m`` resums exactly into shifted tail series:

      f(t) = sum_{m < n} p_m(t)
           + sum_{S subset of {1..n}} (-1)**|S| g_n((t - sum(S))_+),

  where ``g_n`` is the tail series starting at power ``n`` with weight
  offset 1.  Subsets with nonpositive shift vanish, so the
  sorted-prefix pruning of :mod:`stopsum.subsets` applies verbatim.
  The head is NOT simply ``n``: ``p_m = 1`` only while
  ``t >= a_1 + ... + a_m``, and on the early part of an interval with
  ``n >= 3`` some head probabilities are strictly below one (e.g.
  weights ``0.89, 0.93, 0.96, 1.01, ...`` at ``t = 1.003`` sit in
  interval 3 with ``p_2 = 0.594``).  Head terms are exact volumes from
  :func:`stopsum.volume.region_volume`; only the resummed series tail
  carries truncation error.
* ``t`` above every weight: the finite formula has no valid ``n``;
  callers choose between a coverage error and the volume-oracle
  fallback.

For the power family ``a_k = k**s`` the ``t <= 1`` regime collapses to
the Laguerre-type exponential and the first interval has the two-term
closed form ``e_s(t) - e_s(t-1) + 1``; :func:`corollary_dattoli`
evaluates that shortcut so tests can pit it against the general path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .sequence import Bracket, SequenceError, WeightSequence
from .series import SeriesValue, Truncation, tail_series, laguerre_e
from .subsets import signed_shifts
from .summation import CompensatedSum
from .volume import oracle_expectation, region_volume

__all__ = [
    "THEOREM_N_CAP",
    "EvalReport",
    "UncoveredError",
    "IntervalComplexityError",
    "expected_crossings",
    "theorem_sum",
    "corollary_dattoli",
]

# 2**n subset terms before pruning; past this the exact volume route or
# the simulator is the honest tool
THEOREM_N_CAP = 30

BRANCH_SERIES = "series"
BRANCH_ORACLE = "oracle_fallback"


class UncoveredError(ValueError):
    """Threshold has no analytic branch for this sequence."""


class IntervalComplexityError(ValueError):
    """Bracketing index too large for the finite subset formula."""


@dataclass(frozen=True)
class EvalReport:
    """An expectation value plus how it was obtained.

    ``branch`` is ``"series"``, ``"theorem(n)"`` or ``"oracle_fallback"``;
    ``error_bound`` is the accumulated rigorous truncation bound (for
    the oracle fallback, the tail tolerance it certified against);
    the subset counters are zero outside the theorem branch.
    """

    value: float
    branch: str
    error_bound: float
    subsets_evaluated: int = 0
    subsets_pruned: int = 0


def expected_crossings(
    seq: WeightSequence,
    t: float,
    trunc: Truncation = Truncation(),
    fallback: bool = False,
    eps: float = 1e-12,
) -> EvalReport:
    """Expected draw count ``f(t)`` for ``t >= 0``, with branch dispatch.

    Brackets ``t`` against the weights and evaluates the matching
    regime.  ``fallback=True`` reroutes the cases the closed forms
    cannot reach (threshold above every weight, or a bracketing index
    past :data:`THEOREM_N_CAP`) to the exact volume oracle with tail
    tolerance ``eps`` instead of raising.

    Raises
    ------
    UncoveredError
        Uncovered threshold without ``fallback``.
    IntervalComplexityError
        Bracketing index past the cap without ``fallback``.
    """
    if not math.isfinite(t) or t < 0.0:
        raise ValueError(f"threshold must be finite and >= 0, got {t}")
    bracket = seq.bracket(t)
    if bracket.is_below:
        sv = tail_series(seq, 0, 1, t, trunc)
        return EvalReport(sv.value, BRANCH_SERIES, sv.tail_bound)
    if bracket.is_interval and bracket.n <= THEOREM_N_CAP:
        return theorem_sum(seq, bracket.n, t, trunc)
    if fallback:
        return EvalReport(oracle_expectation(seq, t, eps), BRANCH_ORACLE, eps)
    if bracket.is_interval:
        raise IntervalComplexityError(
            f"t={t} sits in interval n={bracket.n}, past the cap of "
            f"{THEOREM_N_CAP} (2**n subset terms); rerun with fallback to "
            f"use the volume oracle"
        )
    sup, _ = seq._sup()
    raise UncoveredError(
        f"no weight of {seq} reaches t={t} (weights stay below {sup}); the "
        f"finite formula needs a_n < t <= a_(n+1); rerun with fallback to "
        f"use the volume oracle"
    )


def theorem_sum(
    seq: WeightSequence,
    n: int,
    t: float,
    trunc: Truncation = Truncation(),
    prune: bool = True,
) -> EvalReport:
    """Finite-interval formula on ``a_n < t <= a_{n+1}``.

    Sums the exact head probabilities ``p_0 .. p_{n-1}`` (each is 1
    until the weight prefix sum passes ``t``) plus the signed series
    tail over subsets of the first ``n`` weights; see the module
    docstring for why the head cannot be flattened to ``n``.

    ``prune=False`` visits all ``2**n`` subsets instead of cutting dead
    subtrees; the result is bit-for-bit identical (the skipped terms are
    exact zeros), which the tests assert.  The reported error bound is
    the sum of the tail bounds of every series evaluated; the subset
    counters cover the series tail's enumeration only.

    Raises
    ------
    SequenceError
        If ``t`` does not actually lie in interval ``n`` (degenerate
        input, e.g. a plateau of equal weights where the interval is
        empty).
    IntervalComplexityError
        If ``n`` exceeds :data:`THEOREM_N_CAP`.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValueError(f"interval index must be an integer >= 1, got {n!r}")
    if n > THEOREM_N_CAP:
        raise IntervalComplexityError(
            f"interval n={n} exceeds the cap of {THEOREM_N_CAP}"
        )
    if not (seq.term_extended(n) < t <= seq.term_extended(n + 1)):
        raise SequenceError(
            f"t={t} does not lie in (a_{n}, a_{n + 1}] = "
            f"({seq.term_extended(n)}, {seq.term_extended(n + 1)}]; "
            f"interval {n} is the wrong branch for it"
        )
    weights = [seq.term_extended(j) for j in range(1, n + 1)]
    acc = CompensatedSum()
    for m in range(n):
        # p_m == 1 exactly while the first m weights cannot reach t
        if t >= seq.prefix_sum(m):
            acc.add(1.0)
        else:
            acc.add(region_volume(seq, m, t).value)
    terms, evaluated, pruned = signed_shifts(weights, t, prune)
    bound = 0.0
    for sub in terms:
        sv: SeriesValue = tail_series(seq, n, 1, sub.shift, trunc)
        acc.add(sub.sign * sv.value)
        bound += sv.tail_bound
    return EvalReport(acc.value, f"theorem({n})", bound, evaluated, pruned)


def corollary_dattoli(s: int, t: float, trunc: Truncation = Truncation()) -> float:
    """Closed form for power weights ``a_k = k**s`` near the origin.

    ``f(t) = e_s(t)`` for ``0 <= t <= 1`` and
    ``f(t) = e_s(t) - e_s(t - 1) + 1`` for ``1 < t <= 2**s``, where
    ``e_s`` is the Laguerre-type exponential.  Outside those ranges the
    shortcut does not apply (for ``s = 0`` only ``t <= 1`` is covered)
    and a ValueError names the limit.
    """
    if isinstance(s, bool) or not isinstance(s, int) or s < 0:
        raise ValueError(f"power order must be a nonnegative integer, got {s!r}")
    if not math.isfinite(t) or t < 0.0:
        raise ValueError(f"threshold must be finite and >= 0, got {t}")
    if t <= 1.0:
        return laguerre_e(s, t, trunc).value
    hi = 2.0**s
    if s == 0 or t > hi:
        raise ValueError(
            f"closed form for power order s={s} covers t <= {max(hi, 1.0)}, "
            f"got t={t}"
        )
    return laguerre_e(s, t, trunc).value - laguerre_e(s, t - 1.0, trunc).value + 1.0
