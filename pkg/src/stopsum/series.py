"""Certified evaluation of the power series behind the expectation.

For a weight sequence ``(a_k)`` the fundamental object is the shifted
tail series

    g_n(t; k) = sum_{i >= n} t**i / (i! * a_k * a_{k+1} * ... * a_{i+k-1}),

an entire function of ``t``.  With ``n = 0`` and ``k = 1`` it equals the
expected number of draws whenever ``t <= a_1``; the finite-interval
formula in :mod:`stopsum.analytic` is an alternating combination of
shifted copies of it.  Two classical specializations get their own
entry points: ``laguerre_e`` (weights ``k**s``, a Laguerre-type
exponential that reduces to a Bessel function at ``s = 1``) and
``q_exponential`` (weights ``1 - q**k``).

Every evaluator returns a :class:`SeriesValue` carrying a rigorous bound
on the discarded tail.  Summation stops only when the current term is
both below ``rel_tol`` times the partial sum and in the regime where
successive term ratios are under one half, so the geometric tail bound
``term * r / (1 - r)`` is valid (ratios are decreasing in ``i``).  Terms
are built by ratio accumulation, never from raw factorials, and folded
through compensated summation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .sequence import SequenceError, WeightSequence
from .summation import CompensatedSum

__all__ = [
    "Truncation",
    "SeriesValue",
    "TruncationError",
    "clip_plus",
    "tail_series",
    "laguerre_e",
    "q_pochhammer",
    "q_exponential",
]

# a term ratio below this makes the geometric tail bound both valid and tight
_RATIO_CUTOFF = 0.5


@dataclass(frozen=True)
class Truncation:
    """Stopping policy for series summation.

    ``rel_tol`` is the relative size a term must drop below (against the
    running partial sum) before summation may stop; ``max_terms`` caps
    the number of terms summed before giving up.
    """

    rel_tol: float = 1e-14
    max_terms: int = 10_000

    def __post_init__(self) -> None:
        if not (0.0 < self.rel_tol < 1.0):
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms}")


@dataclass(frozen=True)
class SeriesValue:
    """A series evaluation together with its certificate.

    ``tail_bound`` is a rigorous upper bound on the discarded tail (the
    truncation error), not an estimate; ``terms_used`` counts the terms
    actually summed.
    """

    value: float
    tail_bound: float
    terms_used: int


class TruncationError(RuntimeError):
    """Raised when a series fails to satisfy the stopping rule in budget.

    The partial result is attached as ``partial`` so callers can inspect
    how far summation got.
    """

    def __init__(self, message: str, partial: SeriesValue) -> None:
        super().__init__(message)
        self.partial = partial


def clip_plus(x: float) -> float:
    """Positive part: ``x`` if positive, else exactly 0.0."""
    return x if x > 0.0 else 0.0


def _converge(term: float, start: int, ratio_at, trunc: Truncation, label: str) -> SeriesValue:
    """Sum ``term * (1 + r_start + r_start r_{start+1} + ...)`` safely.

    ``ratio_at(i)`` must return the ratio term_{i+1} / term_i and be
    nonincreasing in ``i``.  The loop stops once the freshly added term
    is below ``rel_tol`` times the partial sum and the next ratio is
    under one half; the discarded tail is then at most
    ``term * r / (1 - r)``.
    """
    acc = CompensatedSum()
    i = start
    used = 0
    while True:
        acc.add(term)
        used += 1
        r = ratio_at(i)
        # a term that underflowed to zero ends the representable series;
        # the relative test alone would spin forever on a zero partial sum
        if r < _RATIO_CUTOFF and (term == 0.0 or term < trunc.rel_tol * abs(acc.value)):
            return SeriesValue(acc.value, term * r / (1.0 - r), used)
        if used >= trunc.max_terms:
            raise TruncationError(
                f"{label} did not meet rel_tol={trunc.rel_tol} within "
                f"{trunc.max_terms} terms",
                SeriesValue(acc.value, math.inf, used),
            )
        term *= r
        i += 1


def tail_series(
    seq: WeightSequence,
    n: int,
    k: int,
    t: float,
    trunc: Truncation = Truncation(),
) -> SeriesValue:
    """Evaluate the shifted tail series ``g_n(t; k)`` for ``seq``.

    Parameters
    ----------
    seq : WeightSequence
        Weight sequence; explicit lists continue as a constant tail.
    n : int
        First retained power of ``t`` (``n >= 0``).
    k : int
        Weight offset: term ``i`` divides by ``a_k * ... * a_{i+k-1}``.
    t : float
        Argument.  Negative ``t`` evaluates to exactly zero (the series
        is used as a positive-part function), and ``t = 0`` gives 1 for
        ``n = 0``, else 0.

    Returns
    -------
    SeriesValue
        Value with a rigorous tail bound and the term count.
    """
    if n < 0:
        raise ValueError(f"series start n must be >= 0, got {n}")
    if k < 1:
        raise SequenceError(f"weight offset k must be >= 1, got {k}")
    if not math.isfinite(t):
        raise ValueError(f"series argument must be finite, got {t}")
    if t < 0.0:
        return SeriesValue(0.0, 0.0, 0)
    if t == 0.0:
        return SeriesValue(1.0 if n == 0 else 0.0, 0.0, 1)

    # leading term t**n / (n! * a_k ... a_{n+k-1}) by ratio accumulation
    term = 1.0
    for i in range(1, n + 1):
        term *= t / (i * seq.term_extended(k + i - 1))

    def ratio_at(i: int) -> float:
        return t / ((i + 1) * seq.term_extended(i + k))

    return _converge(term, n, ratio_at, trunc, f"tail series n={n}, k={k}, t={t}")


def laguerre_e(s: int, t: float, trunc: Truncation = Truncation()) -> SeriesValue:
    """Laguerre-type exponential ``sum_n t**n / (n!)**(s+1)``.

    ``s = 0`` is the ordinary exponential; ``s = 1`` equals the Bessel
    function ``I_0(2 sqrt(t))``, which the tests use as an independent
    oracle.  Requires ``s >= 0`` and ``t >= 0``.
    """
    if isinstance(s, bool) or not isinstance(s, int):
        raise ValueError(f"order s must be an integer, got {s!r}")
    if s < 0:
        raise ValueError(f"order s must be >= 0, got {s}")
    if not math.isfinite(t) or t < 0.0:
        raise ValueError(f"argument must be finite and >= 0, got {t}")
    if t == 0.0:
        return SeriesValue(1.0, 0.0, 1)

    def ratio_at(n: int) -> float:
        return t / float(n + 1) ** (s + 1)

    return _converge(1.0, 0, ratio_at, trunc, f"laguerre series s={s}, t={t}")


def q_pochhammer(q: float, n: int) -> float:
    """Finite product ``(q; q)_n = (1-q)(1-q**2)...(1-q**n)``.

    ``n = 0`` is the empty product 1.  Requires ``0 <= q < 1`` so all
    factors are positive.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ValueError(f"product length must be a nonnegative integer, got {n!r}")
    if not (0.0 <= q < 1.0):
        raise ValueError(f"base must lie in [0, 1), got {q}")
    out = 1.0
    for i in range(1, n + 1):
        out *= 1.0 - q**i
    return out


def q_exponential(q: float, t: float, trunc: Truncation = Truncation()) -> SeriesValue:
    """The series ``sum_n t**n / (n! * (q; q)_n)`` for ``0 <= q < 1``.

    This is the closed form of the tail series for the saturating
    weights ``a_k = 1 - q**k``; at ``q = 0`` it collapses to ``exp(t)``.
    Requires ``t >= 0``.
    """
    if not (0.0 <= q < 1.0):
        raise ValueError(f"base must lie in [0, 1), got {q}")
    if not math.isfinite(t) or t < 0.0:
        raise ValueError(f"argument must be finite and >= 0, got {t}")
    if t == 0.0:
        return SeriesValue(1.0, 0.0, 1)

    def ratio_at(n: int) -> float:
        return t / ((n + 1) * (1.0 - q ** (n + 1)))

    return _converge(1.0, 0, ratio_at, trunc, f"q-exponential q={q}, t={t}")
