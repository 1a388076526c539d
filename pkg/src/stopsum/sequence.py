"""Weight sequences and threshold bracketing.

The quantity computed everywhere in this package is the expected number
of uniform [0, 1] draws ``x_1, x_2, ...`` needed before the weighted sum
``a_1 x_1 + ... + a_n x_n`` first exceeds a threshold ``t``, for a fixed
positive nondecreasing weight sequence ``(a_k)``.  This module owns the
sequence side of that story: the supported families, the text grammar
used on the command line, validation, and the bracketing search that
locates ``t`` between consecutive weights (the case split every analytic
formula starts from).

Four families are supported::

    const:<c>        a_k = c
    power:<s>        a_k = k**s        (s >= 0)
    qgeom:<q>        a_k = 1 - q**k    (0 < q < 1)
    list:a1,a2,...   finitely many explicit weights

An explicit list is finite, so positions past its end have no listed
weight.  ``term`` treats them as errors, while ``term_extended``
continues the list as a constant tail equal to its last entry.  All
numeric routes (series, volume oracle, simulator) use the extension, so
they agree on one underlying infinite sequence; analytic coverage for a
list is still capped at thresholds ``t <= a_L`` because beyond the last
listed weight the bracketing position is no longer determined by data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SequenceError",
    "TermRangeError",
    "Bracket",
    "ValidationReport",
    "WeightSequence",
    "parse_sequence",
]

GRAMMAR = "const:<c> | power:<s> | qgeom:<q> | list:a1,a2,..."


class SequenceError(ValueError):
    """Malformed sequence specification or invalid index."""


class TermRangeError(SequenceError):
    """Index past the end of an explicit weight list."""


@dataclass(frozen=True)
class Bracket:
    """Position of a threshold ``t`` relative to the weights.

    ``kind`` is one of:

    * ``"below"``: ``t <= a_1``, the pure series regime,
    * ``"interval"``: ``a_n < t <= a_{n+1}`` for the stored ``n >= 1``,
    * ``"uncovered"``: no weight ever reaches ``t`` (or none within the
      probe budget), so the finite-sum formula does not apply.
    """

    kind: str
    n: int | None = None

    @property
    def is_below(self) -> bool:
        return self.kind == "below"

    @property
    def is_interval(self) -> bool:
        return self.kind == "interval"

    @property
    def is_uncovered(self) -> bool:
        return self.kind == "uncovered"

    def __str__(self) -> str:
        return f"interval({self.n})" if self.is_interval else self.kind


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of probing a sequence for positivity and monotonicity."""

    ok: bool
    index: int | None = None
    message: str = "ok"


@dataclass(frozen=True)
class WeightSequence:
    """A positive nondecreasing weight sequence.

    Build instances through the classmethods (:meth:`constant`,
    :meth:`power`, :meth:`qgeom`, :meth:`explicit`) or from text via
    :func:`parse_sequence`.  Instances are immutable and safe to share
    across threads; the only mutable state is an append-only prefix-sum
    memo.

    Notes
    -----
    Family parameters are checked at construction, but the entries of an
    explicit list are only checked by :meth:`validate` (so that a report
    can name the first offending position).  :func:`parse_sequence`
    always validates.
    """

    kind: str
    param: float = 0.0
    values: tuple[float, ...] = ()
    _psums: list = field(default_factory=list, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self._psums.append(0.0)

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def constant(cls, c: float) -> "WeightSequence":
        """Constant weights ``a_k = c`` with ``c > 0``."""
        c = float(c)
        if not math.isfinite(c) or c <= 0.0:
            raise SequenceError(f"const weight must be finite and positive, got {c}")
        return cls("const", c)

    @classmethod
    def power(cls, s: float) -> "WeightSequence":
        """Polynomial weights ``a_k = k**s`` with ``s >= 0``."""
        s = float(s)
        if not math.isfinite(s) or s < 0.0:
            raise SequenceError(
                f"power exponent must be finite and >= 0 (nondecreasing), got {s}"
            )
        return cls("power", s)

    @classmethod
    def qgeom(cls, q: float) -> "WeightSequence":
        """Saturating weights ``a_k = 1 - q**k`` with ``0 < q < 1``."""
        q = float(q)
        if not (0.0 < q < 1.0):
            raise SequenceError(f"qgeom base must lie strictly in (0, 1), got {q}")
        return cls("qgeom", q)

    @classmethod
    def explicit(cls, values) -> "WeightSequence":
        """Finite list of weights.  Entries must be finite numbers.

        Positivity and monotonicity are deliberately left to
        :meth:`validate`, which reports the first violating index.
        """
        vals = tuple(float(v) for v in values)
        if not vals:
            raise SequenceError("explicit weight list must not be empty")
        for i, v in enumerate(vals, start=1):
            if not math.isfinite(v):
                raise SequenceError(f"weight a_{i} must be finite, got {v}")
        return cls("explicit", 0.0, vals)

    # ------------------------------------------------------------------
    # terms

    def term(self, k: int) -> float:
        """Weight ``a_k`` (1-based).

        Raises
        ------
        TermRangeError
            For an explicit list when ``k`` exceeds the listed length;
            the message names the largest analytically covered
            threshold.
        """
        k = self._check_index(k)
        if self.kind == "explicit" and k > len(self.values):
            last = self.values[-1]
            raise TermRangeError(
                f"index {k} is past the {len(self.values)}-term explicit list; "
                f"listed weights cover thresholds t <= {last}"
            )
        return self._raw_term(k)

    def term_extended(self, k: int) -> float:
        """Weight ``a_k``, continuing explicit lists as a constant tail.

        This is the infinite continuation shared by the series code, the
        volume oracle and the simulator.  For generator families it is
        identical to :meth:`term`.
        """
        return self._raw_term(self._check_index(k))

    def _raw_term(self, k: int) -> float:
        if self.kind == "const":
            return self.param
        if self.kind == "power":
            return float(k) ** self.param
        if self.kind == "qgeom":
            return 1.0 - self.param**k
        return self.values[min(k, len(self.values)) - 1]

    @staticmethod
    def _check_index(k) -> int:
        if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
            raise SequenceError(f"term index must be an integer, got {k!r}")
        if k < 1:
            raise SequenceError(f"term index must be >= 1, got {k}")
        return int(k)

    def weight_table(self, count: int) -> np.ndarray:
        """First ``count`` extended weights as a float64 array."""
        if count < 1:
            raise SequenceError(f"weight table length must be >= 1, got {count}")
        if self.kind == "const":
            return np.full(count, self.param)
        if self.kind == "power":
            return np.arange(1, count + 1, dtype=np.float64) ** self.param
        if self.kind == "qgeom":
            return 1.0 - self.param ** np.arange(1, count + 1, dtype=np.float64)
        vals = np.asarray(self.values, dtype=np.float64)
        if count <= vals.size:
            return vals[:count].copy()
        return np.concatenate([vals, np.full(count - vals.size, vals[-1])])

    def prefix_sum(self, n: int) -> float:
        """Partial sum ``A_n = a_1 + ... + a_n`` (extended terms), memoized."""
        if n < 0:
            raise SequenceError(f"prefix length must be >= 0, got {n}")
        ps = self._psums
        while len(ps) <= n:
            ps.append(ps[-1] + self._raw_term(len(ps)))
        return ps[n]

    # ------------------------------------------------------------------
    # structure

    def _sup(self) -> tuple[float, bool]:
        """Supremum of the weights and whether some term attains it."""
        if self.kind == "const":
            return self.param, True
        if self.kind == "power":
            return (math.inf, True) if self.param > 0 else (1.0, True)
        if self.kind == "qgeom":
            return 1.0, False
        return max(self.values), True

    def bracket(self, t: float, probe_limit: int = 10**6) -> Bracket:
        """Locate ``t`` relative to the weights.

        Returns ``below`` when ``t <= a_1``, ``interval(n)`` for the
        smallest ``n`` with ``a_n < t <= a_{n+1}`` (plateaus of equal
        weights are skipped correctly), and ``uncovered`` when the
        weights never reach ``t``.  The index search is exponential plus
        bisection, so thresholds sitting near term one million cost only
        a few dozen probes; indexes past ``probe_limit`` are reported as
        uncovered rather than searched forever.
        """
        t = float(t)
        if not math.isfinite(t):
            raise SequenceError(f"threshold must be finite, got {t}")
        if t <= self.term_extended(1):
            return Bracket("below")
        sup, attained = self._sup()
        if t > sup or (t >= sup and not attained):
            return Bracket("uncovered")
        lo, hi = 1, 2
        if self.kind == "explicit":
            probe_limit = len(self.values)
        while self._raw_term(hi) < t:
            if hi >= probe_limit:
                return Bracket("uncovered")
            lo, hi = hi, min(hi * 2, probe_limit)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self._raw_term(mid) >= t:
                hi = mid
            else:
                lo = mid
        return Bracket("interval", lo)

    def validate(self, probe_depth: int = 100) -> ValidationReport:
        """Probe leading terms for positivity and monotonicity.

        Explicit lists are always checked in full; generator families
        are probed through ``probe_depth`` terms (their parameters were
        already range-checked at construction, so this is a tripwire,
        not a proof).
        """
        depth = len(self.values) if self.kind == "explicit" else max(2, probe_depth)
        prev = None
        for k in range(1, depth + 1):
            a = self._raw_term(k)
            if not math.isfinite(a) or a <= 0.0:
                return ValidationReport(
                    False, k, f"weight a_{k}={a} is not finite and positive"
                )
            if prev is not None and a < prev:
                return ValidationReport(
                    False, k, f"weights decrease at k={k}: a_{k}={a} < a_{k-1}={prev}"
                )
            prev = a
        return ValidationReport(True)

    def __str__(self) -> str:
        if self.kind == "const":
            return f"const:{self.param!r}"
        if self.kind == "power":
            return f"power:{self.param!r}"
        if self.kind == "qgeom":
            return f"qgeom:{self.param!r}"
        return "list:" + ",".join(repr(v) for v in self.values)


def _parse_real(text: str, what: str) -> float:
    try:
        value = float(text.strip())
    except ValueError:
        raise SequenceError(f"cannot parse {what} from {text!r}") from None
    if not math.isfinite(value):
        raise SequenceError(f"{what} must be finite, got {text!r}")
    return value


def parse_sequence(spec: str) -> WeightSequence:
    """Parse and validate a sequence from its text form.

    The grammar is ``const:<c> | power:<s> | qgeom:<q> | list:a1,a2,...``
    with decimal parameters.  Raises :class:`SequenceError` on malformed
    text, bad parameters, or an explicit list that is not positive and
    nondecreasing.
    """
    if not isinstance(spec, str):
        raise SequenceError(f"sequence spec must be a string, got {spec!r}")
    head, sep, rest = spec.partition(":")
    if not sep:
        raise SequenceError(f"missing ':' in sequence spec {spec!r}; grammar: {GRAMMAR}")
    kind = head.strip().lower()
    if kind == "const":
        seq = WeightSequence.constant(_parse_real(rest, "const weight"))
    elif kind == "power":
        seq = WeightSequence.power(_parse_real(rest, "power exponent"))
    elif kind == "qgeom":
        seq = WeightSequence.qgeom(_parse_real(rest, "qgeom base"))
    elif kind == "list":
        parts = [p.strip() for p in rest.split(",")]
        if parts == [""]:
            raise SequenceError(f"empty weight list in {spec!r}")
        if any(not p for p in parts):
            # a skipped hole would silently change the sequence
            raise SequenceError(f"empty entry in weight list {spec!r}")
        seq = WeightSequence.explicit(
            _parse_real(p, f"weight a_{i}") for i, p in enumerate(parts, start=1)
        )
    else:
        raise SequenceError(f"unknown sequence kind {head!r}; grammar: {GRAMMAR}")
    report = seq.validate()
    if not report.ok:
        raise SequenceError(f"invalid sequence {spec!r}: {report.message}")
    return seq
