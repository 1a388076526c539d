"""Expected number of weighted uniform draws to cross a threshold.

Given positive nondecreasing weights ``a_1 <= a_2 <= ...`` and i.i.d.
uniform [0, 1] draws ``x_i``, let ``N(t)`` be the first ``n`` with
``a_1 x_1 + ... + a_n x_n > t``.  This package evaluates ``E[N(t)]``
three independent ways and cross-checks them:

* closed forms built from certified power series
  (:mod:`stopsum.analytic`, :mod:`stopsum.series`),
* exact clipped-simplex volumes summed over dimensions
  (:mod:`stopsum.volume`),
* counter-based Monte Carlo simulation with a numba kernel and a
  bit-identical numpy fallback (:mod:`stopsum.montecarlo`).

The ``stopsum`` command line fronts all three; see ``stopsum --help``.
"""

from .analytic import (
    THEOREM_N_CAP,
    EvalReport,
    IntervalComplexityError,
    UncoveredError,
    corollary_dattoli,
    expected_crossings,
    theorem_sum,
)
from .backend import HAS_NUMBA, BackendError, active_backend
from .montecarlo import (
    ConvergenceTrace,
    DivergingTrialError,
    TraceRow,
    TrialStats,
    run_experiment,
)
from .sequence import (
    Bracket,
    SequenceError,
    TermRangeError,
    ValidationReport,
    WeightSequence,
    parse_sequence,
)
from .series import (
    SeriesValue,
    Truncation,
    TruncationError,
    clip_plus,
    laguerre_e,
    q_exponential,
    q_pochhammer,
    tail_series,
)
from .volume import (
    MAX_DIMENSION,
    DimensionCapError,
    MCVolume,
    VolumeResult,
    mc_volume,
    oracle_expectation,
    region_volume,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # sequence
    "WeightSequence",
    "Bracket",
    "ValidationReport",
    "SequenceError",
    "TermRangeError",
    "parse_sequence",
    # series
    "Truncation",
    "SeriesValue",
    "TruncationError",
    "clip_plus",
    "tail_series",
    "laguerre_e",
    "q_pochhammer",
    "q_exponential",
    # analytic
    "EvalReport",
    "UncoveredError",
    "IntervalComplexityError",
    "THEOREM_N_CAP",
    "expected_crossings",
    "theorem_sum",
    "corollary_dattoli",
    # volume
    "VolumeResult",
    "MCVolume",
    "DimensionCapError",
    "MAX_DIMENSION",
    "region_volume",
    "oracle_expectation",
    "mc_volume",
    # montecarlo
    "TrialStats",
    "TraceRow",
    "ConvergenceTrace",
    "DivergingTrialError",
    "run_experiment",
    # backend
    "HAS_NUMBA",
    "BackendError",
    "active_backend",
]
