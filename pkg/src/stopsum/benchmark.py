"""Benchmark the numba kernel against the numpy fallback.

Both backends must return bit-identical statistics, so the comparison
is purely about throughput; the run aborts loudly if the results ever
differ.  Run as ``python -m stopsum.benchmark`` or ``stopsum bench``.

The numba path pays a one-time JIT compilation cost (cached on disk
after the first process); a warmup call keeps it out of the timings.
The numpy kernel advances all blocks one draw per pass, so its
throughput grows with the number of blocks in flight: expect it to look
respectable at the default block size and much worse with a handful of
huge blocks.
"""

from __future__ import annotations

import time

from .backend import HAS_NUMBA, active_backend
from .montecarlo import run_experiment
from .sequence import parse_sequence


def _time_once(seq, t, trials, block, backend) -> tuple[float, object]:
    start = time.perf_counter()
    stats, _ = run_experiment(seq, t, trials, block=block, backend=backend)
    return time.perf_counter() - start, stats


def run_benchmark(
    seq_spec: str = "const:1",
    t: float = 1.0,
    trials: int = 200_000,
    block: int = 500,
    repeats: int = 3,
    echo=print,
) -> list[dict]:
    """Time both backends on one workload, repeat, keep the best.

    Returns the measurement rows; raises if the backends disagree on
    any statistic.
    """
    seq = parse_sequence(seq_spec)
    backends = ["numpy"]
    if HAS_NUMBA:
        backends.insert(0, "numba")
        # compile outside the timed region
        run_experiment(seq, t, min(trials, 1000), block=block, backend="numba")
    echo(
        f"benchmark: seq={seq_spec} t={t} trials={trials} block={block} "
        f"repeats={repeats} (default backend: {active_backend()})"
    )

    rows = []
    reference = None
    for backend in backends:
        best = None
        stats = None
        for _ in range(max(1, repeats)):
            elapsed, stats = _time_once(seq, t, trials, block, backend)
            best = elapsed if best is None else min(best, elapsed)
        if reference is None:
            reference = stats
        elif stats != reference:
            raise AssertionError(
                f"backend {backend} disagrees with {backends[0]}: "
                f"{stats} != {reference}"
            )
        rows.append(
            {
                "backend": backend,
                "best_s": best,
                "trials_per_s": trials / best,
                "mean": stats.mean,
            }
        )

    echo(f"{'backend':<8} {'best':>10} {'trials/s':>14} {'mean':>20}")
    for row in rows:
        echo(
            f"{row['backend']:<8} {row['best_s']:>9.4f}s "
            f"{row['trials_per_s']:>14,.0f} {row['mean']:>20.15f}"
        )
    if len(rows) == 2:
        echo(f"speedup (numba over numpy): {rows[1]['best_s'] / rows[0]['best_s']:.2f}x")
        echo("results: bit-identical across backends")
    return rows


if __name__ == "__main__":  # pragma: no cover
    run_benchmark()
