"""Command line interface.

One executable, ``stopsum``, fronts the three evaluation routes: the
analytic branch dispatcher (``eval``), the exact volume oracle
(``oracle``, ``volume``), and the simulator (``simulate``), plus the
combined ``compare`` and ``curve`` tables and a backend benchmark
(``bench``).  Output is CSV by default (LF line endings, floats with 17
significant digits so values round-trip exactly) or JSON via
``--format json``.

Exit codes: 0 on success, 2 for unusable input (bad sequence spec, bad
numbers), 3 when the analytic route cannot cover the request and
fallback was not enabled, 1 for runtime failures such as a diverging
simulation.
"""

from __future__ import annotations

import json
import sys

import click

import numpy as np

from . import __version__
from .analytic import (
    IntervalComplexityError,
    UncoveredError,
    expected_crossings,
)
from .montecarlo import (
    DEFAULT_BLOCK,
    DEFAULT_STEP_CAP,
    DivergingTrialError,
    run_experiment,
)
from .sequence import GRAMMAR, SequenceError, parse_sequence
from .series import Truncation, TruncationError
from .volume import DimensionCapError, MAX_DIMENSION, oracle_expectation, region_volume

EXIT_RUNTIME = 1
EXIT_UNCOVERED = 3


def _fmt(x: float) -> str:
    """Shortest-safe float format: 17 significant digits round-trip."""
    return format(float(x), ".17g")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _run(body) -> None:
    """Translate library errors into the documented exit codes."""
    try:
        body()
    except (UncoveredError, IntervalComplexityError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_UNCOVERED)
    except (SequenceError, ValueError) as exc:
        raise click.UsageError(str(exc)) from exc
    except (DivergingTrialError, TruncationError, DimensionCapError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_RUNTIME)


def _parse_grid(text: str) -> list[float]:
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            values.append(float(part))
        except ValueError:
            raise ValueError(f"cannot parse threshold {part!r} in grid") from None
    if not values:
        raise ValueError("threshold grid is empty")
    return values


_seq_option = click.option(
    "--seq",
    "seq_spec",
    required=True,
    metavar="SPEC",
    help=f"Weight sequence: {GRAMMAR}",
)
_t_option = click.option("--t", "t", type=float, required=True, help="Threshold, >= 0.")
_format_option = click.option(
    "--format",
    "fmt",
    type=click.Choice(["csv", "json"]),
    default="csv",
    show_default=True,
    help="Output format.",
)
_out_option = click.option(
    "--out",
    type=click.Path(dir_okay=False, writable=True),
    default=None,
    help="Write output to a file instead of stdout.",
)
_backend_option = click.option(
    "--backend",
    type=click.Choice(["numba", "numpy"]),
    default=None,
    help="Simulation kernel (default: numba if available, else numpy; "
    "also settable via STOPSUM_BACKEND).",
)
_workers_option = click.option(
    "--workers",
    type=int,
    default=None,
    help="Thread budget for the numba kernel; never changes results.",
)


@click.group(
    context_settings={
        "auto_envvar_prefix": "STOPSUM",
        "help_option_names": ["-h", "--help"],
    }
)
@click.version_option(version=__version__, prog_name="stopsum")
def main() -> None:
    """Expected number of weighted uniform draws to cross a threshold.

    Weights are positive and nondecreasing; draws are uniform on [0, 1].
    Every option can also be set through environment variables named
    STOPSUM_<COMMAND>_<OPTION>, e.g. STOPSUM_SIMULATE_TRIALS=50000.
    """


@main.command("eval")
@_seq_option
@_t_option
@click.option(
    "--rel-tol",
    type=float,
    default=1e-14,
    show_default=True,
    help="Relative stopping tolerance for series terms.",
)
@click.option(
    "--max-terms",
    type=int,
    default=10_000,
    show_default=True,
    help="Series term budget.",
)
@click.option(
    "--fallback/--no-fallback",
    default=False,
    show_default=True,
    help="Use the volume oracle when no closed form covers t.",
)
@click.option(
    "--eps",
    type=float,
    default=1e-12,
    show_default=True,
    help="Oracle tail tolerance (used by the fallback).",
)
@_format_option
@_out_option
def cmd_eval(seq_spec, t, rel_tol, max_terms, fallback, eps, fmt, out) -> None:
    """Evaluate the expectation analytically."""

    def body() -> None:
        seq = parse_sequence(seq_spec)
        report = expected_crossings(seq, t, Truncation(rel_tol, max_terms), fallback, eps)
        if fmt == "json":
            text = (
                json.dumps(
                    {
                        "seq": str(seq),
                        "t": t,
                        "value": report.value,
                        "branch": report.branch,
                        "error_bound": report.error_bound,
                        "subsets_evaluated": report.subsets_evaluated,
                        "subsets_pruned": report.subsets_pruned,
                    },
                    indent=2,
                )
                + "\n"
            )
        else:
            text = (
                "t,value,branch,error_bound,subsets_evaluated,subsets_pruned\n"
                f"{_fmt(t)},{_fmt(report.value)},{report.branch},"
                f"{_fmt(report.error_bound)},{report.subsets_evaluated},"
                f"{report.subsets_pruned}\n"
            )
        _emit(text, out)

    _run(body)


@main.command("simulate")
@_seq_option
@_t_option
@click.option("--trials", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option(
    "--block",
    type=int,
    default=DEFAULT_BLOCK,
    show_default=True,
    help="Trials per block; part of the reproducibility contract.",
)
@click.option(
    "--step-cap",
    type=int,
    default=DEFAULT_STEP_CAP,
    show_default=True,
    help="Per-trial draw budget; exceeding it is a diverging-trial error.",
)
@_workers_option
@_backend_option
@_format_option
@_out_option
def cmd_simulate(
    seq_spec, t, trials, seed, block, step_cap, workers, backend, fmt, out
) -> None:
    """Monte Carlo estimate with a block-by-block convergence trace."""

    def body() -> None:
        seq = parse_sequence(seq_spec)
        stats, trace = run_experiment(
            seq, t, trials, seed, block, step_cap, workers, backend
        )
        if fmt == "json":
            text = (
                json.dumps(
                    {
                        "seq": str(seq),
                        "t": t,
                        "seed": seed,
                        "trials": stats.trials,
                        "mean": stats.mean,
                        "variance": stats.variance,
                        "stderr": stats.stderr,
                        "min_n": stats.min_n,
                        "max_n": stats.max_n,
                    },
                    indent=2,
                )
                + "\n"
            )
        else:
            lines = [
                "trials,mean,variance,stderr,min_n,max_n",
                f"{stats.trials},{_fmt(stats.mean)},{_fmt(stats.variance)},"
                f"{_fmt(stats.stderr)},{stats.min_n},{stats.max_n}",
                "",
                "trials,running_mean,running_stderr",
            ]
            lines.extend(
                f"{row.trials},{_fmt(row.running_mean)},{_fmt(row.running_stderr)}"
                for row in trace
            )
            text = "\n".join(lines) + "\n"
        _emit(text, out)

    _run(body)


@main.command("oracle")
@_seq_option
@_t_option
@click.option(
    "--eps",
    type=float,
    default=1e-12,
    show_default=True,
    help="Certified bound on the discarded dimension tail.",
)
@click.option(
    "--max-dim",
    type=int,
    default=MAX_DIMENSION,
    show_default=True,
    help="Hard cap on the exact-volume dimension.",
)
@_format_option
@_out_option
def cmd_oracle(seq_spec, t, eps, max_dim, fmt, out) -> None:
    """Expectation by exact volume summation (slow but assumption-free)."""

    def body() -> None:
        seq = parse_sequence(seq_spec)
        value = oracle_expectation(seq, t, eps, max_dim)
        if fmt == "json":
            text = (
                json.dumps({"seq": str(seq), "t": t, "value": value, "eps": eps}, indent=2)
                + "\n"
            )
        else:
            text = f"t,value,eps\n{_fmt(t)},{_fmt(value)},{_fmt(eps)}\n"
        _emit(text, out)

    _run(body)


@main.command("volume")
@_seq_option
@click.option("--m", "m", type=int, required=True, help="Dimension, 0..30.")
@_t_option
@_format_option
@_out_option
def cmd_volume(seq_spec, m, t, fmt, out) -> None:
    """Exact volume of the region where m weighted draws stay at or below t."""

    def body() -> None:
        seq = parse_sequence(seq_spec)
        res = region_volume(seq, m, t)
        if fmt == "json":
            text = (
                json.dumps(
                    {
                        "seq": str(seq),
                        "m": res.m,
                        "t": t,
                        "value": res.value,
                        "cancellation": res.cancellation,
                    },
                    indent=2,
                )
                + "\n"
            )
        else:
            text = (
                "m,t,value,cancellation\n"
                f"{res.m},{_fmt(t)},{_fmt(res.value)},{_fmt(res.cancellation)}\n"
            )
        _emit(text, out)

    _run(body)


@main.command("compare")
@_seq_option
@click.option(
    "--t-grid",
    "t_grid",
    required=True,
    metavar="T1,T2,...",
    help="Comma-separated thresholds.",
)
@click.option("--trials", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--block", type=int, default=DEFAULT_BLOCK, show_default=True)
@click.option("--rel-tol", type=float, default=1e-14, show_default=True)
@click.option("--eps", type=float, default=1e-12, show_default=True)
@click.option(
    "--fallback/--no-fallback",
    default=False,
    show_default=True,
    help="Route analytically uncovered thresholds to the oracle.",
)
@_workers_option
@_backend_option
@_format_option
@_out_option
def cmd_compare(
    seq_spec, t_grid, trials, seed, block, rel_tol, eps, fallback, workers,
    backend, fmt, out,
) -> None:
    """All three routes on a threshold grid, with agreement columns.

    Row i simulates with seed ``seed + i`` so rows are decorrelated;
    ``abs_diff`` is |analytic - oracle| and ``z`` is the MC deviation
    from analytic in standard errors.
    """

    def body() -> None:
        seq = parse_sequence(seq_spec)
        rows = []
        for i, t in enumerate(_parse_grid(t_grid)):
            report = expected_crossings(seq, t, Truncation(rel_tol), fallback, eps)
            reference = oracle_expectation(seq, t, eps)
            stats, _ = run_experiment(
                seq, t, trials, seed + i, block, DEFAULT_STEP_CAP, workers, backend
            )
            z = (
                (stats.mean - report.value) / stats.stderr
                if stats.stderr > 0.0
                else 0.0
            )
            rows.append(
                {
                    "t": t,
                    "analytic": report.value,
                    "branch": report.branch,
                    "oracle": reference,
                    "mc_mean": stats.mean,
                    "mc_stderr": stats.stderr,
                    "abs_diff": abs(report.value - reference),
                    "z": z,
                }
            )
        if fmt == "json":
            text = json.dumps(rows, indent=2) + "\n"
        else:
            lines = ["t,analytic,branch,oracle,mc_mean,mc_stderr,abs_diff,z"]
            lines.extend(
                f"{_fmt(r['t'])},{_fmt(r['analytic'])},{r['branch']},"
                f"{_fmt(r['oracle'])},{_fmt(r['mc_mean'])},{_fmt(r['mc_stderr'])},"
                f"{_fmt(r['abs_diff'])},{_fmt(r['z'])}"
                for r in rows
            )
            text = "\n".join(lines) + "\n"
        _emit(text, out)

    _run(body)


@main.command("curve")
@_seq_option
@click.option("--t-min", type=float, required=True)
@click.option("--t-max", type=float, required=True)
@click.option("--steps", type=int, default=21, show_default=True, help="Grid points.")
@click.option("--trials", type=int, default=100_000, show_default=True)
@click.option(
    "--trace-t",
    type=float,
    default=None,
    help="Threshold for the convergence trace [default: t-max].",
)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--block", type=int, default=DEFAULT_BLOCK, show_default=True)
@click.option("--rel-tol", type=float, default=1e-14, show_default=True)
@click.option("--eps", type=float, default=1e-12, show_default=True)
@click.option(
    "--fallback/--no-fallback",
    default=True,
    show_default=True,
    help="Curves default to oracle fallback so sweeps cross coverage edges.",
)
@_workers_option
@_backend_option
@_out_option
def cmd_curve(
    seq_spec, t_min, t_max, steps, trials, trace_t, seed, block, rel_tol, eps,
    fallback, workers, backend, out,
) -> None:
    """Analytic curve over a grid plus one MC convergence trace.

    Emits two CSV sections separated by a blank line: the curve
    (t,analytic,branch) and the trace (trials,running_mean,
    running_stderr) at --trace-t.
    """

    def body() -> None:
        if steps < 1:
            raise ValueError(f"steps must be >= 1, got {steps}")
        if t_max < t_min:
            raise ValueError(f"t-max {t_max} below t-min {t_min}")
        seq = parse_sequence(seq_spec)
        grid = np.linspace(t_min, t_max, steps)
        trunc = Truncation(rel_tol)
        lines = ["t,analytic,branch"]
        for t in grid:
            report = expected_crossings(seq, float(t), trunc, fallback, eps)
            lines.append(f"{_fmt(t)},{_fmt(report.value)},{report.branch}")
        at = t_max if trace_t is None else trace_t
        stats, trace = run_experiment(
            seq, at, trials, seed, block, DEFAULT_STEP_CAP, workers, backend
        )
        lines.append("")
        lines.append("trials,running_mean,running_stderr")
        lines.extend(
            f"{row.trials},{_fmt(row.running_mean)},{_fmt(row.running_stderr)}"
            for row in trace
        )
        _emit("\n".join(lines) + "\n", out)

    _run(body)


@main.command("bench")
@click.option("--seq", "seq_spec", default="const:1", show_default=True, metavar="SPEC")
@click.option("--t", "t", type=float, default=1.0, show_default=True)
@click.option("--trials", type=int, default=200_000, show_default=True)
@click.option("--block", type=int, default=DEFAULT_BLOCK, show_default=True)
@click.option("--repeats", type=int, default=3, show_default=True)
def cmd_bench(seq_spec, t, trials, block, repeats) -> None:
    """Time the numba kernel against the numpy fallback (same results)."""

    def body() -> None:
        from .benchmark import run_benchmark

        run_benchmark(
            seq_spec=seq_spec,
            t=t,
            trials=trials,
            block=block,
            repeats=repeats,
            echo=click.echo,
        )

    _run(body)


if __name__ == "__main__":  # pragma: no cover
    main()
