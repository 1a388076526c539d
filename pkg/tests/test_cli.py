"""Command line interface tests (in-process through click's runner)."""

import json
import math
import os

import pytest
from click.testing import CliRunner

from stopsum.backend import HAS_NUMBA
from stopsum.cli import main

needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba not importable")


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, *args, **kwargs):
    return runner.invoke(main, list(args), catch_exceptions=False, **kwargs)


# ---------------------------------------------------------------- eval


def test_eval_csv_shape_and_value(runner):
    result = invoke(runner, "eval", "--seq", "const:1", "--t", "1")
    assert result.exit_code == 0
    header, row, tail = result.output.split("\n")
    assert tail == ""
    assert header == "t,value,branch,error_bound,subsets_evaluated,subsets_pruned"
    cells = row.split(",")
    assert float(cells[0]) == 1.0
    assert float(cells[1]) == pytest.approx(math.e, rel=1e-14)
    assert cells[2] == "series"
    assert float(cells[3]) < 1e-12
    assert cells[4] == "0" and cells[5] == "0"


def test_eval_float_cells_round_trip(runner):
    result = invoke(runner, "eval", "--seq", "power:1", "--t", "2.5")
    row = result.output.splitlines()[1].split(",")
    assert row[2] == "theorem(2)"
    from stopsum import expected_crossings, parse_sequence

    report = expected_crossings(parse_sequence("power:1"), 2.5)
    assert float(row[1]) == report.value  # 17 significant digits round-trip


def test_eval_json(runner):
    result = invoke(runner, "eval", "--seq", "list:1,1.2,5", "--t", "3", "--format", "json")
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["seq"] == "list:1.0,1.2,5.0"  # canonical float spelling
    assert doc["branch"] == "theorem(2)"
    assert doc["value"] == pytest.approx(3.4682408162647632, rel=1e-13)
    assert set(doc) == {
        "seq", "t", "value", "branch", "error_bound",
        "subsets_evaluated", "subsets_pruned",
    }


def test_eval_uncovered_exits_3(runner):
    result = runner.invoke(main, ["eval", "--seq", "qgeom:0.4", "--t", "1.5"])
    assert result.exit_code == 3
    assert "fallback" in result.stderr


def test_eval_fallback_rescues_uncovered(runner):
    result = invoke(runner, "eval", "--seq", "qgeom:0.4", "--t", "1.5", "--fallback")
    assert result.exit_code == 0
    assert result.output.splitlines()[1].split(",")[2] == "oracle_fallback"


def test_eval_bad_inputs_exit_2(runner):
    for args in (
        ["eval", "--seq", "geom:0.5", "--t", "1"],
        ["eval", "--seq", "list:2,1", "--t", "1"],
        ["eval", "--seq", "const:1", "--t", "-1"],
        ["eval", "--seq", "const:1", "--t", "1", "--rel-tol", "2"],
    ):
        result = runner.invoke(main, args)
        assert result.exit_code == 2, args


def test_eval_truncation_budget_exit_1(runner):
    result = runner.invoke(
        main, ["eval", "--seq", "const:1", "--t", "1", "--max-terms", "3"]
    )
    assert result.exit_code == 1
    assert "error:" in result.stderr


# ---------------------------------------------------------------- simulate


def test_simulate_csv_sections(runner):
    result = invoke(
        runner, "simulate", "--seq", "const:1", "--t", "1",
        "--trials", "2000", "--seed", "7",
    )
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "trials,mean,variance,stderr,min_n,max_n"
    assert lines[2] == ""
    assert lines[3] == "trials,running_mean,running_stderr"
    assert len(lines) == 4 + 4  # 2000 trials in blocks of 500
    stats = lines[1].split(",")
    assert stats[0] == "2000"
    assert int(stats[4]) >= 1
    assert abs(float(stats[1]) - math.e) < 6.0 * float(stats[3])


def test_simulate_byte_identical_runs_and_workers(runner):
    args = ["simulate", "--seq", "power:1", "--t", "2.5", "--trials", "4000"]
    base = invoke(runner, *args).output
    again = invoke(runner, *args).output
    assert again == base
    for workers in ("1", "4", "8"):
        out = invoke(runner, *args, "--workers", workers).output
        assert out == base


@needs_numba
def test_simulate_byte_identical_across_backends(runner):
    args = ["simulate", "--seq", "qgeom:0.4", "--t", "0.5", "--trials", "3000"]
    nb = invoke(runner, *args, "--backend", "numba").output
    np_ = invoke(runner, *args, "--backend", "numpy").output
    assert nb == np_


def test_simulate_json_matches_csv_stats(runner):
    args = ["simulate", "--seq", "const:1", "--t", "1", "--trials", "2000"]
    csv_mean = float(invoke(runner, *args).output.splitlines()[1].split(",")[1])
    doc = json.loads(invoke(runner, *args, "--format", "json").output)
    assert doc["mean"] == csv_mean
    assert doc["trials"] == 2000


def test_simulate_diverging_exit_1(runner):
    result = runner.invoke(
        main,
        ["simulate", "--seq", "const:1", "--t", "30", "--trials", "10",
         "--step-cap", "16"],
    )
    assert result.exit_code == 1
    assert "diverg" in result.stderr


def test_simulate_env_var_overrides_default(runner):
    result = invoke(
        runner, "simulate", "--seq", "const:1", "--t", "1",
        env={"STOPSUM_SIMULATE_TRIALS": "1500"},
    )
    assert result.output.splitlines()[1].split(",")[0] == "1500"


# ---------------------------------------------------------------- oracle and volume


def test_oracle_csv(runner):
    result = invoke(runner, "oracle", "--seq", "const:1", "--t", "1")
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "t,value,eps"
    assert float(lines[1].split(",")[1]) == pytest.approx(math.e, rel=1e-12)


def test_oracle_dimension_cap_exit_1(runner):
    result = runner.invoke(main, ["oracle", "--seq", "const:1", "--t", "30"])
    assert result.exit_code == 1


def test_volume_csv(runner):
    result = invoke(runner, "volume", "--seq", "list:1,2", "--m", "2", "--t", "1.5")
    lines = result.output.splitlines()
    assert lines[0] == "m,t,value,cancellation"
    cells = lines[1].split(",")
    assert cells[0] == "2"
    assert float(cells[2]) == 0.5
    assert float(cells[3]) >= 1.0


def test_volume_bad_dimension_exit_codes(runner):
    assert runner.invoke(main, ["volume", "--seq", "const:1", "--m", "-1", "--t", "1"]).exit_code == 2
    assert runner.invoke(main, ["volume", "--seq", "const:1", "--m", "31", "--t", "1"]).exit_code == 1


# ---------------------------------------------------------------- compare and curve


def test_compare_table(runner):
    result = invoke(
        runner, "compare", "--seq", "power:1", "--t-grid", "0.5,1.5",
        "--trials", "2000",
    )
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "t,analytic,branch,oracle,mc_mean,mc_stderr,abs_diff,z"
    assert len(lines) == 3
    first, second = lines[1].split(","), lines[2].split(",")
    assert first[2] == "series" and second[2] == "theorem(1)"
    for row in (first, second):
        assert float(row[6]) < 1e-10  # analytic vs oracle
        assert abs(float(row[7])) < 6.0  # MC z-score


def test_compare_rejects_empty_grid(runner):
    result = runner.invoke(
        main, ["compare", "--seq", "power:1", "--t-grid", " , ", "--trials", "100"]
    )
    assert result.exit_code == 2


def test_curve_sections_and_trace_target(runner):
    result = invoke(
        runner, "curve", "--seq", "power:1", "--t-min", "0", "--t-max", "2",
        "--steps", "5", "--trials", "2000", "--trace-t", "1.0",
    )
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "t,analytic,branch"
    blank = lines.index("")
    assert blank == 6  # header + 5 grid rows
    assert lines[blank + 1] == "trials,running_mean,running_stderr"
    assert len(lines) == blank + 2 + 4  # 2000 trials in blocks of 500
    grid_t = [float(r.split(",")[0]) for r in lines[1:blank]]
    assert grid_t == [0.0, 0.5, 1.0, 1.5, 2.0]
    values = [float(r.split(",")[1]) for r in lines[1:blank]]
    assert values == sorted(values)
    assert values[0] == 1.0


def test_curve_spans_coverage_edge_with_default_fallback(runner):
    # qgeom weights top out below 1.2, so the tail of this grid needs the
    # oracle fallback, which curve enables by default
    result = invoke(
        runner, "curve", "--seq", "qgeom:0.4", "--t-min", "0.9", "--t-max", "1.2",
        "--steps", "4", "--trials", "1000",
    )
    assert result.exit_code == 0
    branches = [r.split(",")[2] for r in result.output.splitlines()[1:5]]
    assert branches[0].startswith("theorem")
    assert branches[-1] == "oracle_fallback"


def test_curve_validation_exit_2(runner):
    bad_steps = runner.invoke(
        main, ["curve", "--seq", "power:1", "--t-min", "0", "--t-max", "1", "--steps", "0"]
    )
    assert bad_steps.exit_code == 2
    swapped = runner.invoke(
        main, ["curve", "--seq", "power:1", "--t-min", "2", "--t-max", "1"]
    )
    assert swapped.exit_code == 2


# ---------------------------------------------------------------- plumbing


def test_out_writes_lf_only_file(runner, tmp_path):
    target = tmp_path / "table.csv"
    result = invoke(
        runner, "eval", "--seq", "const:1", "--t", "1", "--out", str(target)
    )
    assert result.exit_code == 0
    assert result.output == ""
    raw = target.read_bytes()
    assert b"\r" not in raw
    assert raw.decode().splitlines()[0].startswith("t,value")


def test_version_and_help(runner):
    version = invoke(runner, "--version")
    assert version.exit_code == 0 and "stopsum" in version.output
    for cmd in ("eval", "simulate", "oracle", "volume", "compare", "curve", "bench"):
        result = invoke(runner, cmd, "-h")
        assert result.exit_code == 0
        assert "--help" in result.output or "Usage" in result.output


@needs_numba
def test_bench_smoke(runner):
    result = invoke(runner, "bench", "--trials", "2000", "--repeats", "1")
    assert result.exit_code == 0
    assert "bit-identical" in result.output
