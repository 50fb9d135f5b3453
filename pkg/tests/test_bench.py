import csv
import io
import itertools

import numpy as np
import pytest

from mpkit.bench import BenchReport, BenchRow, checksum, run_bench, scaling_slope, workload
from mpkit.errors import ParameterError


def scripted_timer(durations):
    """Timer whose consecutive start/stop pairs differ by the given durations."""
    clock = itertools.count()
    seq = iter(durations)
    state = {"t": 0.0}

    def timer():
        if next(clock) % 2:
            state["t"] += next(seq)
        return state["t"]

    return timer


def test_median_of_scripted_trials():
    rep = run_bench([256], ["stomp"], trials=5, window=16, warmup=False,
                    timer=scripted_timer([5.0, 1.0, 3.0, 9.0, 2.0]))
    (row,) = rep.rows
    assert row.median == 3.0
    assert row.times == (5.0, 1.0, 3.0, 9.0, 2.0)
    assert (row.algorithm, row.n, row.workers, row.trials, row.seed) == ("stomp", 256, 1, 5, 2018)


def test_workload_checksum_stable():
    assert checksum(workload(1000, 7)) == checksum(workload(1000, 7))
    assert checksum(workload(1000, 7)) != checksum(workload(1000, 8))
    rep = run_bench([300], ["stamp", "stomp"], trials=3, window=16, warmup=False)
    assert len({r.checksum for r in rep.rows}) == 1


def test_scrimp_multi_worker_skipped_and_rows_sorted():
    rep = run_bench([256, 128], ["stomp", "scrimp", "bogus", "stamp"], workers=[2, 1], trials=1, window=16)
    keys = [(r.algorithm, r.workers, r.n) for r in rep.rows]
    assert keys == sorted(keys)
    assert ("scrimp", 2, 128) not in keys and ("scrimp", 1, 128) in keys
    assert len(keys) == 2 * 2 + 2 * 2 + 2
    reasons = {(a, w) for a, w, _ in rep.skipped}
    assert reasons == {("scrimp", 2), ("bogus", 2), ("bogus", 1)}


def test_trials_must_be_positive():
    with pytest.raises(ParameterError):
        run_bench([128], ["stomp"], trials=0)


def _report(trials):
    rows = [
        BenchRow("stamp", 40000, 1, 262.03, trials, 2018, "abc"),
        BenchRow("stomp", 40000, 1, 136.01, trials, 2018, "abc"),
        BenchRow("stomp", 40000, 8, 52.72, trials, 2018, "abc"),
    ]
    return BenchReport(rows=rows, environment="test cpu", skipped=[("scrimp", 8, "scrimp runs single-threaded")])


def test_table_layout():
    lines = _report(5).to_table().splitlines()
    assert lines[0] == lines[2] == lines[6]
    assert lines[1].split() == ["Algorithm", "n", "Time*", "Threads"]
    assert lines[3].split() == ["stamp", "40000", "262.03", "1"]
    assert lines[5].split() == ["stomp", "40000", "52.72", "8"]
    assert len({len(line) for line in lines[:7]}) == 1  # columns aligned
    assert lines[7] == "* Median of 5 trials, in seconds."
    assert lines[8] == "Environment: test cpu"
    assert lines[9] == "Skipped scrimp with 8 threads: scrimp runs single-threaded"


def test_single_trial_annotation():
    assert "* Single trial, in seconds." in _report(1).to_table()


def test_csv_round_trip():
    rep = _report(3)
    rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
    assert [r["algorithm"] for r in rows] == ["stamp", "stomp", "stomp"]
    assert float(rows[1]["median_seconds"]) == 136.01
    assert rep.median("stomp", 40000, 8) == 52.72
    with pytest.raises(KeyError):
        rep.median("scrimp", 40000)


def test_scaling_slope_recovers_exponent():
    rows = [BenchRow("stomp", n, 1, 1e-9 * n**2, 1, 0, "x") for n in (8192, 16384, 32768)]
    assert scaling_slope(BenchReport(rows, ""), "stomp") == pytest.approx(2.0)
    with pytest.raises(ValueError):
        scaling_slope(BenchReport(rows[:1], ""), "stomp")


def test_environment_note_nonempty():
    rep = run_bench([128], ["stomp"], trials=1, window=16)
    assert rep.environment and "Python" in rep.environment
    assert np.isfinite(rep.rows[0].median)
