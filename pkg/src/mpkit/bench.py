"""Timing harness: seeded random-walk workloads, median wall-clock per cell."""

from __future__ import annotations

import hashlib
import io
import csv
import platform
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .io import gen_random_walk
from .profile import MODES, compute

DEFAULT_SEED = 2018
DEFAULT_WINDOW = 100
SINGLE_WORKER_MODES = ("scrimp",)


@dataclass(frozen=True)
class BenchRow:
    algorithm: str
    n: int
    workers: int
    median: float
    trials: int
    seed: int
    checksum: str
    times: tuple = ()


@dataclass
class BenchReport:
    rows: list
    environment: str
    skipped: list = field(default_factory=list)  # (algorithm, workers, reason)

    def to_table(self) -> str:
        header = ("Algorithm", "n", "Time*", "Threads")
        body = [(r.algorithm, str(r.n), f"{r.median:.2f}", str(r.workers)) for r in self.rows]
        widths = [max(len(h), *(len(b[k]) for b in body)) if body else len(h) for k, h in enumerate(header)]
        rule = "  ".join("-" * w for w in widths)
        lines = [rule, "  ".join(h.rjust(w) for h, w in zip(header, widths)), rule]
        lines += ["  ".join(c.rjust(w) for c, w in zip(b, widths)) for b in body]
        lines.append(rule)
        trials = {r.trials for r in self.rows}
        if trials == {1}:
            lines.append("* Single trial, in seconds.")
        else:
            lines.append("* Median of " + "/".join(str(t) for t in sorted(trials)) + " trials, in seconds.")
        lines.append(f"Environment: {self.environment}")
        for algo, workers, reason in self.skipped:
            lines.append(f"Skipped {algo} with {workers} threads: {reason}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["algorithm", "n", "workers", "median_seconds", "trials", "seed", "checksum"])
        for r in self.rows:
            writer.writerow([r.algorithm, r.n, r.workers, repr(r.median), r.trials, r.seed, r.checksum])
        return buf.getvalue()

    def median(self, algorithm, n, workers=1) -> float:
        for r in self.rows:
            if (r.algorithm, r.n, r.workers) == (algorithm, n, workers):
                return r.median
        raise KeyError((algorithm, n, workers))


def environment_note() -> str:
    cpu = ""
    try:
        with open("/proc/cpuinfo") as fh:
            for line in fh:
                if line.startswith("model name"):
                    cpu = line.split(":", 1)[1].strip()
                    break
    except OSError:
        pass
    return f"{cpu or platform.processor() or platform.machine()}; Python {platform.python_version()}"


def workload(n, seed) -> np.ndarray:
    return gen_random_walk(n, seed)


def checksum(x) -> str:
    return hashlib.sha256(np.ascontiguousarray(x, dtype=np.float64).tobytes()).hexdigest()[:16]


def run_bench(sizes, modes, workers=(1,), trials=5, seed=DEFAULT_SEED, window=DEFAULT_WINDOW,
              warmup=True, timer=time.perf_counter, log=None) -> BenchReport:
    """Time every (mode, workers, size) cell on the same seeded random walk.

    Each cell runs one untimed warm-up, then ``trials`` timed runs, and keeps
    the median. Invalid combinations are skipped and reported.
    """
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    rows, skipped = [], []
    for mode in modes:
        for nw in workers:
            if mode not in MODES:
                skipped.append((mode, nw, "unknown algorithm"))
                continue
            if mode in SINGLE_WORKER_MODES and nw != 1:
                skipped.append((mode, nw, f"{mode} runs single-threaded"))
                continue
            for n in sizes:
                x = workload(n, seed)
                sums = set()
                if warmup:
                    compute(x, window_size=window, mode=mode, n_workers=nw, seed=seed)
                times = []
                for _ in range(trials):
                    x = workload(n, seed)
                    sums.add(checksum(x))
                    t0 = timer()
                    compute(x, window_size=window, mode=mode, n_workers=nw, seed=seed)
                    times.append(timer() - t0)
                if log:
                    log(f"{mode} n={n} threads={nw}: median {statistics.median(times):.3f}s")
                (digest,) = sums
                rows.append(BenchRow(mode, int(n), int(nw), statistics.median(times), trials, seed,
                                     digest, tuple(times)))
    rows.sort(key=lambda r: (r.algorithm, r.workers, r.n))
    return BenchReport(rows=rows, environment=environment_note(), skipped=skipped)


def scaling_slope(report: BenchReport, algorithm, workers=1) -> float:
    """Least-squares slope of log(time) against log(n)."""
    pts = [(r.n, r.median) for r in report.rows if r.algorithm == algorithm and r.workers == workers]
    if len(pts) < 2:
        raise ValueError(f"need at least two sizes for {algorithm}")
    n, t = np.array(pts, dtype=np.float64).T
    return float(np.polyfit(np.log(n), np.log(t), 1)[0])
