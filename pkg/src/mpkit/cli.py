"""``mpkit`` command line: compute a profile, then run discovery steps on the saved archive.

Each step reads the archive, appends its result and writes it back, so a
shell pipeline of sub-commands accumulates everything in one file::

    mpkit compute walk.csv --window-size 80 --out walk.mp.json
    mpkit motif walk.mp.json --n-motifs 3 --radius 10
    mpkit segment walk.mp.json --num-segments 2
    mpkit plotdata walk.mp.json --kind segment --out plots/
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bench import DEFAULT_SEED as BENCH_SEED
from .bench import DEFAULT_WINDOW as BENCH_WINDOW
from .bench import run_bench
from .discovery import find_chains, find_discord, find_motif, fluss
from .errors import MatrixProfileError, ParameterError, StaleProfileError
from .io import ProfileArchive, gen_planted, gen_random_walk, read_profile, read_series, write_profile, write_series
from .plotting import KINDS, write_plot_data
from .profile import DEFAULT_SEED, MODES, MultiMatrixProfile, compute
from .summary import summarize

EXIT_OK = 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse prints usage on two lines; keep failures to a single line
        raise ParameterError(f"{self.prog}: {message}")


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _str_list(text):
    return [v.strip() for v in text.split(",") if v.strip()]


def _s_size(text):
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'inf', got {text!r}") from None


class _Console:
    def __init__(self, verbose):
        self.verbose = verbose
        self._bar = None

    def summary(self, text):
        if self.verbose >= 1:
            sys.stdout.write(text)

    def saved(self, path):
        if self.verbose == 0:
            print(path)
        else:
            print(f"Saved {path}", file=sys.stderr)

    def progress(self):
        if self.verbose < 2:
            return None
        from tqdm import tqdm

        def update(done, total):
            if self._bar is None:
                self._bar = tqdm(total=total, file=sys.stderr, leave=False, unit="block")
            self._bar.n = done
            self._bar.refresh()
            if done >= total:
                self._bar.close()
                self._bar = None

        return update


def _add_common(p):
    p.add_argument("--verbose", type=int, choices=(0, 1, 2), default=2,
                   help="0: print only the archive path; 1: summaries; 2: summaries and a progress bar")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mpkit", description="Matrix profile computation and discovery.")
    parser.add_argument("--version", action="version", version=f"mpkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="compute a profile and save it as an archive")
    p.add_argument("inputs", nargs="+", metavar="INPUT", help="one CSV/TSV for a self-join, two for an AB-join")
    p.add_argument("--window-size", type=int, required=True)
    p.add_argument("--exclusion-zone", default="1/2", help="fraction of the window, e.g. 1/2 or 0.25")
    p.add_argument("--mode", choices=MODES, default="stomp")
    p.add_argument("--s-size", type=_s_size, default=math.inf,
                   help="stamp/scrimp: stop after this many profiles (stamp) or diagonals (scrimp)")
    p.add_argument("--must-dim", type=_int_list, action="extend", default=None, help="mstomp: 0-based dims to force")
    p.add_argument("--exc-dim", type=_int_list, action="extend", default=None, help="mstomp: 0-based dims to skip")
    p.add_argument("--n-workers", type=int, default=1)
    p.add_argument("--keep-data", action=argparse.BooleanOptionalAction, default=True,
                   help="store the input data in the archive (needed by motif neighbours and chain plots)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--columns", type=_str_list, default=None, help="columns to read, by position or header name")
    p.add_argument("--out", default=None, help="archive path (default: <input stem>.mp.json)")
    _add_common(p)

    p = sub.add_parser("motif", help="find motif pairs and their neighbours")
    p.add_argument("archive")
    p.add_argument("--n-motifs", type=int, default=3)
    p.add_argument("--radius", type=float, default=3.0)
    p.add_argument("--exclusion-zone", default=None,
                   help="neighbour separation: samples if >= 1, else a fraction of the window")
    p.add_argument("--n-neighbors", type=int, default=10)
    p.add_argument("--k", type=int, default=None, help="dimensions of a multidimensional profile to use")
    p.add_argument("--out", default=None, help="write the amended archive here instead of in place")
    _add_common(p)

    p = sub.add_parser("discord", help="find the most anomalous windows")
    p.add_argument("archive")
    p.add_argument("--n-discords", type=int, default=1)
    p.add_argument("--exclusion-zone", default=None)
    p.add_argument("--k", type=int, default=1, help="dimensions of a multidimensional profile to use")
    p.add_argument("--out", default=None)
    _add_common(p)

    p = sub.add_parser("chain", help="find time series chains")
    p.add_argument("archive")
    p.add_argument("--out", default=None)
    _add_common(p)

    p = sub.add_parser("segment", help="semantic segmentation with the corrected arc curve")
    p.add_argument("archive")
    p.add_argument("--num-segments", type=int, default=2)
    p.add_argument("--exclusion-factor", type=float, default=5)
    p.add_argument("--k", type=int, default=1, help="dimensions of a multidimensional profile to use")
    p.add_argument("--out", default=None)
    _add_common(p)

    p = sub.add_parser("plotdata", help="write plot data columns and an SVG figure")
    p.add_argument("archive")
    p.add_argument("--kind", choices=KINDS, default="profile")
    p.add_argument("--out", default=".", help="output directory")
    _add_common(p)

    p = sub.add_parser("bench", help="time algorithms on seeded random walks")
    p.add_argument("--sizes", type=_int_list, default=[8192, 16384])
    p.add_argument("--modes", type=_str_list, default=["stamp", "stomp", "scrimp"])
    p.add_argument("--workers", type=_int_list, default=[1])
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=BENCH_SEED)
    p.add_argument("--window-size", type=int, default=BENCH_WINDOW)
    p.add_argument("--csv", default=None, help="also write the report as CSV")
    _add_common(p)

    p = sub.add_parser("generate", help="write a seeded synthetic series as CSV")
    p.add_argument("kind", choices=("walk", "motif", "regime_change", "chain", "anomaly"))
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_common(p)
    return parser


def _target(args):
    return Path(args.out) if args.out else Path(args.archive)


def _finish(console, archive, path):
    write_profile(archive, path)
    console.summary(summarize(archive.profile, archive.shapes, archive.results.values()))
    console.saved(path)


def cmd_compute(args, console):
    datasets = [read_series(p, columns=args.columns) for p in args.inputs]
    if len(datasets) > 2:
        raise ParameterError(f"expected one or two inputs, got {len(datasets)}")
    multi = args.mode in ("mstomp", "simple")
    series = [ds.series if multi else ds.values for ds in datasets]
    prof = compute(*series, window_size=args.window_size, exclusion_zone=args.exclusion_zone,
                   mode=args.mode, s_size=args.s_size, must_dim=args.must_dim, exc_dim=args.exc_dim,
                   n_workers=args.n_workers, seed=args.seed, progress=console.progress())
    archive = ProfileArchive(
        profile=prof,
        data=datasets[0].series if args.keep_data else None,
        data_b=datasets[1].series if args.keep_data and len(datasets) == 2 else None,
        shapes=[ds.series.shape for ds in datasets],
    )
    out = Path(args.out) if args.out else Path(Path(args.inputs[0]).stem + ".mp.json")
    _finish(console, archive, out)


def _flat_profile(prof, k):
    if isinstance(prof, MultiMatrixProfile):
        if not 1 <= k <= prof.n_dims:
            raise ParameterError(f"k must be between 1 and {prof.n_dims}, got {k}")
        return prof.row(k - 1)
    return prof


def cmd_motif(args, console):
    archive = read_profile(args.archive)
    archive.results["motif"] = find_motif(
        archive.profile, archive.series, n_motifs=args.n_motifs, radius=args.radius,
        neighbor_exclusion_zone=args.exclusion_zone, n_neighbors=args.n_neighbors, k=args.k,
    )
    _finish(console, archive, _target(args))


def cmd_discord(args, console):
    archive = read_profile(args.archive)
    prof = _flat_profile(archive.profile, args.k)
    archive.results["discord"] = find_discord(prof, args.n_discords, args.exclusion_zone)
    _finish(console, archive, _target(args))


def cmd_chain(args, console):
    archive = read_profile(args.archive)
    if isinstance(archive.profile, MultiMatrixProfile):
        raise StaleProfileError("chains need left/right indexes, which multidimensional profiles do not carry")
    archive.results["chain"] = find_chains(archive.profile)
    _finish(console, archive, _target(args))


def cmd_segment(args, console):
    archive = read_profile(args.archive)
    prof = _flat_profile(archive.profile, args.k)
    archive.results["fluss"] = fluss(prof, args.num_segments, args.exclusion_factor)
    _finish(console, archive, _target(args))


def cmd_plotdata(args, console):
    archive = read_profile(args.archive)
    for path in write_plot_data(archive, args.kind, args.out):
        if console.verbose == 0:
            print(path)
        else:
            print(f"Wrote {path}", file=sys.stderr)


def cmd_bench(args, console):
    log = (lambda msg: print(msg, file=sys.stderr)) if console.verbose >= 2 else None
    report = run_bench(args.sizes, args.modes, args.workers, args.trials, args.seed, args.window_size, log=log)
    sys.stdout.write(report.to_table())
    if args.csv:
        Path(args.csv).write_text(report.to_csv())


def cmd_generate(args, console):
    if args.kind == "walk":
        write_series(gen_random_walk(args.n, args.seed), args.out)
        truth = {}
    else:
        ds = gen_planted(args.kind, args.n, args.seed)
        write_series(ds.series, args.out)
        truth = ds.ground_truth
    if console.verbose >= 1:
        print(json.dumps(truth, default=lambda v: v.tolist() if isinstance(v, np.ndarray) else int(v)))
    console.saved(args.out)


COMMANDS = {
    "compute": cmd_compute,
    "motif": cmd_motif,
    "discord": cmd_discord,
    "chain": cmd_chain,
    "segment": cmd_segment,
    "plotdata": cmd_plotdata,
    "bench": cmd_bench,
    "generate": cmd_generate,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args, _Console(args.verbose))
    except MatrixProfileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
