"""Figures and column-text plot data for archived profiles.

Figures are written as SVG. Each figure has a companion tab-separated file
holding exactly the numbers drawn, which is the stable interface for other
plotting tools.
"""

from __future__ import annotations

import functools
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.collections import LineCollection  # noqa: E402

from .errors import StaleProfileError  # noqa: E402
from .profile import MultiMatrixProfile  # noqa: E402

KINDS = ("profile", "motif", "segment", "chain")
MAX_ARCS = 2000

_RC = {
    "figure.figsize": (10, 7),
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.titlesize": 10,
    "lines.linewidth": 0.8,
    "svg.hashsalt": "mpkit",
    "svg.fonttype": "none",
}


def _styled(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        with plt.rc_context(_RC):
            return fn(*args, **kwargs)
    return wrapper


def _figure(nrows):
    fig, axes = plt.subplots(nrows, 1, squeeze=False, constrained_layout=True)
    return fig, list(axes[:, 0])


@_styled
def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _write_columns(path, header, columns):
    cols = [np.asarray(c) for c in columns]
    with open(path, "w") as fh:
        fh.write("\t".join(header) + "\n")
        for row in zip(*cols):
            fh.write("\t".join(_cell(v) for v in row) + "\n")


def _cell(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (np.integer, int)):
        return str(int(v))
    v = float(v)
    if np.isfinite(v):
        return repr(v)
    return "inf" if v > 0 else ("-inf" if v < 0 else "nan")


def _arc_segments(pairs, height_scale=1.0, points=24):
    """Half-ellipse polylines joining each ``(a, b)`` pair above the axis."""
    segs = []
    t = np.linspace(0, np.pi, points)
    for a, b in pairs:
        c, r = (a + b) / 2.0, abs(b - a) / 2.0
        segs.append(np.column_stack([c - r * np.cos(t), height_scale * r * np.sin(t)]))
    return segs


def _draw_arcs(ax, pairs, color="tab:blue", alpha=0.3):
    pairs = list(pairs)
    if len(pairs) > MAX_ARCS:
        keep = np.linspace(0, len(pairs) - 1, MAX_ARCS).astype(int)
        pairs = [pairs[k] for k in keep]
    ax.add_collection(LineCollection(_arc_segments(pairs), colors=color, alpha=alpha, linewidths=0.5))
    ax.autoscale_view()
    ax.set_yticks([])


def _univariate_profile(archive):
    prof = archive.profile
    return prof.row(0) if isinstance(prof, MultiMatrixProfile) else prof


def _first_dim(data):
    if data is None:
        return None
    return data[:, 0] if data.ndim == 2 else data


@_styled
def profile_figure(values, motifs=None, data=None, window=None):
    """Profile curve with a coloured bar per motif pair; motif shapes underneath when data is given."""
    show_shapes = motifs is not None and data is not None and len(motifs.pairs) > 0
    fig, axes = _figure(2 if show_shapes else 1)
    ax = axes[0]
    ax.plot(np.arange(len(values)), values, color="black")
    ax.set_title("Matrix profile")
    ax.set_xlabel("index")
    colors = plt.get_cmap("tab10").colors
    if motifs is not None:
        for k, (a, b, _) in enumerate(motifs.pairs):
            for pos in (a, b):
                ax.axvline(pos, color=colors[k % 10], linewidth=1.5)
    if show_shapes:
        ax2 = axes[1]
        x = _first_dim(data)
        w = window or motifs.window
        for k, ((a, b, _), ns) in enumerate(zip(motifs.pairs, motifs.neighbors)):
            offset = -3.0 * k
            for pos in ns:
                seg = x[pos : pos + w]
                ax2.plot((seg - seg.mean()) / (seg.std() or 1) + offset, color="0.7")
            for pos in (a, b):
                seg = x[pos : pos + w]
                ax2.plot((seg - seg.mean()) / (seg.std() or 1) + offset, color=colors[k % 10])
        ax2.set_title("Motifs (neighbours in grey)")
        ax2.set_yticks([])
    return fig


@_styled
def segment_figure(data, index, arc_counts, cac, segments):
    """Arc diagram, data, and corrected arc curve with the chosen boundaries."""
    fig, axes = _figure(3 if data is not None else 2)
    pairs = [(j, int(i)) for j, i in enumerate(index) if i >= 0]
    _draw_arcs(axes[0], pairs)
    axes[0].set_title("Arcs")
    row = 1
    if data is not None:
        axes[1].plot(_first_dim(data), color="black")
        axes[1].set_title("Data")
        row = 2
    ax = axes[row]
    ax.plot(cac, color="tab:blue")
    ax.set_ylim(0, 1.05)
    ax.set_title("Corrected arc curve")
    for s in segments:
        for a in axes[1:]:
            a.axvline(s, color="tab:red", linestyle="--")
    return fig


@_styled
def chain_figure(data, chains, best, window):
    """Arc plot of chain links, data with chain positions, and the best chain's patterns y-shifted."""
    fig, axes = _figure(3)
    links = [(c[k], c[k + 1]) for c in chains for k in range(len(c) - 1)]
    _draw_arcs(axes[0], links, color="tab:orange", alpha=0.6)
    axes[0].set_title("Chain links")
    x = _first_dim(data)
    axes[1].plot(x, color="black")
    colors = plt.get_cmap("viridis")(np.linspace(0, 1, max(1, len(best))))
    for k, pos in enumerate(best):
        axes[1].axvline(pos, color=colors[k])
    axes[1].set_title("Data")
    for k, trace in enumerate(chain_traces(x, best, window)):
        axes[2].plot(trace, color=colors[k])
    axes[2].set_title("Best chain (shifted vertically)")
    axes[2].set_yticks([])
    return fig


def chain_traces(x, chain, window, spacing=1.0):
    """Each chain member z-normalised and raised by ``spacing`` times its rank."""
    traces = []
    for k, pos in enumerate(chain):
        seg = np.asarray(x[pos : pos + window], dtype=np.float64)
        traces.append((seg - seg.mean()) / (seg.std() or 1.0) + spacing * 3.0 * k)
    return traces


def write_plot_data(archive, kind, out_dir):
    """Write ``<kind>.tsv`` (plus any companions) and ``<kind>.svg``; return the paths written."""
    if kind not in KINDS:
        raise ValueError(f"unknown plot kind {kind!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    prof = _univariate_profile(archive)
    data = archive.series
    written = []

    if kind in ("profile", "motif"):
        motifs = archive.results.get("motif")
        if kind == "motif" and motifs is None:
            raise StaleProfileError("archive has no motif result; run the motif step first")
        _write_columns(out / f"{kind}.tsv", ["index", "value", "nn_index"],
                       [np.arange(prof.size), prof.values, prof.index])
        written.append(out / f"{kind}.tsv")
        if motifs is not None and kind == "motif":
            rows = []
            for k, ((a, b, dist), ns) in enumerate(zip(motifs.pairs, motifs.neighbors)):
                rows += [(k, "anchor", a, dist), (k, "pair", b, dist)]
                rows += [(k, "neighbor", v, float("nan")) for v in ns]
            _write_columns(out / "motif_members.tsv", ["motif", "role", "index", "distance"],
                           list(zip(*rows)) if rows else [[], [], [], []])
            written.append(out / "motif_members.tsv")
        fig = profile_figure(prof.values, motifs if kind == "motif" else None, data, prof.window)

    elif kind == "segment":
        result = archive.results.get("fluss")
        if result is None:
            raise StaleProfileError("archive has no segmentation result; run the segment step first")
        _write_columns(out / "segment.tsv", ["index", "arc_count", "cac"],
                       [np.arange(len(result.cac)), result.arc_counts, result.cac])
        _write_columns(out / "segment_indexes.tsv", ["rank", "index"],
                       [np.arange(len(result.segments)), np.asarray(result.segments, dtype=np.int64)])
        written += [out / "segment.tsv", out / "segment_indexes.tsv"]
        fig = segment_figure(data, prof.index, result.arc_counts, result.cac, result.segments)

    else:
        result = archive.results.get("chain")
        if result is None:
            raise StaleProfileError("archive has no chain result; run the chain step first")
        if data is None:
            raise StaleProfileError("chain plots need the input data; compute with --keep-data")
        ids, pos, members = [], [], []
        for c_id, chain in enumerate(result.chains):
            for p, idx in enumerate(chain):
                ids.append(c_id)
                pos.append(p)
                members.append(idx)
        _write_columns(out / "chain.tsv", ["chain", "position", "index"], [ids, pos, members])
        traces = chain_traces(_first_dim(data), result.best_chain, prof.window)
        _write_columns(out / "chain_patterns.tsv",
                       ["sample"] + [f"member_{i}" for i in result.best_chain],
                       [np.arange(prof.window), *traces])
        written += [out / "chain.tsv", out / "chain_patterns.tsv"]
        fig = chain_figure(data, result.chains, result.best_chain, prof.window)

    svg = out / f"{kind}.svg"
    _save(fig, svg)
    written.append(svg)
    return written
