"""Series ingestion, profile archives, and seeded synthetic datasets."""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .discovery import ChainSet, DiscordSet, FlussResult, MotifSet
from .errors import IngestionError, ParameterError
from .profile import MatrixProfile, MultiMatrixProfile

SCHEMA_VERSION = 1
RNG_NAME = "PCG64"


@dataclass
class Dataset:
    name: str
    series: np.ndarray  # (n, d)
    source: str = ""
    ground_truth: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.series.shape[0]

    @property
    def d(self) -> int:
        return self.series.shape[1]

    @property
    def values(self) -> np.ndarray:
        """The series as 1-D when univariate, ``(n, d)`` otherwise."""
        return self.series[:, 0] if self.d == 1 else self.series


# -- delimited text ---------------------------------------------------------

def _delimiter(path, fmt):
    if fmt is None:
        fmt = "tsv" if str(path).lower().endswith((".tsv", ".tab")) else "csv"
    if fmt not in ("csv", "tsv"):
        raise ParameterError(f"unknown format {fmt!r}; use csv or tsv")
    return "," if fmt == "csv" else "\t"


def _is_number(text):
    try:
        float(text)
        return True
    except ValueError:
        return False


def read_series(path, fmt=None, columns=None, header=None) -> Dataset:
    """Read one column (univariate) or several (one dimension each) from CSV/TSV.

    ``header`` may be True, False or None (detect: a first row with any
    non-numeric cell is a header). ``columns`` selects by position or, with
    a header, by name.
    """
    path = Path(path)
    delim = _delimiter(path, fmt)
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh, delimiter=delim) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except csv.Error as exc:
        raise IngestionError(f"{path}: malformed delimited text: {exc}") from exc
    if not rows:
        raise IngestionError(f"{path}: no data rows")

    if header is None:
        header = not all(_is_number(c) for c in rows[0])
    names = [c.strip() for c in rows[0]] if header else None
    body = rows[1:] if header else rows
    first_line = 2 if header else 1
    if not body:
        raise IngestionError(f"{path}: no data rows")

    width = len(body[0])
    for k, row in enumerate(body):
        if len(row) != width:
            raise IngestionError(
                f"{path}: line {first_line + k} has {len(row)} fields, expected {width}"
            )

    if columns is None:
        cols = list(range(width))
    else:
        cols = []
        for c in columns:
            if isinstance(c, str) and not c.lstrip("-").isdigit():
                if names is None or c not in names:
                    raise IngestionError(f"{path}: no column named {c!r}")
                cols.append(names.index(c))
            else:
                c = int(c)
                if not 0 <= c < width:
                    raise IngestionError(f"{path}: column {c} out of range (file has {width})")
                cols.append(c)

    data = np.empty((len(body), len(cols)))
    for k, row in enumerate(body):
        for out_col, c in enumerate(cols):
            cell = row[c].strip()
            label = names[c] if names else str(c)
            try:
                value = float(cell)
            except ValueError:
                raise IngestionError(
                    f"{path}: line {first_line + k}, column {label}: {cell!r} is not a number"
                ) from None
            if not math.isfinite(value):
                raise IngestionError(
                    f"{path}: line {first_line + k}, column {label}: non-finite value {cell!r}"
                )
            data[k, out_col] = value

    return Dataset(name=path.stem, series=data, source=str(path))


def write_series(series, path, fmt=None, header=None):
    """Write a series as delimited text at full round-trip precision."""
    delim = _delimiter(path, fmt)
    x = np.asarray(series.series if isinstance(series, Dataset) else series, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter=delim, lineterminator="\n")
        if header:
            writer.writerow(header)
        for row in x:
            writer.writerow([repr(float(v)) for v in row])


# -- profile archives -------------------------------------------------------

@dataclass
class ProfileArchive:
    """A profile plus, optionally, its input data and the discovery results run on it."""

    profile: MatrixProfile | MultiMatrixProfile
    data: np.ndarray | None = None  # (n, d)
    data_b: np.ndarray | None = None
    results: dict = field(default_factory=dict)
    shapes: list = field(default_factory=list)  # (observations, dimensions) per input
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if not self.shapes:
            n = self.profile.size + self.profile.window - 1
            self.shapes = [(n, self.profile.n_dims)]
            if self.data_b is not None:
                self.shapes.append(tuple(self.data_b.shape))
        self.shapes = [(int(n), int(d)) for n, d in self.shapes]

    @property
    def series(self):
        """Input data as a 1-D array when univariate."""
        if self.data is None:
            return None
        return self.data[:, 0] if self.data.shape[1] == 1 else self.data


def _enc_floats(arr):
    out = []
    for v in np.asarray(arr, dtype=np.float64).ravel().tolist():
        if math.isfinite(v):
            out.append(v)
        elif math.isnan(v):
            out.append("nan")
        else:
            out.append("inf" if v > 0 else "-inf")
    return out


def _dec_floats(items):
    return np.array([float(v) for v in items], dtype=np.float64)


def _enc_ints(arr):
    return [int(v) for v in np.asarray(arr).ravel().tolist()]


def _enc_float(v):
    return _enc_floats([v])[0]


def _profile_to_dict(p):
    if isinstance(p, MultiMatrixProfile):
        return {
            "kind": "multidimensional",
            "mode": p.mode,
            "join_kind": p.join_kind,
            "window": p.window,
            "exclusion_zone": p.exclusion_zone,
            "coverage": p.coverage,
            "seed": p.seed,
            "n_dims": p.n_dims,
            "must_dims": list(p.must_dims),
            "exc_dims": list(p.exc_dims),
            "values": [_enc_floats(row) for row in p.values],
            "index": [_enc_ints(row) for row in p.index],
            "dim_order": [[_enc_ints(r) for r in block] for block in p.dim_order],
        }
    return {
        "kind": "univariate",
        "mode": p.mode,
        "join_kind": p.join_kind,
        "window": p.window,
        "exclusion_zone": p.exclusion_zone,
        "coverage": p.coverage,
        "seed": p.seed,
        "n_dims": p.n_dims,
        "values": _enc_floats(p.values),
        "index": _enc_ints(p.index),
        "left_index": None if p.left_index is None else _enc_ints(p.left_index),
        "right_index": None if p.right_index is None else _enc_ints(p.right_index),
    }


def _profile_from_dict(d):
    common = dict(
        window=int(d["window"]),
        exclusion_zone=int(d["exclusion_zone"]),
        mode=d["mode"],
        join_kind=d["join_kind"],
        coverage=float(d["coverage"]),
        seed=d.get("seed"),
    )
    if d["kind"] == "multidimensional":
        return MultiMatrixProfile(
            values=np.array([_dec_floats(r) for r in d["values"]]),
            index=np.array(d["index"], dtype=np.int64),
            dim_order=np.array(d["dim_order"], dtype=np.int64),
            must_dims=tuple(d.get("must_dims", ())),
            exc_dims=tuple(d.get("exc_dims", ())),
            **common,
        )
    if d["kind"] != "univariate":
        raise IngestionError(f"unknown profile kind {d['kind']!r}")
    left, right = d.get("left_index"), d.get("right_index")
    return MatrixProfile(
        values=_dec_floats(d["values"]),
        index=np.array(d["index"], dtype=np.int64),
        left_index=None if left is None else np.array(left, dtype=np.int64),
        right_index=None if right is None else np.array(right, dtype=np.int64),
        n_dims=int(d.get("n_dims", 1)),
        **common,
    )


def _result_to_dict(r):
    if isinstance(r, MotifSet):
        return {
            "type": "motif",
            "pairs": [[a, b, _enc_float(dist)] for a, b, dist in r.pairs],
            "neighbors": r.neighbors,
            "window": r.window,
            "radius": r.radius,
            "exclusion_zone": r.exclusion_zone,
            "dims": r.dims,
        }
    if isinstance(r, DiscordSet):
        return {
            "type": "discord",
            "discords": [[i, _enc_float(v)] for i, v in r.discords],
            "exclusion_zone": r.exclusion_zone,
            "requested": r.requested,
            "truncated": r.truncated,
        }
    if isinstance(r, ChainSet):
        return {"type": "chain", "chains": r.chains, "best_chain": r.best_chain}
    if isinstance(r, FlussResult):
        return {
            "type": "fluss",
            "arc_counts": _enc_ints(r.arc_counts),
            "cac": _enc_floats(r.cac),
            "segments": list(r.segments),
            "min_value": r.min_value,
            "min_index": r.min_index,
            "num_segments": r.num_segments,
            "exclusion_factor": r.exclusion_factor,
            "truncated": r.truncated,
        }
    raise TypeError(f"cannot archive result of type {type(r).__name__}")


def _result_from_dict(d):
    kind = d.get("type")
    if kind == "motif":
        return MotifSet(
            pairs=[(int(a), int(b), float(dist)) for a, b, dist in d["pairs"]],
            neighbors=[[int(v) for v in ns] for ns in d["neighbors"]],
            window=int(d["window"]),
            radius=float(d["radius"]),
            exclusion_zone=int(d["exclusion_zone"]),
            dims=d.get("dims"),
        )
    if kind == "discord":
        return DiscordSet(
            discords=[(int(i), float(v)) for i, v in d["discords"]],
            exclusion_zone=int(d["exclusion_zone"]),
            requested=int(d["requested"]),
            truncated=bool(d["truncated"]),
        )
    if kind == "chain":
        return ChainSet(chains=[list(map(int, c)) for c in d["chains"]], best_chain=list(map(int, d["best_chain"])))
    if kind == "fluss":
        return FlussResult(
            arc_counts=np.array(d["arc_counts"], dtype=np.int64),
            cac=_dec_floats(d["cac"]),
            segments=[int(s) for s in d["segments"]],
            min_value=float(d["min_value"]),
            min_index=int(d["min_index"]),
            num_segments=int(d["num_segments"]),
            exclusion_factor=float(d["exclusion_factor"]),
            truncated=bool(d["truncated"]),
        )
    raise IngestionError(f"unknown result type {kind!r}")


def _data_to_list(x):
    if x is None:
        return None
    return [_enc_floats(col) for col in np.asarray(x).T]


def _data_from_list(cols):
    if cols is None:
        return None
    return np.column_stack([_dec_floats(c) for c in cols])


def archive_to_json(archive: ProfileArchive) -> str:
    payload = {
        "schema_version": archive.schema_version,
        "rng": RNG_NAME,
        "shapes": [list(s) for s in archive.shapes],
        "profile": _profile_to_dict(archive.profile),
        "data": _data_to_list(archive.data),
        "data_b": _data_to_list(archive.data_b),
        "results": {name: _result_to_dict(r) for name, r in archive.results.items()},
    }
    return json.dumps(payload, allow_nan=False, separators=(",", ":")) + "\n"


def archive_from_json(text: str) -> ProfileArchive:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IngestionError(f"corrupt archive: {exc}") from exc
    if not isinstance(payload, dict) or "schema_version" not in payload:
        raise IngestionError("corrupt archive: missing schema_version")
    if payload["schema_version"] != SCHEMA_VERSION:
        raise IngestionError(
            f"archive schema version {payload['schema_version']} is not supported (expected {SCHEMA_VERSION})"
        )
    try:
        return ProfileArchive(
            profile=_profile_from_dict(payload["profile"]),
            data=_data_from_list(payload.get("data")),
            data_b=_data_from_list(payload.get("data_b")),
            results={name: _result_from_dict(r) for name, r in payload.get("results", {}).items()},
            shapes=[tuple(s) for s in payload.get("shapes", [])],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise IngestionError(f"corrupt archive: {exc!r}") from exc


def write_profile(archive: ProfileArchive, path):
    """Write an archive as JSON, replacing the target atomically."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_text(archive_to_json(archive))
        os.replace(tmp, path)
    except OSError as exc:
        raise IngestionError(f"cannot write {path}: {exc.strerror or exc}") from exc


def read_profile(path) -> ProfileArchive:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return archive_from_json(text)


# -- synthetic data ---------------------------------------------------------

def _rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def gen_random_walk(n, seed=0) -> np.ndarray:
    """Cumulative sum of ``n`` fair +-1 steps."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    steps = _rng(seed).choice(np.array([-1.0, 1.0]), size=int(n))
    return np.cumsum(steps)


def _smooth_shape(rng, length, n_waves=3):
    t = np.arange(length) / length
    shape = np.zeros(length)
    for k in range(1, n_waves + 1):
        shape += rng.normal() / k * np.sin(2 * np.pi * k * t + rng.uniform(0, 2 * np.pi))
    shape -= shape.mean()
    return shape / (shape.std() or 1.0)


def _spaced_positions(rng, n, length, count, gap):
    """``count`` random starts for ``length``-sample inserts, separated by at least ``gap``."""
    span = length + gap
    room = n - count * span - gap
    if room < 0:
        raise ParameterError(f"{count} inserts of length {length} with gap {gap} do not fit in {n} samples")
    cuts = np.sort(rng.integers(0, room + 1, size=count))
    return [int(gap + c + k * span) for k, c in enumerate(cuts)]


def _plant_motif(rng, n, pattern_length=50, copies=2, noise=0.0, dims=1, scale=3.0):
    m = int(pattern_length)
    positions = _spaced_positions(rng, n, m, copies, gap=m)
    cols = []
    for _ in range(dims):
        steps = rng.normal(size=n)
        pattern = _smooth_shape(rng, m) * scale
        for p in positions:
            steps[p + 1 : p + m] = np.diff(pattern)
        col = np.cumsum(steps)
        for p in positions:
            col[p : p + m] += noise * rng.normal(size=m)
        cols.append(col)
    return np.column_stack(cols), {"positions": positions, "pattern_length": m}


def _plant_regime_change(rng, n, at=0.5, periods=None, noise=0.25):
    cp = int(math.floor(n * at))
    if periods is None:
        periods = (rng.uniform(18, 28), rng.uniform(45, 70))
    t = np.arange(n)
    x = np.empty(n)
    x[:cp] = np.sin(2 * np.pi * t[:cp] / periods[0] + rng.uniform(0, 2 * np.pi))
    x[cp:] = np.sin(2 * np.pi * t[cp:] / periods[1] + rng.uniform(0, 2 * np.pi))
    x += noise * rng.normal(size=n)
    return x[:, None], {"change_points": [cp], "periods": [float(p) for p in periods]}


def _plant_chain(rng, n, pattern_length=50, repeats=6, noise=0.05):
    m = int(pattern_length)
    start, end = _smooth_shape(rng, m), _smooth_shape(rng, m)
    x = 0.3 * rng.normal(size=n)
    positions = _spaced_positions(rng, n, m, repeats, gap=m)
    for k, p in enumerate(positions):
        frac = k / max(1, repeats - 1)
        x[p : p + m] = (1 - frac) * start + frac * end + noise * rng.normal(size=m)
    return x[:, None], {"positions": positions, "pattern_length": m}


def _plant_anomaly(rng, n, period=50, width=5, height=3.0, noise=0.05):
    t = np.arange(n)
    x = np.sin(2 * np.pi * t / period) + noise * rng.normal(size=n)
    pos = int(rng.integers(n // 10, n - n // 10 - width))
    x[pos : pos + width] += height
    return x[:, None], {"positions": [pos], "width": int(width)}


_PLANTERS = {
    "motif": _plant_motif,
    "regime_change": _plant_regime_change,
    "chain": _plant_chain,
    "anomaly": _plant_anomaly,
}


def gen_planted(kind, n=2000, seed=0, **params) -> Dataset:
    """Synthetic series with a known structure recorded in ``ground_truth``.

    ``motif``: a smooth pattern copied into a random walk. ``regime_change``:
    a noisy sine whose period switches at fraction ``at``. ``chain``: a
    pattern morphing step by step between two shapes, repeated in noise.
    ``anomaly``: a noisy sine with one injected spike.
    """
    if kind not in _PLANTERS:
        raise ParameterError(f"unknown planted kind {kind!r}; choose one of {', '.join(_PLANTERS)}")
    if n < 4:
        raise ParameterError(f"n must be >= 4, got {n}")
    try:
        x, truth = _PLANTERS[kind](_rng(seed), int(n), **params)
    except TypeError as exc:
        raise ParameterError(f"invalid parameters for {kind}: {exc}") from exc
    spec = ",".join(f"{k}={v}" for k, v in sorted(params.items()))
    return Dataset(
        name=f"planted-{kind}",
        series=x,
        source=f"gen_planted({kind}, n={n}, seed={seed}{', ' + spec if spec else ''})",
        ground_truth=truth,
    )
