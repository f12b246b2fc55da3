"""Flat-file input and output: sample CSVs, result CSVs and SVG charts.

Sample CSV: one observation per row, ``q`` comma-separated reals, optional
``#`` comment lines, no header.

Result CSV: a block of ``# key=value`` metadata lines (values JSON-encoded),
one header row, then data rows.  Floats are written with ``repr`` so that
files round-trip exactly and are byte-identical for identical tables.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DepthError,
    DimInconsistent,
    EmptySample,
    NormError,
    ParseError,
)
from .sphere import NORM_TOL, DirectionalSample, as_sample


class IoError(DepthError, OSError):
    exit_code = 3


def ingest_sample(path, normalize=False):
    """Read a sample CSV.

    Rows whose norm is not within 1e-8 of 1 raise :class:`NormError` unless
    ``normalize`` is set, in which case they are rescaled.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    rows = []
    q = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            x = np.array([float(tok) for tok in s.split(",")])
        except ValueError:
            raise ParseError(lineno, f"not a list of numbers: {s!r}") from None
        if not np.all(np.isfinite(x)):
            raise ParseError(lineno, "non-finite value")
        if x.size < 2:
            raise ParseError(lineno, "need at least 2 coordinates")
        if q is None:
            q = x.size
        elif x.size != q:
            raise DimInconsistent(lineno, f"expected {q} coordinates, got {x.size}")
        norm = np.linalg.norm(x)
        if abs(norm - 1.0) > NORM_TOL:
            if not normalize or norm < 1e-300:
                raise NormError(lineno, f"norm {norm!r}")
            x = x / norm
        rows.append(x)
    if not rows:
        raise EmptySample(f"{path} holds no observations")
    return DirectionalSample(np.vstack(rows))


def format_sample(sample):
    return "".join(",".join(f"{v:.17g}" for v in row) + "\n" for row in as_sample(sample).points)


def write_sample(sample, path):
    try:
        Path(path).write_text(format_sample(sample))
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


# --- result tables -----------------------------------------------------------

@dataclass
class ResultTable:
    """Rectangular results plus a metadata block.

    ``chart`` names the columns an SVG rendering uses: ``x``, ``y``, a list of
    ``group`` columns (one polyline per distinct combination) and an optional
    ``where`` mapping of column -> required value.
    """

    columns: tuple
    rows: list
    metadata: dict = field(default_factory=dict)
    chart: dict = field(default_factory=dict)

    def __post_init__(self):
        self.columns = tuple(self.columns)
        width = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} fields, expected {width}")

    def column(self, name):
        j = self.columns.index(name)
        return [row[j] for row in self.rows]

    def select(self, **where):
        idx = {k: self.columns.index(k) for k in where}
        return [r for r in self.rows if all(r[idx[k]] == v for k, v in where.items())]


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def table_to_csv(table):
    buf = io.StringIO()
    for key, value in table.metadata.items():
        buf.write(f"# {key}={json.dumps(value, sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _parse_cell(s):
    for conv in (int, float):
        try:
            return conv(s)
        except ValueError:
            pass
    return s


def parse_result_csv(text):
    meta = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        key, _, value = lines[i][1:].strip().partition("=")
        meta[key] = json.loads(value)
        i += 1
    reader = csv.reader(lines[i:])
    header = next(reader)
    rows = [tuple(_parse_cell(c) for c in r) for r in reader]
    return ResultTable(tuple(header), rows, meta)


def read_result_csv(path):
    return parse_result_csv(Path(path).read_text())


# --- SVG -----------------------------------------------------------------------

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")
_W, _H, _PAD = 720, 440, 60


def _fmt(v):
    return f"{v:.2f}"


def table_to_svg(table):
    """Polyline chart of ``chart['y']`` against ``chart['x']``, one line per group."""
    chart = table.chart
    if not chart:
        raise ValueError("table carries no chart description")
    xi = table.columns.index(chart["x"])
    yi = table.columns.index(chart["y"])
    gi = [table.columns.index(g) for g in chart.get("group", ())]
    rows = table.select(**chart.get("where", {}))
    series = {}
    for r in rows:
        series.setdefault(tuple(r[j] for j in gi), []).append((float(r[xi]), float(r[yi])))
    if not series:
        raise ValueError("nothing to plot")
    xs = [p[0] for pts in series.values() for p in pts]
    ys = [p[1] for pts in series.values() for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    x1 = x1 if x1 > x0 else x0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0

    def px(x):
        return _PAD + (x - x0) / (x1 - x0) * (_W - 2 * _PAD)

    def py(y):
        return _H - _PAD - (y - y0) / (y1 - y0) * (_H - 2 * _PAD)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<line x1="{_PAD}" y1="{_H - _PAD}" x2="{_W - _PAD}" y2="{_H - _PAD}" stroke="black"/>',
        f'<line x1="{_PAD}" y1="{_PAD}" x2="{_PAD}" y2="{_H - _PAD}" stroke="black"/>',
        f'<text x="{_W / 2}" y="{_H - 15}" text-anchor="middle">{chart["x"]}</text>',
        f'<text x="15" y="{_H / 2}" text-anchor="middle" '
        f'transform="rotate(-90 15 {_H / 2})">{chart["y"]}</text>',
    ]
    for k in range(5):
        xv = x0 + (x1 - x0) * k / 4
        yv = y0 + (y1 - y0) * k / 4
        out.append(f'<text x="{_fmt(px(xv))}" y="{_H - _PAD + 16}" text-anchor="middle">{xv:.3g}</text>')
        out.append(f'<text x="{_PAD - 6}" y="{_fmt(py(yv) + 4)}" text-anchor="end">{yv:.3g}</text>')
    for i, (key, pts) in enumerate(series.items()):
        colour = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in pts)
        label = " ".join(str(k) for k in key) or chart["y"]
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{coords}">'
                   f"<title>{label}</title></polyline>")
        out.append(f'<text x="{_W - _PAD + 4}" y="{_PAD + 14 * i}" fill="{colour}" font-size="10">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit(table, fmt, path):
    """Write ``table`` as ``csv`` or ``svg``; output bytes depend only on the table."""
    if not table.rows:
        raise ValueError("refusing to emit an empty table")
    if fmt == "csv":
        text = table_to_csv(table)
    elif fmt == "svg":
        text = table_to_svg(table)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
