"""CSV and report writers. Every file is written to a temporary sibling and
moved into place, so a re-run replaces outputs whole."""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from pathlib import Path

import numpy as np

MOMENT_COLUMNS = ("t", "m0", "m1", "m2", "m3", "linf", "argmax_k", "neg_count", "min_val")
SNAPSHOT_COLUMNS = ("t", "k", "g", "f")
EOC_COLUMNS = ("h", "p_paper_formula", "p_classical", "t_max", "l1_h_hstar", "p_fine_grid")
DECAY_COLUMNS = ("axis", "value", "label", "decay_exponent", "window_lo", "window_hi", "m0_initial", "m0_final")


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.17g}"


def atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in _seq(row, columns)])
    return buf.getvalue()


def _seq(row, columns):
    return [row[c] for c in columns] if isinstance(row, dict) else list(row)


def write_csv(path, columns, rows) -> None:
    atomic_write(path, csv_text(columns, rows))


def read_csv(path) -> dict[str, np.ndarray]:
    """Numeric columns of a CSV written by this module."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        data = {name: [] for name in reader.fieldnames}
        for row in reader:
            for name, value in row.items():
                data[name].append(value)
    out = {}
    for name, values in data.items():
        try:
            out[name] = np.array([float(v) for v in values])
        except ValueError:
            out[name] = np.array(values)
    return out


def moments_rows(result):
    return [r.as_row() for r in result.records]


def snapshot_rows(result):
    k = result.grid.pivots
    for t, g in zip(result.snapshot_times, result.snapshots):
        for kk, gg in zip(k, g):
            yield (t, kk, gg, gg / kk)


GNUPLOT_HELP = """\
gnuplot columns
  moments.csv:   1=t 2=m0 3=m1 4=m2 5=m3 6=linf 7=argmax_k 8=neg_count 9=min_val
  snapshots.csv: 1=t 2=k 3=g 4=f
  e.g. set datafile separator ','; set logscale xy; plot 'moments.csv' every ::1 using 1:2 with lines
"""


def report_text(config_text: str, result=None, error: str | None = None) -> str:
    lines = ["# run report", ""]
    if result is not None:
        cfl = result.cfl
        lines += [
            f"grid cells           {result.grid.M}",
            f"R                    {fmt(result.grid.R)}",
            f"gamma                {fmt(result.spec.gamma)}",
            f"method               {result.integrator.method}",
            f"dt requested         {fmt(result.integrator.dt)}",
            f"dt used              {fmt(result.dt_used)}",
            f"steps                {result.n_steps}",
            f"cfl dt bound         {fmt(cfl.dt_bound)}",
            f"cfl satisfied        {cfl.satisfied}",
            f"cfl C(gamma)         {fmt(cfl.c_gamma)}",
            f"negative steps       {result.negative_steps}",
            f"wall time [s]        {result.wall_time:.3f}",
            f"completed            {result.completed}",
        ]
        if result.negativity:
            lines += ["", "negativity events (step, t, count, min)"]
            for ev in result.negativity[:50]:
                lines.append(f"  {ev.step} {fmt(ev.t)} {ev.count} {fmt(ev.min_val)}")
            if result.negative_steps > 50:
                lines.append(f"  ... {result.negative_steps - 50} more")
    if error:
        lines += ["", f"ABORTED: {error}"]
    lines += ["", GNUPLOT_HELP, "config", config_text]
    return "\n".join(lines) + "\n"
