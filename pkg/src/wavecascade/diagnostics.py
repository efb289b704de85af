"""Moments, norms, log-log fits and experimental orders of convergence."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .mesh import Grid


@dataclass(frozen=True)
class DiagnosticRecord:
    t: float
    moments: tuple[float, float, float, float]
    linf: float
    argmax_k: float
    neg_count: int
    min_val: float

    def as_row(self) -> dict:
        m0, m1, m2, m3 = self.moments
        row = asdict(self)
        del row["moments"]
        row.update(m0=m0, m1=m1, m2=m2, m3=m3)
        return row


def _values(state):
    return np.asarray(getattr(state, "g", state), dtype=float)


def moment(grid: Grid, state, ell: int) -> float:
    """sum_i h_i g_i k_i**ell, accumulated in ascending cell order."""
    ell = int(ell)
    if not 0 <= ell <= 8:
        raise ValueError("moment order must lie in 0..8")
    g = _values(state)
    terms = grid.widths * g * grid.pivots**ell
    total = 0.0
    for x in terms.tolist():
        total += x
    return total


def linf(state) -> float:
    return float(np.max(np.abs(_values(state))))


def record(grid: Grid, state, t: float | None = None) -> DiagnosticRecord:
    g = _values(state)
    if t is None:
        t = getattr(state, "t", 0.0)
    i = int(np.argmax(g))
    return DiagnosticRecord(
        t=float(t),
        moments=tuple(moment(grid, g, ell) for ell in range(4)),
        linf=linf(g),
        argmax_k=float(grid.pivots[i]),
        neg_count=int(np.count_nonzero(g < 0.0)),
        min_val=float(g.min()),
    )


def l1_diff(a, b, fine_grid: Grid) -> float:
    """sum_i h_i |a_i - b_i| on the fine grid."""
    a = _values(a)
    b = _values(b)
    if a.shape != b.shape or a.shape != (fine_grid.M,):
        raise ValueError("both states must live on the fine grid")
    return float(np.sum(fine_grid.widths * np.abs(a - b)))


def pchip_slopes(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Shape-preserving node derivatives.

    Interior slopes are the weighted harmonic mean of the neighbouring
    secants, zero where the secants change sign or vanish; end slopes use
    the one-sided three-point formula, limited so the end pieces stay
    monotone.
    """
    h = np.diff(x)
    delta = np.diff(y) / h
    n = x.size
    d = np.zeros(n)
    if n == 2:
        d[:] = delta[0]
        return d
    for i in range(1, n - 1):
        d0, d1 = delta[i - 1], delta[i]
        if d0 * d1 <= 0.0:
            continue
        w1 = 2.0 * h[i] + h[i - 1]
        w2 = h[i] + 2.0 * h[i - 1]
        d[i] = (w1 + w2) / (w1 / d0 + w2 / d1)
    d[0] = _end_slope(h[0], h[1], delta[0], delta[1])
    d[-1] = _end_slope(h[-1], h[-2], delta[-1], delta[-2])
    return d


def _end_slope(h0, h1, del0, del1):
    d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1)
    if np.sign(d) != np.sign(del0):
        return 0.0
    if np.sign(del0) != np.sign(del1) and abs(d) > abs(3.0 * del0):
        return 3.0 * del0
    return d


def interpolate_monotone_cubic(coarse_grid: Grid, coarse_state, query_points) -> np.ndarray:
    """Piecewise cubic Hermite interpolation through (pivot, value) pairs.

    Queries outside ``[first pivot, last pivot]`` take the end value.
    """
    x = np.asarray(coarse_grid.pivots, dtype=float)
    y = _values(coarse_state)
    if x.size < 2:
        raise ValueError("need at least two nodes")
    if y.shape != x.shape:
        raise ValueError("state does not match grid")
    xq = np.clip(np.asarray(query_points, dtype=float), x[0], x[-1])
    d = pchip_slopes(x, y)
    j = np.clip(np.searchsorted(x, xq, side="right") - 1, 0, x.size - 2)
    h = x[j + 1] - x[j]
    s = (xq - x[j]) / h
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    # h00 = 1 - h01, written so that flat pieces come out exact
    out = y[j] + h01 * (y[j + 1] - y[j]) + h * (h10 * d[j] + h11 * d[j + 1])
    # exact at nodes
    at_node = xq == x[j + 1]
    out[at_node] = y[j + 1][at_node]
    at_node = xq == x[j]
    out[at_node] = y[j][at_node]
    return out


class EOCError(ValueError):
    """Order estimate undefined (vanishing or non-positive log argument)."""


def eoc_shifted_ratio(e_h_q: float, e_h2_q: float) -> float:
    """log2(|g_h - g_{h/4}| / |g_{h/2} - g_{h/4}| - 1)."""
    if e_h2_q <= 0.0:
        raise EOCError("zero difference between the two finest solutions")
    arg = e_h_q / e_h2_q - 1.0
    if not arg > 0.0:
        raise EOCError(f"log2 argument {arg!r} is not positive")
    return math.log2(arg)


def eoc_classical(e_h_h2: float, e_h2_q: float) -> float:
    """log2(|g_h - g_{h/2}| / |g_{h/2} - g_{h/4}|)."""
    if e_h2_q <= 0.0 or e_h_h2 <= 0.0:
        raise EOCError("zero difference between successive solutions")
    return math.log2(e_h_h2 / e_h2_q)


@dataclass
class EocReport:
    """Order estimates for one coarse spacing h."""

    h: float
    p_shifted: float
    p_classical: float
    t_max: float
    l1_h_hq: float
    l1_h2_hq: float
    l1_h_h2: float
    series: dict = field(default_factory=dict, repr=False)


def to_fine_grid(grid, g, fine_grid):
    """Values of ``g`` at the fine pivots (identity when the grids coincide)."""
    if grid == fine_grid:
        return np.asarray(g, dtype=float)
    return interpolate_monotone_cubic(grid, g, fine_grid.pivots)


def eoc_three_grid(runs, times=None) -> EocReport:
    """Order estimate from solutions at h, h/2, h/4.

    ``runs`` is a sequence of three ``(grid, snapshots)`` pairs ordered
    coarse to fine, where ``snapshots`` is an array of shape
    ``(n_times, M)`` sampled at common ``times``. Coarse solutions are
    interpolated to the finest pivots; the estimate is taken at the time
    maximising ``|g_h - g_{h/4}|``.
    """
    (gh, sh), (gh2, sh2), (gq, sq) = runs
    sh, sh2, sq = (np.atleast_2d(np.asarray(s, dtype=float)) for s in (sh, sh2, sq))
    n = sq.shape[0]
    if not sh.shape[0] == sh2.shape[0] == n:
        raise ValueError("runs must share their output times")
    times = np.arange(n, dtype=float) if times is None else np.asarray(times, dtype=float)
    e_hq = np.empty(n)
    e_h2q = np.empty(n)
    e_hh2 = np.empty(n)
    for t in range(n):
        a = to_fine_grid(gh, sh[t], gq)
        b = to_fine_grid(gh2, sh2[t], gq)
        e_hq[t] = l1_diff(a, sq[t], gq)
        e_h2q[t] = l1_diff(b, sq[t], gq)
        e_hh2[t] = l1_diff(a, b, gq)
    t_idx = int(np.argmax(e_hq))
    p_shift = eoc_shifted_ratio(e_hq[t_idx], e_h2q[t_idx])
    try:
        p_class = eoc_classical(e_hh2[t_idx], e_h2q[t_idx])
    except EOCError:
        p_class = math.nan
    return EocReport(
        h=float(gh.h_max),
        p_shifted=p_shift,
        p_classical=p_class,
        t_max=float(times[t_idx]),
        l1_h_hq=float(e_hq[t_idx]),
        l1_h2_hq=float(e_h2q[t_idx]),
        l1_h_h2=float(e_hh2[t_idx]),
        series={"t": times, "l1_h_hq": e_hq, "l1_h2_hq": e_h2q, "l1_h_h2": e_hh2},
    )


def fine_grid_ratio(run_h, run_h2, run_star) -> float:
    """|g_h - g_*| / |g_{h/2} - g_*| with coarse runs interpolated to the fine grid."""
    (gh, sh), (gh2, sh2), (gs, ss) = run_h, run_h2, run_star
    a = to_fine_grid(gh, sh, gs)
    b = to_fine_grid(gh2, sh2, gs)
    num = l1_diff(a, ss, gs)
    den = l1_diff(b, ss, gs)
    if den <= 0.0:
        raise EOCError("solution at h/2 coincides with the fine solution")
    return num / den


def eoc_fine_grid(run_h, run_h2, run_star) -> float:
    """log2 of the fine-grid error ratio at the final time."""
    ratio = fine_grid_ratio(run_h, run_h2, run_star)
    if not ratio > 0.0:
        raise EOCError("solution at h coincides with the fine solution")
    return math.log2(ratio)


def _loglog_slope(x, y):
    lx = np.log(x)
    ly = np.log(y)
    A = np.vstack([lx, np.ones_like(lx)]).T
    slope, _ = np.linalg.lstsq(A, ly, rcond=None)[0]
    return float(slope)


def decay_slope(times, m0, window=None, min_samples: int = 8) -> float:
    """Decay exponent s of M0 ~ t**(-s), by least squares in log-log.

    The default window is the last decade of the series.
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(m0, dtype=float)
    if window is None:
        window = (t.max() / 10.0, t.max())
    lo, hi = window
    if not lo > 0.0:
        raise ValueError("decay window must start at t > 0")
    sel = (t >= lo) & (t <= hi)
    if np.count_nonzero(sel) < min_samples:
        raise ValueError(f"need at least {min_samples} samples in the window")
    if np.any(y[sel] <= 0.0):
        raise ValueError("non-positive moment inside the fit window")
    slope = _loglog_slope(t[sel], y[sel])
    return -slope if slope != 0.0 else 0.0


def spectrum_slope(grid: Grid, state, k_window) -> float:
    """Exponent a of f = g/k ~ k**(-a) over pivots inside ``k_window``."""
    lo, hi = k_window
    if lo < 0.0 or hi > grid.R or hi <= lo:
        raise ValueError("spectral window must lie inside (0, R]")
    k = grid.pivots
    sel = (k >= lo) & (k <= hi)
    if np.count_nonzero(sel) < 2:
        raise ValueError("need at least two pivots in the window")
    f = _values(state)[sel] / k[sel]
    if np.any(f <= 0.0):
        raise ValueError("non-positive density inside the spectral window")
    slope = _loglog_slope(k[sel], f)
    return -slope if slope != 0.0 else 0.0
