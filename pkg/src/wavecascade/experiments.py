"""Grid-refinement and parameter-sweep studies built on :func:`integrate.run`."""

from __future__ import annotations

import logging
import math

import numpy as np

from .diagnostics import EOCError, decay_slope, eoc_fine_grid, eoc_three_grid, l1_diff, to_fine_grid
from .integrate import run

logger = logging.getLogger(__name__)

EOC_SNAPSHOT_EVERY = 0.25


def nested_extent(R: float, h: float) -> float:
    """Largest multiple of ``h`` not exceeding ``R`` (R itself when R/h is integral)."""
    n = math.floor(R / h + 1e-9)
    if n < 1:
        raise ValueError(f"h={h} exceeds R={R}")
    return R if abs(R / h - n) <= 1e-9 * (R / h) else n * h


class RefinementFamily:
    """Runs of one base configuration on several uniform spacings, cached by (h, R)."""

    def __init__(self, base, snapshot_every: float = EOC_SNAPSHOT_EVERY):
        if base.edges is not None:
            raise ValueError("refinement studies need a uniform base grid")
        self.base = base
        self.snapshot_every = snapshot_every
        self._runs = {}

    def solve(self, h: float, R: float | None = None):
        R = self.base.R if R is None else R
        key = (round(h, 12), round(R, 12))
        if key not in self._runs:
            cfg = self.base.replace(
                h=float(h), R=float(R), cadence=10**9, snapshots=(), snapshot_every=self.snapshot_every, cfl="off"
            )
            logger.info("refinement run h=%g R=%g", h, R)
            result = run(cfg)
            self._runs[key] = (result.grid, result.snapshot_array(), np.array(result.snapshot_times))
        return self._runs[key]


def eoc_study(base, hs=(0.4, 0.3, 0.2), fine_hs=(0.2, 0.1), h_star=1.0 / 80.0, snapshot_every=EOC_SNAPSHOT_EVERY):
    """Three-grid and fine-grid order estimates for a base configuration.

    For each h in ``hs`` the family h, h/2, h/4 runs on ``[0, R']`` with
    R' the largest multiple of h not above R. For each h in ``fine_hs``
    the runs at h and h/2 are compared with the run at ``h_star`` at the
    final time. Returns one row per distinct h.
    """
    family = RefinementFamily(base, snapshot_every)
    rows = {}

    def row(h):
        return rows.setdefault(
            h,
            dict(h=h, p_paper_formula=math.nan, p_classical=math.nan, t_max=math.nan,
                 l1_h_hstar=math.nan, p_fine_grid=math.nan),
        )

    for h in hs:
        R = nested_extent(base.R, h)
        runs = [family.solve(x, R) for x in (h, h / 2, h / 4)]
        try:
            rep = eoc_three_grid([(g, s) for g, s, _ in runs], runs[0][2])
        except EOCError as exc:
            logger.warning("no three-grid estimate for h=%g: %s", h, exc)
            continue
        r = row(h)
        r.update(p_paper_formula=rep.p_shifted, p_classical=rep.p_classical, t_max=rep.t_max)

    if fine_hs:
        star = family.solve(h_star)
        for h in fine_hs:
            if abs((h / 2) / h_star - round((h / 2) / h_star)) > 1e-9:
                raise ValueError(f"h*={h_star} does not divide h/2={h / 2}")
            a = family.solve(h)
            b = family.solve(h / 2)
            r = row(h)
            last = (a[0], a[1][-1]), (b[0], b[1][-1]), (star[0], star[1][-1])
            try:
                r["p_fine_grid"] = eoc_fine_grid(*last)
            except EOCError as exc:
                logger.warning("no fine-grid estimate for h=%g: %s", h, exc)
            r["l1_h_hstar"] = l1_diff(to_fine_grid(a[0], a[1][-1], star[0]), star[1][-1], star[0])
    return [rows[h] for h in sorted(rows, reverse=True)]


SWEEP_AXES = ("R", "gamma")


def sweep(base, axis: str, values, window=None):
    """Run ``base`` for each value of ``axis`` and fit the M0 decay exponent.

    Returns ``(rows, results)``; rows carry the fitted exponent over
    ``window`` (default: the last decade of simulated time).
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"sweep axis must be one of {SWEEP_AXES}")
    rows, results = [], []
    for v in values:
        cfg = base.replace(**{axis: float(v)}, label=f"{base.label}_{axis}{v:g}")
        result = run(cfg)
        t = result.series("t")
        m0 = result.series("m0")
        win = window if window is not None else (t[-1] / 10.0, t[-1])
        try:
            s = decay_slope(t, m0, win)
        except ValueError as exc:
            logger.warning("no decay fit for %s=%g: %s", axis, v, exc)
            s = math.nan
        rows.append(
            dict(axis=axis, value=float(v), label=cfg.label, decay_exponent=s,
                 window_lo=win[0], window_hi=win[1], m0_initial=m0[0], m0_final=m0[-1])
        )
        results.append((cfg, result))
    return rows, results

