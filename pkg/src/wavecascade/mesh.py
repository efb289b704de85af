"""Finite-volume cells on the truncated frequency interval [0, R]."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Cell edges, pivots and widths of a 1-D frequency mesh.

    Only ``edges`` is stored by the caller; pivots and widths are derived
    and the arrays are made read-only so a grid can be shared freely.
    """

    edges: np.ndarray
    pivots: np.ndarray = field(init=False, repr=False)
    widths: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        edges = np.array(self.edges, dtype=float)
        if edges.ndim != 1 or edges.size < 2:
            raise ValueError("a grid needs at least two edges")
        if not np.all(np.isfinite(edges)):
            raise ValueError("grid edges must be finite")
        if edges[0] != 0.0:
            raise ValueError(f"first edge must be 0, got {edges[0]!r}")
        if np.any(np.diff(edges) <= 0.0):
            raise ValueError("grid edges must be strictly increasing")
        pivots = 0.5 * (edges[:-1] + edges[1:])
        widths = np.diff(edges)
        for arr in (edges, pivots, widths):
            arr.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "pivots", pivots)
        object.__setattr__(self, "widths", widths)

    @property
    def M(self) -> int:
        return self.pivots.size

    @property
    def R(self) -> float:
        return float(self.edges[-1])

    @property
    def h_max(self) -> float:
        return float(self.widths.max())

    @property
    def h_min(self) -> float:
        return float(self.widths.min())

    @property
    def is_uniform(self) -> bool:
        w = self.widths
        return bool(np.all(np.abs(w - w[0]) <= 1e-12 * w[0]))

    def __len__(self):
        return self.M

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash(self.edges.tobytes())

    def __repr__(self):
        return f"Grid(M={self.M}, R={self.R:g}, h_max={self.h_max:g})"


def uniform_grid(R: float, h: float) -> Grid:
    """Uniform mesh of ``round(R/h)`` cells with ``edges[i] = i*h``.

    ``R/h`` has to be an integer up to ``1e-9`` relative slack; the last
    edge is pinned to exactly ``R``.
    """
    R = float(R)
    h = float(h)
    if not (R > 0.0 and h > 0.0):
        raise ValueError(f"R and h must be positive, got R={R}, h={h}")
    ratio = R / h
    M = int(round(ratio))
    if M < 1 or abs(ratio - M) > 1e-9 * ratio:
        raise ValueError(f"R/h = {ratio:.12g} is not an integer")
    edges = np.arange(M + 1, dtype=float) * h
    edges[-1] = R
    return Grid(edges)


def custom_grid(edges) -> Grid:
    """Mesh from an explicit list of edges (first edge must be 0)."""
    return Grid(np.asarray(edges, dtype=float))
