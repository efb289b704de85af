"""Discrete fluxes of the energy-form scheme and the resulting collision rate.

Cell values are energies g_i = k_i f_i. Every flux sum runs over the
weighted values ``w_j = h_j * g_j * k_j**(gamma/2 - 1)``; a pair (m, j)
crosses edge c when ``k_m + k_j > c`` (strict). The composite flux at an
edge is ``q = -2*Q1 + Q2``, where Q1 restricts both indices to cells left
of the edge and Q2 runs over the whole truncated domain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._jit import composite_flux_two_pointer, smoluchowski_two_pointer
from .kernel import KernelSpec, kernel_eval, weight
from .mesh import Grid


@dataclass
class EnergyState:
    """Cell energies at one time level."""

    g: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.g = np.asarray(self.g, dtype=float)
        if self.g.ndim != 1:
            raise ValueError("state values must be one-dimensional")
        if not np.all(np.isfinite(self.g)):
            raise FloatingPointError("state contains non-finite values")
        self.t = float(self.t)

    def __len__(self):
        return self.g.size

    def copy(self) -> EnergyState:
        return EnergyState(self.g.copy(), self.t)


def _values(grid: Grid, state) -> np.ndarray:
    g = state.g if isinstance(state, EnergyState) else np.asarray(state, dtype=float)
    if g.shape != (grid.M,):
        raise ValueError(f"state has {g.size} cells but the grid has {grid.M}")
    return g


def flux_weights(grid: Grid, spec: KernelSpec, state) -> np.ndarray:
    """w_j = h_j g_j k_j**(gamma/2-1)."""
    return grid.widths * _values(grid, state) * weight(spec, grid.pivots)


def _pair_matrix(grid, spec, state):
    w = flux_weights(grid, spec, state)
    k = grid.pivots
    return np.outer(w, w), k[:, None] + k[None, :]


def _check_edge(grid, i):
    if not 0 <= i <= grid.M:
        raise IndexError(f"edge index {i} outside 0..{grid.M}")


def flux_Q1(grid: Grid, spec: KernelSpec, state, edge_index: int) -> float:
    """Reference double sum over cells 1..i of pairs crossing edge i."""
    _check_edge(grid, edge_index)
    i = edge_index
    W, S = _pair_matrix(grid, spec, state)
    c = grid.edges[i]
    inner = np.where(S[:i, :i] > c, W[:i, :i], 0.0).sum(axis=1)
    return float(inner.sum())


def flux_Q2(grid: Grid, spec: KernelSpec, state, edge_index: int) -> float:
    """Reference double sum over all cells of pairs crossing edge i."""
    _check_edge(grid, edge_index)
    W, S = _pair_matrix(grid, spec, state)
    c = grid.edges[edge_index]
    inner = np.where(S > c, W, 0.0).sum(axis=1)
    return float(inner.sum())


def flux_components(grid: Grid, spec: KernelSpec, state) -> tuple[np.ndarray, np.ndarray]:
    """(Q1, Q2) at all M+1 edges by direct enumeration, O(M^3)."""
    W, S = _pair_matrix(grid, spec, state)
    M = grid.M
    q1 = np.zeros(M + 1)
    q2 = np.zeros(M + 1)
    for i, c in enumerate(grid.edges):
        crossing = np.where(S > c, W, 0.0)
        q2[i] = crossing.sum(axis=1).sum()
        q1[i] = crossing[:i, :i].sum(axis=1).sum()
    return q1, q2


def composite_flux(grid: Grid, spec: KernelSpec, state) -> np.ndarray:
    """-2*Q1 + Q2 at every edge by direct enumeration (reference path)."""
    q1, q2 = flux_components(grid, spec, state)
    return -2.0 * q1 + q2


def flux_components_fast(grid: Grid, spec: KernelSpec, state) -> tuple[np.ndarray, np.ndarray]:
    """(Q1, Q2) at all edges via prefix sums and a two-pointer sweep, O(M^2)."""
    w = np.ascontiguousarray(flux_weights(grid, spec, state))
    return composite_flux_two_pointer(grid.edges, grid.pivots, w)


def composite_flux_fast(grid: Grid, spec: KernelSpec, state) -> np.ndarray:
    q1, q2 = flux_components_fast(grid, spec, state)
    return -2.0 * q1 + q2


def collision_rate(grid: Grid, spec: KernelSpec, state) -> np.ndarray:
    """Semi-discrete right-hand side dg_i/dt = (k_i/h_i) * (q[i] - q[i-1])."""
    q = composite_flux_fast(grid, spec, state)
    return grid.pivots / grid.widths * np.diff(q)


def direct_collision_oracle(grid: Grid, spec: KernelSpec, state) -> np.ndarray:
    """Collision rate assembled cell by cell, without differencing fluxes.

    For cell i with edges (a, b] the change q(b) - q(a) splits into the
    pairs whose sum falls in the strip (a, b] and the pairs that first
    enter the left square at row/column i. O(M^3); small grids only.
    """
    W, S = _pair_matrix(grid, spec, state)
    M = grid.M
    edges = grid.edges
    idx = np.arange(M)
    out = np.empty(M)
    for i in range(M):
        a, b = edges[i], edges[i + 1]
        strip = (S > a) & (S <= b)
        left = (idx[:, None] < i) & (idx[None, :] < i)
        frontier = (np.maximum(idx[:, None], idx[None, :]) == i) & (S > b)
        dq1 = -W[strip & left].sum() + W[frontier].sum()
        dq2 = -W[strip].sum()
        out[i] = -2.0 * dq1 + dq2
    return grid.pivots / grid.widths * out


def convolution_form(grid: Grid, spec: KernelSpec, state) -> np.ndarray:
    """Collision rate on a uniform grid written as a discrete convolution.

    With pivots (j - 1/2) h the strip of cell i holds exactly the pairs
    m + j = i + 1 (1-based), which gives
    ``(k_i/h_i) * (sum_{m<=i} w_m w_{i+1-m} - 2 w_i (W_i + W_{i-1}))``
    where W_i is the running sum of the weights.
    """
    if not grid.is_uniform:
        raise ValueError("the convolution form needs a uniform grid")
    w = flux_weights(grid, spec, state)
    M = grid.M
    cum = np.cumsum(w)
    prev = np.concatenate(([0.0], cum[:-1]))
    conv = np.convolve(w, w)[:M]  # conv[i] = sum_{m+j=i} (0-based)
    neg_flux = 2.0 * w * (cum + prev) - conv
    return -grid.pivots / grid.widths * neg_flux


def smoluchowski_flux(grid: Grid, spec: KernelSpec, state_f) -> np.ndarray:
    """Mass flux of the truncated non-conservative coagulation form.

    ``F[i] = 2 sum_{m<=i} sum_{j: k_m+k_j > edge_i} h_m h_j a(k_m, k_j) f_m f_j k_m``
    with number densities f; the kernel factorises so the inner sum is a
    suffix sum over j.
    """
    f = _values(grid, state_f)
    k = grid.pivots
    half = k ** (0.5 * spec.gamma)
    u = np.ascontiguousarray(grid.widths * f * half * k)
    v = np.ascontiguousarray(grid.widths * f * half)
    return smoluchowski_two_pointer(grid.edges, k, u, v)


def smoluchowski_flux_direct(grid: Grid, spec: KernelSpec, state_f) -> np.ndarray:
    """Enumeration of the same sum, for cross-checks."""
    f = _values(grid, state_f)
    k, h = grid.pivots, grid.widths
    A = kernel_eval(spec, k[:, None], k[None, :])
    T = np.outer(h * f * k, h * f) * A
    S = k[:, None] + k[None, :]
    out = np.zeros(grid.M + 1)
    for i, c in enumerate(grid.edges):
        out[i] = 2.0 * np.where(S[:i] > c, T[:i], 0.0).sum()
    return out
