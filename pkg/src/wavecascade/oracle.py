"""Brute-force evaluators used to cross-check the flux form on small grids.

All inputs here are number densities f = g/k.
"""

from __future__ import annotations

import numpy as np

from .kernel import K_indicator, KernelSpec, kernel_eval
from .mesh import Grid


def _f(grid, state_f):
    f = np.asarray(getattr(state_f, "g", state_f), dtype=float)
    if f.shape != (grid.M,):
        raise ValueError(f"state has {f.size} cells but the grid has {grid.M}")
    return f


def _pair_weights(grid, spec, f):
    k, h = grid.pivots, grid.widths
    A = kernel_eval(spec, k[:, None], k[None, :])
    return np.outer(h * f, h * f) * A


def weak_form_rhs(grid: Grid, spec: KernelSpec, state_f, c: float) -> float:
    """Midpoint value of the double integral of a(k,k1) f f1 K(k,k1) over [0,R]^2,
    with K the indicator combination for the test function chi_[0,c]."""
    if not 0.0 <= c:
        raise ValueError("cutoff must be nonnegative")
    f = _f(grid, state_f)
    k = grid.pivots
    K = K_indicator(c, k[:, None], k[None, :])
    return float(np.sum(_pair_weights(grid, spec, f) * K))


def far_pair_sum(grid: Grid, spec: KernelSpec, state_f, c: float) -> float:
    """Midpoint value of the double integral of a f f1 over pairs with |k - k1| > c.

    For every cutoff, ``weak_form_rhs(c) = -2 Q1(c) + Q2(c) - far_pair_sum(c)``;
    the flux form drops the last term.
    """
    f = _f(grid, state_f)
    k = grid.pivots
    far = np.abs(k[:, None] - k[None, :]) > c
    return float(np.sum(np.where(far, _pair_weights(grid, spec, f), 0.0)))


def untransformed_Q(grid: Grid, spec: KernelSpec, state_f, cell_index) -> float | np.ndarray:
    """Six-term collision operator at pivot k_i on a uniform mesh.

    ``k - k1`` pairs cell j with cell i - j and ``k + k1`` pairs j with
    i + j (0-based offsets on the pivot lattice); the infinite integral is
    cut at R. ``cell_index`` is 0-based; pass ``None`` for all cells.
    """
    if not grid.is_uniform:
        raise ValueError("the untransformed operator needs a uniform grid")
    f = _f(grid, state_f)
    if cell_index is None:
        return np.array([untransformed_Q(grid, spec, f, i) for i in range(grid.M)])
    i = int(cell_index)
    if not 0 <= i < grid.M:
        raise IndexError(f"cell {i} outside 0..{grid.M - 1}")
    M = grid.M
    h = grid.widths[0]
    k = grid.pivots
    a = lambda x, y: kernel_eval(spec, x, y)  # noqa: E731

    # first integral over k1 in (0, k): cells j = 0..i-1 paired with i-1-j
    j = np.arange(i)
    jj = i - 1 - j
    gain = a(k[j], k[jj]) * f[j] * f[jj] if i else np.zeros(0)
    loss1 = a(k[i], k[j]) * f[i] * f[j] if i else np.zeros(0)
    loss2 = a(k[i], k[jj]) * f[i] * f[jj] if i else np.zeros(0)
    first = h * np.sum(gain - loss1 - loss2)

    # second integral over k1 in (0, R): k + k1 lands on cell i + j + 1
    j = np.arange(M)
    up = i + j + 1
    inside = up < M
    term_a = a(k[i], k[j]) * f[i] * f[j]
    ju = j[inside]
    ku = k[up[inside]]
    term_b = a(ku, k[ju]) * f[up[inside]] * f[ju]
    term_c = a(ku, k[i]) * f[i] * f[up[inside]]
    second = h * (np.sum(term_a) - np.sum(term_b) - np.sum(term_c))
    return float(first - 2.0 * second)


def convolution_gain(grid: Grid, spec: KernelSpec, state_f, cell_index: int) -> float:
    """h times the gain term of the first integral of :func:`untransformed_Q`."""
    f = _f(grid, state_f)
    i = int(cell_index)
    if i == 0:
        return 0.0
    h = grid.widths[0]
    k = grid.pivots
    j = np.arange(i)
    return float(h * h * np.sum(kernel_eval(spec, k[j], k[i - 1 - j]) * f[j] * f[i - 1 - j]))
