"""Power-law collision kernel a(k1, k2) = (k1*k2)**(gamma/2) and the
characteristic-function combination used by the weak form."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np


class RegimeWarning(UserWarning):
    """Kernel degree outside the finite-capacity regime (gamma > 1)."""


@dataclass(frozen=True)
class KernelSpec:
    gamma: float

    def __post_init__(self):
        gamma = float(self.gamma)
        if not np.isfinite(gamma) or gamma < 0.0:
            raise ValueError(f"gamma must be a finite number >= 0, got {self.gamma!r}")
        object.__setattr__(self, "gamma", gamma)
        if gamma <= 1.0:
            warnings.warn(
                f"gamma={gamma:g} is outside the finite-capacity regime gamma > 1",
                RegimeWarning,
                stacklevel=3,
            )

    @property
    def finite_capacity(self) -> bool:
        return self.gamma > 1.0


def _check_positive(*values):
    for v in values:
        if np.any(np.asarray(v) <= 0.0):
            raise ValueError("frequencies must be strictly positive")


def kernel_eval(spec: KernelSpec, k1, k2):
    """Return (k1*k2)**(gamma/2). Broadcasts over arrays."""
    _check_positive(k1, k2)
    return (np.asarray(k1, dtype=float) * np.asarray(k2, dtype=float)) ** (0.5 * spec.gamma)


def weight(spec: KernelSpec, k):
    """Factor k**(gamma/2 - 1), so that a(k1, k2)/(k1*k2) = weight(k1)*weight(k2)."""
    _check_positive(k)
    return np.asarray(k, dtype=float) ** (0.5 * spec.gamma - 1.0)


def _chi(x, c):
    # closed interval [0, c]
    return (np.asarray(x) <= c).astype(int)


def K_indicator(c, k, k1):
    """chi(k+k1) + chi(|k-k1|) - 2*chi(max(k, k1)) with chi the indicator of [0, c].

    Vectorised; returns ints in {-1, 0, 1}.
    """
    c = np.asarray(c, dtype=float)
    k = np.asarray(k, dtype=float)
    k1 = np.asarray(k1, dtype=float)
    if np.any(c < 0.0):
        raise ValueError("cutoff c must be nonnegative")
    _check_positive(k, k1)
    out = _chi(k + k1, c) + _chi(np.abs(k - k1), c) - 2 * _chi(np.maximum(k, k1), c)
    return out if out.ndim else int(out)
