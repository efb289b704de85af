"""Compiled inner loops for the flux sums."""

import numpy as np
from numba import njit


@njit(cache=True)
def _two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


@njit(cache=True)
def compensated_prefix(w):
    """Prefix sums P[j] = sum(w[:j]) carried as an unevaluated (hi, lo) pair."""
    n = w.size
    hi = np.zeros(n + 1)
    lo = np.zeros(n + 1)
    s = 0.0
    c = 0.0
    for j in range(n):
        s, e = _two_sum(s, w[j])
        c += e
        hi[j + 1] = s
        lo[j + 1] = c
    return hi, lo


@njit(cache=True)
def composite_flux_two_pointer(edges, k, w):
    """Q1 and Q2 at every edge in O(M) per edge.

    For edge c and row m the admissible columns are {j : k[m] + k[j] > c},
    a suffix of the ascending pivots whose start never moves right as m
    grows. Segment sums come from compensated prefix sums, so a short
    segment at the end of a long prefix keeps its relative accuracy.
    """
    M = k.size
    hi, lo = compensated_prefix(w)
    q1 = np.zeros(M + 1)
    q2 = np.zeros(M + 1)
    for i in range(M + 1):
        c = edges[i]
        p = M
        s1 = 0.0
        s2 = 0.0
        for m in range(M):
            while p > 0 and k[m] + k[p - 1] > c:
                p -= 1
            if p < M:
                tail = (hi[M] - hi[p]) + (lo[M] - lo[p])
                s2 += w[m] * tail
            if m < i and p < i:
                seg = (hi[i] - hi[p]) + (lo[i] - lo[p])
                s1 += w[m] * seg
        q1[i] = s1
        q2[i] = s2
    return q1, q2


@njit(cache=True)
def smoluchowski_two_pointer(edges, k, u, v):
    """2 * sum_{m < i} u[m] * sum_{j : k[m] + k[j] > edges[i]} v[j] for every edge i."""
    M = k.size
    hi, lo = compensated_prefix(v)
    out = np.zeros(M + 1)
    for i in range(M + 1):
        c = edges[i]
        p = M
        s = 0.0
        for m in range(i):
            while p > 0 and k[m] + k[p - 1] > c:
                p -= 1
            if p < M:
                s += u[m] * ((hi[M] - hi[p]) + (lo[M] - lo[p]))
        out[i] = 2.0 * s
    return out
