"""Numba-compiled gate kernels; drop-in replacements for numpy_kernels.

Same in-place contracts as numpy_kernels.  Compiled lazily on first call
and cached on disk, so repeated runs skip compilation.  fastmath is left
off to keep results bit-compatible with the fallback path.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_OPTS = {"cache": True, "nogil": True}


@njit(**_OPTS)
def apply_1q_rows(a, u00, u01, u10, u11, pos):
    rows, cols = a.shape
    half = 1 << pos
    step = half << 1
    for base in range(0, rows, step):
        for off in range(half):
            i0 = base + off
            i1 = i0 + half
            for c in range(cols):
                x0 = a[i0, c]
                x1 = a[i1, c]
                a[i0, c] = u00 * x0 + u01 * x1
                a[i1, c] = u10 * x0 + u11 * x1


@njit(**_OPTS)
def apply_1q_cols(a, u00, u01, u10, u11, pos):
    rows, cols = a.shape
    half = 1 << pos
    step = half << 1
    for r in range(rows):
        for base in range(0, cols, step):
            for off in range(half):
                j0 = base + off
                j1 = j0 + half
                x0 = a[r, j0]
                x1 = a[r, j1]
                a[r, j0] = u00 * x0 + u01 * x1
                a[r, j1] = u10 * x0 + u11 * x1


@njit(**_OPTS)
def apply_diag2_rows(a, d0, d1, d2, d3, pos0, pos1):
    rows, cols = a.shape
    m0 = 1 << pos0
    m1 = 1 << pos1
    for r in range(rows):
        b = 0
        if r & m0:
            b += 2
        if r & m1:
            b += 1
        if b == 0:
            d = d0
        elif b == 1:
            d = d1
        elif b == 2:
            d = d2
        else:
            d = d3
        for c in range(cols):
            a[r, c] = a[r, c] * d


@njit(**_OPTS)
def apply_diag2_cols(a, d0, d1, d2, d3, pos0, pos1):
    rows, cols = a.shape
    m0 = 1 << pos0
    m1 = 1 << pos1
    for r in range(rows):
        for c in range(cols):
            b = 0
            if c & m0:
                b += 2
            if c & m1:
                b += 1
            if b == 0:
                d = d0
            elif b == 1:
                d = d1
            elif b == 2:
                d = d2
            else:
                d = d3
            a[r, c] = a[r, c] * d


@njit(**_OPTS)
def apply_cnot_rows(a, pos_c, pos_t):
    rows, cols = a.shape
    mc = 1 << pos_c
    mt = 1 << pos_t
    for r in range(rows):
        if (r & mc) != 0 and (r & mt) == 0:
            r2 = r | mt
            for c in range(cols):
                tmp = a[r, c]
                a[r, c] = a[r2, c]
                a[r2, c] = tmp


@njit(**_OPTS)
def apply_cnot_cols(a, pos_c, pos_t):
    rows, cols = a.shape
    mc = 1 << pos_c
    mt = 1 << pos_t
    for r in range(rows):
        for c in range(cols):
            if (c & mc) != 0 and (c & mt) == 0:
                c2 = c | mt
                tmp = a[r, c]
                a[r, c] = a[r, c2]
                a[r, c2] = tmp


@njit(**_OPTS)
def probabilities_rows(a):
    rows, cols = a.shape
    out = np.zeros(rows)
    for r in range(rows):
        acc = 0.0
        for c in range(cols):
            x = a[r, c]
            acc += x.real * x.real + x.imag * x.imag
        out[r] = acc
    return out
