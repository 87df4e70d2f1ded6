"""Pure-numpy gate kernels (reshape/slice based), used as the fallback path.

Every function mutates its array argument in place.  Arrays are C-contiguous
complex128 of shape (R, C).  The *_rows kernels act on a bit of the row
index (R = 2^m, bit position counted from the least significant end), the
*_cols kernels on a bit of the column index; a statevector batch stores
basis states along rows and batch members along columns, a density matrix
uses rows for kets and columns for bras.
"""

from __future__ import annotations

import numpy as np


def apply_1q_rows(a, u00, u01, u10, u11, pos):
    rows, cols = a.shape
    half = 1 << pos
    v = a.reshape(rows // (2 * half), 2, half * cols)
    x0 = v[:, 0]
    x1 = v[:, 1]
    t0 = u00 * x0 + u01 * x1
    v[:, 1] = u10 * x0 + u11 * x1
    v[:, 0] = t0


def apply_1q_cols(a, u00, u01, u10, u11, pos):
    rows, cols = a.shape
    half = 1 << pos
    v = a.reshape(rows, cols // (2 * half), 2, half)
    x0 = v[:, :, 0]
    x1 = v[:, :, 1]
    t0 = u00 * x0 + u01 * x1
    v[:, :, 1] = u10 * x0 + u11 * x1
    v[:, :, 0] = t0


def _row_quad_view(a, p_hi, p_lo):
    rows, cols = a.shape
    return a.reshape(
        rows // (1 << (p_hi + 1)),
        2,
        (1 << p_hi) // (1 << (p_lo + 1)),
        2,
        (1 << p_lo) * cols,
    )


def _col_quad_view(a, p_hi, p_lo):
    rows, cols = a.shape
    return a.reshape(
        rows,
        cols // (1 << (p_hi + 1)),
        2,
        (1 << p_hi) // (1 << (p_lo + 1)),
        2,
        1 << p_lo,
    )


def _quad_index(pos0, pos1, b_hi, b_lo):
    # diagonal entries are indexed by (bit at pos0, bit at pos1)
    if pos0 > pos1:
        return (b_hi << 1) | b_lo
    return (b_lo << 1) | b_hi


def apply_diag2_rows(a, d0, d1, d2, d3, pos0, pos1):
    d = (d0, d1, d2, d3)
    p_hi, p_lo = max(pos0, pos1), min(pos0, pos1)
    v = _row_quad_view(a, p_hi, p_lo)
    for b_hi in (0, 1):
        for b_lo in (0, 1):
            v[:, b_hi, :, b_lo] *= d[_quad_index(pos0, pos1, b_hi, b_lo)]


def apply_diag2_cols(a, d0, d1, d2, d3, pos0, pos1):
    d = (d0, d1, d2, d3)
    p_hi, p_lo = max(pos0, pos1), min(pos0, pos1)
    v = _col_quad_view(a, p_hi, p_lo)
    for b_hi in (0, 1):
        for b_lo in (0, 1):
            v[:, :, b_hi, :, b_lo] *= d[_quad_index(pos0, pos1, b_hi, b_lo)]


def _swap_slices(s10, s11):
    tmp = s10.copy()
    s10[...] = s11
    s11[...] = tmp


def apply_cnot_rows(a, pos_c, pos_t):
    p_hi, p_lo = max(pos_c, pos_t), min(pos_c, pos_t)
    v = _row_quad_view(a, p_hi, p_lo)
    if pos_c > pos_t:
        _swap_slices(v[:, 1, :, 0], v[:, 1, :, 1])
    else:
        _swap_slices(v[:, 0, :, 1], v[:, 1, :, 1])


def apply_cnot_cols(a, pos_c, pos_t):
    p_hi, p_lo = max(pos_c, pos_t), min(pos_c, pos_t)
    v = _col_quad_view(a, p_hi, p_lo)
    if pos_c > pos_t:
        _swap_slices(v[:, :, 1, :, 0], v[:, :, 1, :, 1])
    else:
        _swap_slices(v[:, :, 0, :, 1], v[:, :, 1, :, 1])


def probabilities_rows(a):
    """Row-index probability vector summed over columns: sum_c |a_rc|^2."""
    return np.einsum("rc,rc->r", a, a.conj()).real
