"""
Compiled fill kernels for the serial and wavefront engines.

Every kernel is compiled with ``nogil=True`` so that the wavefront engine's
worker threads run concurrently. The branch order of the recurrence is fixed
(diagonal, vertical, horizontal) and must stay identical in every kernel,
otherwise the engines stop producing byte-identical traceback grids.
"""

import numba
import numpy as np


@numba.njit(nogil=True, cache=True)
def fill_rowmajor(score, tb, a, b, match, mismatch, gap):
    """Fill every interior cell of ``score`` and ``tb`` in row-major order."""
    m = a.shape[0]
    n = b.shape[0]
    for i in range(1, m + 1):
        ai = a[i - 1]
        for j in range(1, n + 1):
            sub = match if ai == b[j - 1] else mismatch
            d = score[i - 1, j - 1] + sub
            u = score[i - 1, j] + gap
            l = score[i, j - 1] + gap
            if d >= u and d >= l:
                score[i, j] = d
                tb[i, j] = 1
            elif u >= l:
                score[i, j] = u
                tb[i, j] = 2
            else:
                score[i, j] = l
                tb[i, j] = 3


@numba.njit(nogil=True, cache=True)
def fill_score_only(a, b, match, mismatch, gap):
    """Return the final global alignment score keeping only two rows of the grid."""
    m = a.shape[0]
    n = b.shape[0]
    prev = np.empty(n + 1, dtype=np.int64)
    curr = np.empty(n + 1, dtype=np.int64)
    for j in range(n + 1):
        prev[j] = j * gap
    for i in range(1, m + 1):
        curr[0] = i * gap
        ai = a[i - 1]
        for j in range(1, n + 1):
            sub = match if ai == b[j - 1] else mismatch
            best = prev[j - 1] + sub
            u = prev[j] + gap
            if u > best:
                best = u
            l = curr[j - 1] + gap
            if l > best:
                best = l
            curr[j] = best
        prev, curr = curr, prev
    return prev[n]


@numba.njit(nogil=True, cache=True)
def fill_diagonal_chunks(score, tb, ready, a, b, match, mismatch, gap,
                         diagonal, lo, hi, grain, first_chunk, stride, check):
    """
    Fill the chunks ``first_chunk, first_chunk + stride, ...`` of one anti-diagonal.

    The anti-diagonal holds the cells (i, diagonal - i) for lo <= i <= hi and
    is cut into chunks of ``grain`` consecutive rows. When ``check`` is set,
    the ready flags of the three dependencies are tested before each read.

    Returns -1 on success, or the row index of the first cell whose
    dependencies were not ready.
    """
    nchunks = (hi - lo + grain) // grain
    for k in range(first_chunk, nchunks, stride):
        start = lo + k * grain
        stop = min(hi + 1, start + grain)
        for i in range(start, stop):
            j = diagonal - i
            if check:
                if not (ready[i - 1, j] and ready[i, j - 1] and ready[i - 1, j - 1]):
                    return i
            sub = match if a[i - 1] == b[j - 1] else mismatch
            d = score[i - 1, j - 1] + sub
            u = score[i - 1, j] + gap
            l = score[i, j - 1] + gap
            if d >= u and d >= l:
                score[i, j] = d
                tb[i, j] = 1
            elif u >= l:
                score[i, j] = u
                tb[i, j] = 2
            else:
                score[i, j] = l
                tb[i, j] = 3
            ready[i, j] = True
    return -1
