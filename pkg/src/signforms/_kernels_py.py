"""Pure numpy fallback for the enumeration kernel.

Materializes pattern blocks and reduces them with one matmul per block.
Visits patterns in ascending index order, so the first argmax inside a block
is already the lexicographically smallest maximizer seen so far.
"""

from __future__ import annotations

import numpy as np

_BLOCK = 1 << 14


def best_sign_pattern(M: np.ndarray, t0: int, t1: int) -> tuple[float, np.ndarray]:
    """Maximize sum_j |(M^T s)_j| over patterns s with index in [t0, t1).

    Same contract as the compiled kernel: coordinate j of pattern(t) is +1
    iff bit (m-1-j) of t is set; returns (value, int8 pattern) with ties
    resolved toward the lexicographically smallest pattern in the chunk.
    """
    M = np.ascontiguousarray(M, dtype=np.float64)
    m = M.shape[0]
    if t1 <= t0:
        raise ValueError("empty pattern range")
    if m < 1 or m > 62:
        raise ValueError("pattern length out of range")
    shifts = np.arange(m - 1, -1, -1, dtype=np.uint64)
    best_val = -np.inf
    best_s = None
    for c0 in range(t0, t1, _BLOCK):
        c1 = min(c0 + _BLOCK, t1)
        ts = np.arange(c0, c1, dtype=np.uint64)
        bits = ((ts[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.int8)
        S = (2 * bits - 1).astype(np.float64)
        vals = np.abs(S @ M).sum(axis=1)
        i = int(np.argmax(vals))
        v = float(vals[i])
        # ties across blocks keep the earlier block: lower index, lex smaller
        if v > best_val:
            best_val = v
            best_s = S[i].astype(np.int8)
    return best_val, best_s
