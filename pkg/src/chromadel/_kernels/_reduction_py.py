"""Pure-python boundary matrix reduction over GF(2), with clearing.

Mirror of the compiled kernel in _reduction.pyx; both must produce
identical pivot arrays for the same input.
"""
from __future__ import annotations

from typing import List, Sequence

import numpy as np


def reduce_columns(columns: Sequence[Sequence[int]],
                   dims: Sequence[int]) -> np.ndarray:
    """Reduce boundary columns; return low[j] (pivot row) or -1.

    columns[j] lists the row indices of the nonzero entries of column j.
    Columns are processed dimension by dimension, highest first, so that
    pivot rows of the previous pass can be cleared (they are known to
    reduce to zero).
    """
    n = len(columns)
    dims = np.asarray(dims, dtype=np.int64)
    low = np.full(n, -1, dtype=np.int64)
    reduced: List[set] = [set() for _ in range(n)]
    owner = {}  # pivot row -> column index
    cleared = np.zeros(n, dtype=bool)

    for p in sorted(set(dims.tolist()), reverse=True):
        for j in np.nonzero(dims == p)[0]:
            j = int(j)
            if cleared[j]:
                continue
            col = set(int(r) for r in columns[j])
            while col:
                piv = max(col)
                k = owner.get(piv)
                if k is None:
                    break
                col ^= reduced[k]
            reduced[j] = col
            if col:
                piv = max(col)
                low[j] = piv
                owner[piv] = j
                cleared[piv] = True
    return low
