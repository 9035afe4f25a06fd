# cython: boundscheck=False, wraparound=False, cdivision=True
"""Boundary matrix reduction over GF(2) with clearing (compiled kernel).

Must stay behaviourally identical to _reduction_py.reduce_columns.
Columns are kept as sorted C arrays of row indices; adding two columns
is a merge that drops common entries.
"""
import numpy as np

cimport numpy as cnp
from libc.stdlib cimport free, malloc

cnp.import_array()


cdef struct Col:
    long *rows
    Py_ssize_t size
    Py_ssize_t cap


cdef inline void col_free(Col *c) nogil:
    if c.rows != NULL:
        free(c.rows)
        c.rows = NULL
    c.size = 0
    c.cap = 0


cdef int col_xor(Col *dst, long *other, Py_ssize_t osize) nogil:
    # dst := dst XOR other, both sorted ascending
    cdef long *out = <long *> malloc((dst.size + osize) * sizeof(long))
    if out == NULL:
        return -1
    cdef Py_ssize_t i = 0, j = 0, k = 0
    while i < dst.size and j < osize:
        if dst.rows[i] < other[j]:
            out[k] = dst.rows[i]; i += 1; k += 1
        elif dst.rows[i] > other[j]:
            out[k] = other[j]; j += 1; k += 1
        else:
            i += 1; j += 1
    while i < dst.size:
        out[k] = dst.rows[i]; i += 1; k += 1
    while j < osize:
        out[k] = other[j]; j += 1; k += 1
    if dst.rows != NULL:
        free(dst.rows)
    dst.rows = out
    dst.size = k
    dst.cap = k
    return 0


def reduce_columns(columns, dims):
    """Reduce boundary columns; return low[j] (pivot row) or -1."""
    cdef Py_ssize_t n = len(columns)
    dims_arr = np.asarray(dims, dtype=np.int64)
    cdef cnp.int64_t[::1] dview = np.ascontiguousarray(dims_arr)
    low_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] low = low_arr
    owner_arr = np.full(n, -1, dtype=np.int64)  # row -> owning column
    cdef cnp.int64_t[::1] owner = owner_arr
    cleared_arr = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] cleared = cleared_arr

    cdef Col *cols = <Col *> malloc(n * sizeof(Col))
    if cols == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, m
    for j in range(n):
        cols[j].rows = NULL
        cols[j].size = 0
        cols[j].cap = 0

    cdef cnp.int64_t[::1] src
    cdef long piv, k
    try:
        for p in sorted(set(dims_arr.tolist()), reverse=True):
            for j in range(n):
                if dview[j] != p or cleared[j]:
                    continue
                src = np.ascontiguousarray(np.sort(
                    np.asarray(columns[j], dtype=np.int64)))
                m = src.shape[0]
                col_free(&cols[j])
                if m > 0:
                    cols[j].rows = <long *> malloc(m * sizeof(long))
                    if cols[j].rows == NULL:
                        raise MemoryError()
                    for i in range(m):
                        cols[j].rows[i] = src[i]
                    cols[j].size = m
                while cols[j].size > 0:
                    piv = cols[j].rows[cols[j].size - 1]
                    k = owner[piv]
                    if k < 0:
                        break
                    if col_xor(&cols[j], cols[k].rows, cols[k].size) != 0:
                        raise MemoryError()
                if cols[j].size > 0:
                    piv = cols[j].rows[cols[j].size - 1]
                    low[j] = piv
                    owner[piv] = j
                    cleared[piv] = 1
    finally:
        for j in range(n):
            col_free(&cols[j])
        free(cols)
    return low_arr
