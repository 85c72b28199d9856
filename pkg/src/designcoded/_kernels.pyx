# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the kernels in ``_kernels_py``."""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

FNV_OFFSET = 0xCBF29CE484222325
cdef uint64_t _FNV_PRIME = 0x100000001B3ULL


def fnv1a64(data, h=FNV_OFFSET):
    cdef const unsigned char[:] view = memoryview(bytes(data)).cast("B")
    cdef uint64_t state = h
    cdef Py_ssize_t i, n = view.shape[0]
    with nogil:
        for i in range(n):
            state = (state ^ view[i]) * _FNV_PRIME
    return state


def xor_bytes(a, b):
    cdef Py_ssize_t n = len(a)
    if n != len(b):
        raise ValueError(f"length mismatch: {n} != {len(b)}")
    cdef const unsigned char[:] va = memoryview(bytes(a)).cast("B")
    cdef const unsigned char[:] vb = memoryview(bytes(b)).cast("B")
    out = bytearray(n)
    cdef unsigned char[:] vo = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            vo[i] = va[i] ^ vb[i]
    return bytes(out)


def rref(rows, int ncols, int q, add, mul, inv, neg):
    cdef const int[:] tadd = add
    cdef const int[:] tmul = mul
    cdef const int[:] tinv = inv
    cdef const int[:] tneg = neg
    cdef int nrows = len(rows)
    cdef int *m = <int *> malloc(max(nrows * ncols, 1) * sizeof(int))
    if m == NULL:
        raise MemoryError()
    cdef int i, j, c, piv, top = 0, s, f, nf, tmp
    try:
        for i in range(nrows):
            r = rows[i]
            for j in range(ncols):
                m[i * ncols + j] = r[j]
        for c in range(ncols):
            if top == nrows:
                break
            piv = top
            while piv < nrows and m[piv * ncols + c] == 0:
                piv += 1
            if piv == nrows:
                continue
            if piv != top:
                for j in range(ncols):
                    tmp = m[top * ncols + j]
                    m[top * ncols + j] = m[piv * ncols + j]
                    m[piv * ncols + j] = tmp
            s = tinv[m[top * ncols + c]]
            if s != 1:
                for j in range(c, ncols):
                    m[top * ncols + j] = tmul[s * q + m[top * ncols + j]]
            for i in range(nrows):
                if i == top:
                    continue
                f = m[i * ncols + c]
                if f:
                    nf = tneg[f] * q
                    for j in range(c, ncols):
                        if m[top * ncols + j]:
                            m[i * ncols + j] = tadd[m[i * ncols + j] * q + tmul[nf + m[top * ncols + j]]]
            top += 1
        return tuple(tuple(m[i * ncols + j] for j in range(ncols)) for i in range(top))
    finally:
        free(m)
