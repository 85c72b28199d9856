"""Pure-Python reference implementations of the hot kernels.

Every function here has a twin with the same signature in ``_kernels.pyx``;
``designcoded._accel`` picks one at import time.
"""

from __future__ import annotations

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK = 0xFFFFFFFFFFFFFFFF


def fnv1a64(data, h=FNV_OFFSET):
    """64-bit FNV-1a of ``data`` continuing from state ``h``."""
    for byte in bytes(data):
        h = ((h ^ byte) * FNV_PRIME) & _MASK
    return h


def xor_bytes(a, b):
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} != {len(b)}")
    n = len(a)
    return (int.from_bytes(a, "little") ^ int.from_bytes(b, "little")).to_bytes(n, "little")


def rref(rows, ncols, q, add, mul, inv, neg):
    """Reduced row-echelon form over GF(q); zero rows are dropped.

    ``add`` and ``mul`` are flat ``q*q`` tables, ``inv`` and ``neg`` length-q
    tables.  Returns a tuple of row tuples.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    top = 0
    for c in range(ncols):
        if top == nrows:
            break
        piv = top
        while piv < nrows and m[piv][c] == 0:
            piv += 1
        if piv == nrows:
            continue
        m[top], m[piv] = m[piv], m[top]
        prow = m[top]
        s = inv[prow[c]]
        if s != 1:
            for j in range(c, ncols):
                prow[j] = mul[s * q + prow[j]]
        for i in range(nrows):
            if i == top:
                continue
            row = m[i]
            f = row[c]
            if f:
                nf = neg[f] * q
                for j in range(c, ncols):
                    if prow[j]:
                        row[j] = add[row[j] * q + mul[nf + prow[j]]]
        top += 1
    return tuple(tuple(r) for r in m[:top])
