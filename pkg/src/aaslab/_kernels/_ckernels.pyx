# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled kernels: same contracts as ``_pykernels``.

Table lookups run at C speed; the count arithmetic stays on Python ints so
arbitrarily large values remain exact.
"""

import array

BACKEND = "c"


def commutator_counts(const int[::1] mul, const int[::1] inv, int n):
    cdef list counts = [0] * n
    cdef int a, b, t1, t2, c, ia_base, a_base
    cdef long long[::1] acc
    buf = array.array("q", bytes(8 * n))
    acc = buf
    for a in range(n):
        ia_base = inv[a] * n
        a_base = a * n
        for b in range(n):
            t1 = mul[ia_base + inv[b]]
            t2 = mul[a_base + b]
            c = mul[t1 * n + t2]
            acc[c] += 1
    for a in range(n):
        counts[a] = buf[a]
    return counts


def convolve(const int[::1] mul, int n, list vec_a, list vec_b):
    cdef list out = [0] * n
    cdef int i, j, k, base
    for i in range(n):
        ai = vec_a[i]
        if not ai:
            continue
        base = i * n
        for j in range(n):
            bj = vec_b[j]
            if bj:
                k = mul[base + j]
                out[k] = out[k] + ai * bj
    return out


def convolve_positions(const int[::1] mul, int n, list vec_a, const int[::1] positions):
    cdef list out = [0] * n
    cdef int i, t, k, base, npos = positions.shape[0]
    for i in range(n):
        ai = vec_a[i]
        if not ai:
            continue
        base = i * n
        for t in range(npos):
            k = mul[base + positions[t]]
            out[k] = out[k] + ai
    return out
