"""Pure-Python reference implementations of the hot kernels.

All three functions work on a flattened multiplication table ``mul`` where
``mul[i*n + j]`` is the index of the product of elements ``i`` and ``j``.
Counts are plain Python ints so they never overflow.
"""

from __future__ import annotations

BACKEND = "python"


def commutator_counts(mul, inv, n):
    """counts[c] = number of pairs (a, b) whose commutator a'b'ab equals c."""
    counts = [0] * n
    for a in range(n):
        ia_base = inv[a] * n
        a_base = a * n
        for b in range(n):
            t1 = mul[ia_base + inv[b]]
            t2 = mul[a_base + b]
            counts[mul[t1 * n + t2]] += 1
    return counts


def convolve(mul, n, vec_a, vec_b):
    """Group-algebra product: out[mul[i,j]] += a[i] * b[j]."""
    out = [0] * n
    for i in range(n):
        ai = vec_a[i]
        if not ai:
            continue
        base = i * n
        for j in range(n):
            bj = vec_b[j]
            if bj:
                k = mul[base + j]
                out[k] += ai * bj
    return out


def convolve_positions(mul, n, vec_a, positions):
    """Group-algebra product with a 0/1 vector given by its support."""
    out = [0] * n
    for i in range(n):
        ai = vec_a[i]
        if not ai:
            continue
        base = i * n
        for p in positions:
            out[mul[base + p]] += ai
    return out
