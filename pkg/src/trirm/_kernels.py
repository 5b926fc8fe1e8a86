"""Compiled inner loops for exhaustive codeword enumeration.

A row space of dimension ``k`` is walked in p-ary modular Gray-code order:
moving from index ``s-1`` to ``s`` adds generator row ``v_p(s)`` (the
p-adic valuation of ``s``) once, so each step costs one fused
add-reduce-count pass over the word.
"""

from __future__ import annotations

import numba
import numpy as np


def _make_gray_kernel(T):
    @numba.njit(nogil=True, cache=True, boundscheck=False)
    def kernel(G, p, start, stop, hist):
        k, n = G.shape
        pp = T(p)
        v = np.zeros(n, dtype=G.dtype)
        # Gray digit i of index t is (b_i - b_{i+1}) mod p for base-p digits b
        t = start
        prev = t % p
        t //= p
        for i in range(k):
            nxt = t % p
            t //= p
            c = (prev - nxt) % p
            for _ in range(c):
                for x in range(n):
                    s = T(v[x] + G[i, x])
                    v[x] = T(s - pp * T(s >= pp))
            prev = nxt
        w = 0
        for x in range(n):
            w += np.int64(v[x] != 0)
        hist[w] += 1
        for step in range(start + 1, stop):
            j = 0
            q = step
            while q % p == 0:
                q //= p
                j += 1
            w = 0
            for x in range(n):
                s = T(v[x] + G[j, x])
                s = T(s - pp * T(s >= pp))
                v[x] = s
                w += np.int64(s != 0)
            hist[w] += 1

    return kernel


_gray_u8 = _make_gray_kernel(np.uint8)
_gray_u16 = _make_gray_kernel(np.uint16)


def gray_weight_histogram(G: np.ndarray, p: int, start: int, stop: int) -> np.ndarray:
    """Hamming-weight histogram of the words with Gray indices in ``[start, stop)``.

    ``G`` must have linearly independent rows over F_p.
    """
    k, n = G.shape
    hist = np.zeros(n + 1, dtype=np.int64)
    if stop <= start:
        return hist
    if k == 0:
        hist[0] = 1
        return hist
    if p < 128:
        _gray_u8(np.ascontiguousarray(G, dtype=np.uint8), p, start, stop, hist)
    else:
        _gray_u16(np.ascontiguousarray(G, dtype=np.uint16), p, start, stop, hist)
    return hist
