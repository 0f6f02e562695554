"""Compiled inner loop for the brute-force scan.

Mirrors :func:`apcert.necklace._walk` (post-order, i.e. cool-lex) with an
explicit stack, and scores each necklace with the step-weight formula from
:mod:`apcert.apcount`. Tests pin it against the pure-Python path.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _popcount(x: np.int64) -> np.int64:
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    return (x * 0x0101010101010101) >> 56 & 0xFF


@njit(cache=True)
def _rot(x: np.int64, r: np.int64, n: np.int64, full: np.int64) -> np.int64:
    r = r % n
    if r == 0:
        return x
    return ((x << r) | (x >> (n - r))) & full


@njit(cache=True)
def _is_necklace(x: np.int64, n: np.int64, full: np.int64) -> bool:
    for r in range(1, n):
        if _rot(x, r, n, full) < x:
            return False
    return True


@njit(cache=True)
def _score(x, n, k, full, steps, weights, scale):
    acc = 0
    for idx in range(steps.shape[0]):
        b = steps[idx]
        c = x
        for i in range(1, k):
            c &= _rot(x, i * b, n, full)
        acc += weights[idx] * _popcount(c)
    return acc // scale


@njit(cache=True)
def _first_child(s, t, g, glen, n, full):
    if s == 0:
        return t
    for i in range(t):
        cand = ((((1 << (t - i)) - 1) << (glen + i + 1)) | (((1 << i) - 1) << glen) | g)
        if _is_necklace(cand, n, full):
            return i
    return t


@njit(cache=True, nogil=True)
def scan(n, ones, k, steps, weights, scale, max_count):
    full = (np.int64(1) << n) - 1
    hist = np.zeros(max_count + 1, dtype=np.int64)
    best = np.int64(-1)
    witness = np.int64(0)
    depth = n + 2
    fs = np.zeros(depth, dtype=np.int64)
    ft = np.zeros(depth, dtype=np.int64)
    fg = np.zeros(depth, dtype=np.int64)
    fl = np.zeros(depth, dtype=np.int64)
    fi = np.zeros(depth, dtype=np.int64)
    fj = np.zeros(depth, dtype=np.int64)
    top = 0
    fs[0] = n - ones
    ft[0] = ones
    fg[0] = 0
    fl[0] = 0
    fi[0] = ones - 1
    fj[0] = _first_child(n - ones, ones, 0, 0, n, full)
    while top >= 0:
        s = fs[top]
        t = ft[top]
        g = fg[top]
        gl = fl[top]
        i = fi[top]
        if s > 0 and i >= fj[top]:
            fi[top] = i - 1
            ns = s - 1
            nt = t - i
            ng = (((np.int64(1) << i) - 1) << gl) | g
            nl = gl + i + 1
            top += 1
            fs[top] = ns
            ft[top] = nt
            fg[top] = ng
            fl[top] = nl
            fi[top] = nt - 1
            fj[top] = _first_child(ns, nt, ng, nl, n, full)
        else:
            x = (((np.int64(1) << t) - 1) << gl) | g
            c = _score(x, n, k, full, steps, weights, scale)
            hist[c] += 1
            if best < 0 or c < best:
                best = c
                witness = x
            top -= 1
    return best, witness, hist
