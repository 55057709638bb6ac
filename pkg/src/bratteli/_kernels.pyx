# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled word enumeration kernels; same results as ``_kernels_py``."""

from libc.stdlib cimport malloc, free


def pair_mask(word, int d):
    cdef unsigned long long mask = 0
    cdef Py_ssize_t i, n = len(word)
    cdef int x, y
    for i in range(n - 1):
        x = word[i]
        y = word[i + 1]
        mask |= (<unsigned long long>1) << (x * d + y)
    return mask


cdef void _walk(int *left, int d, int total, int placed, int prev, int first,
                unsigned long long mask, dict out):
    cdef int x
    cdef object key
    if placed == total:
        key = (first, prev, mask)
        out[key] = out.get(key, 0) + 1
        return
    for x in range(d):
        if left[x]:
            left[x] -= 1
            _walk(left, d, total, placed + 1, x, first,
                  mask | ((<unsigned long long>1) << (prev * d + x)), out)
            left[x] += 1


def word_signatures(counts):
    cdef int d = len(counts)
    cdef int total = 0
    cdef int x
    cdef dict out = {}
    if d * d > 64:
        raise ValueError("at most 8 letters fit the pair mask")
    cdef int *left = <int *>malloc(d * sizeof(int))
    try:
        for x in range(d):
            left[x] = counts[x]
            total += left[x]
        if total == 0:
            return out
        for x in range(d):
            if left[x]:
                left[x] -= 1
                _walk(left, d, total, 1, x, x, 0, out)
                left[x] += 1
    finally:
        free(left)
    return out


def iter_words(counts):
    from ._kernels_py import iter_words as _iter
    return _iter(counts)
