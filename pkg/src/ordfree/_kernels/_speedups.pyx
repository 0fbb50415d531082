# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels.  Contracts match ``ordfree._kernels._pure``."""

from libc.stdlib cimport malloc, free
from math import gcd


def pl_apply(tuple table, object n, object d):
    cdef tuple xn = table[0]
    cdef tuple xd = table[1]
    cdef Py_ssize_t last = len(xn) - 1
    cdef Py_ssize_t lo, hi, mid
    if n * xd[0] < xn[0] * d or n * xd[last] > xn[last] * d:
        return n, d
    lo = 0
    hi = last
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if xn[mid] * d <= n * xd[mid]:
            lo = mid
        else:
            hi = mid
    cdef object a = (<tuple>table[2])[lo]
    cdef object b = (<tuple>table[3])[lo]
    cdef object c = (<tuple>table[4])[lo]
    cdef object e = (<tuple>table[5])[lo]
    cdef object num = a * n * e + c * b * d
    cdef object den = b * e * d
    cdef object g = gcd(num, den)
    return num // g, den // g


def search_relation(list letters, int max_len):
    cdef int nl = len(letters)
    if nl == 0:
        return None
    cdef int width = len(letters[0])
    cdef int *lt = <int *> malloc(nl * width * sizeof(int))
    cdef int *prods = <int *> malloc((max_len + 1) * width * sizeof(int))
    cdef int *word = <int *> malloc((max_len + 1) * sizeof(int))
    cdef int *choice = <int *> malloc((max_len + 1) * sizeof(int))
    cdef int i, k, depth, length, ok
    cdef int *p
    cdef int *q
    cdef int *r
    try:
        for k in range(nl):
            row = letters[k]
            for i in range(width):
                lt[k * width + i] = row[i]
        for i in range(width):
            prods[i] = i
        for length in range(1, max_len + 1):
            for i in range(length):
                choice[i] = -1
            depth = 0
            while depth >= 0:
                choice[depth] += 1
                k = choice[depth]
                if depth > 0 and k < nl and k == (word[depth - 1] ^ 1):
                    choice[depth] += 1
                    k += 1
                if k >= nl:
                    choice[depth] = -1
                    depth -= 1
                    continue
                word[depth] = k
                p = prods + depth * width
                q = lt + k * width
                r = prods + (depth + 1) * width
                for i in range(width):
                    r[i] = p[q[i]]
                if depth + 1 == length:
                    ok = 1
                    for i in range(width):
                        if r[i] != i:
                            ok = 0
                            break
                    if ok:
                        return [word[i] for i in range(length)]
                    continue
                depth += 1
        return None
    finally:
        free(lt)
        free(prods)
        free(word)
        free(choice)
