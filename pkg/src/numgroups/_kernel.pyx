# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled coordinate kernels, same API as ``_kernel_py``."""


cdef tuple _reduce(list conv, tuple red, Py_ssize_t d):
    cdef list out = conv[:d]
    cdef Py_ssize_t k, j
    cdef tuple row
    for k in range(d, len(conv)):
        ck = conv[k]
        if ck:
            row = <tuple>red[k]
            for j in range(d):
                rj = row[j]
                if rj:
                    out[j] = out[j] + ck * rj
    return tuple(out)


def mul_coords(tuple a, tuple b, tuple red, zero):
    cdef Py_ssize_t d = len(a)
    cdef Py_ssize_t i, j
    if d == 1:
        return (a[0] * b[0],)
    cdef list conv = [zero] * (2 * d - 1)
    for i in range(d):
        x = a[i]
        if x:
            for j in range(d):
                y = b[j]
                if y:
                    conv[i + j] = conv[i + j] + x * y
    return _reduce(conv, red, d)


def matmul_coords(tuple A, tuple B, tuple red, zero):
    cdef Py_ssize_t n = len(A)
    cdef Py_ssize_t d = len(A[0][0])
    cdef Py_ssize_t width = 2 * d - 1
    cdef Py_ssize_t i, j, k, p, q
    cdef list out = [], row, conv
    cdef tuple Ai, x, y
    for i in range(n):
        Ai = <tuple>A[i]
        row = []
        for j in range(n):
            conv = [zero] * width
            for k in range(n):
                x = <tuple>Ai[k]
                y = <tuple>(<tuple>B[k])[j]
                for p in range(d):
                    xp = x[p]
                    if xp:
                        for q in range(d):
                            yq = y[q]
                            if yq:
                                conv[p + q] = conv[p + q] + xp * yq
            row.append(_reduce(conv, red, d) if d > 1 else (conv[0],))
        out.append(tuple(row))
    return tuple(out)
