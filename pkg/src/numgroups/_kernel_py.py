"""Pure-Python coordinate kernels; ``_kernel.pyx`` is the compiled twin with the same API.

Field elements are coordinate tuples in the power basis.  ``red[k]`` holds
the coordinates of t^k reduced modulo the defining polynomial.
"""


def _reduce(conv, red, d):
    out = conv[:d]
    for k in range(d, len(conv)):
        ck = conv[k]
        if ck:
            row = red[k]
            for j in range(d):
                if row[j]:
                    out[j] += ck * row[j]
    return tuple(out)


def mul_coords(a, b, red, zero):
    d = len(a)
    if d == 1:
        return (a[0] * b[0],)
    conv = [zero] * (2 * d - 1)
    for i in range(d):
        x = a[i]
        if x:
            for j in range(d):
                y = b[j]
                if y:
                    conv[i + j] += x * y
    return _reduce(conv, red, d)


def matmul_coords(A, B, red, zero):
    """Product of square matrices whose entries are coordinate tuples.

    Each entry accumulates the unreduced convolution over the inner index and
    is reduced once.
    """
    n = len(A)
    d = len(A[0][0])
    width = 2 * d - 1
    out = []
    for i in range(n):
        Ai = A[i]
        row = []
        for j in range(n):
            conv = [zero] * width
            for k in range(n):
                x = Ai[k]
                y = B[k][j]
                for p in range(d):
                    xp = x[p]
                    if xp:
                        for q in range(d):
                            yq = y[q]
                            if yq:
                                conv[p + q] += xp * yq
            row.append(_reduce(conv, red, d) if d > 1 else (conv[0],))
        out.append(tuple(row))
    return tuple(out)
