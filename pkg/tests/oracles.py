"""Independent reference computations built on sympy.

Nothing here calls into numgroups arithmetic: elements are rebuilt as sympy
algebraic expressions from their rational coordinates and an explicit
closed form for the field generator.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import sympy as sp
from sympy.matrices.normalforms import smith_normal_form

X = sp.Symbol("x")


def generator_expr(field) -> sp.Expr:
    """Closed form of the pinned root of the defining polynomial."""
    coeffs = [sp.Rational(str(c)) for c in field.defining_poly.coeffs]
    if len(coeffs) == 2:
        return -coeffs[0]
    target = field.embedding
    if len(coeffs) == 3 and coeffs[1] == 0:
        root = sp.sqrt(-coeffs[0])
        return root if abs(complex(sp.N(root)) - target) < 1e-6 else -root
    t = sp.Symbol("t")
    poly = sp.Poly(sum(c * t**k for k, c in enumerate(coeffs)), t)
    return min(poly.all_roots(), key=lambda r: abs(complex(sp.N(r, 30)) - target))


def to_expr(element, root=None) -> sp.Expr:
    root = generator_expr(element.field) if root is None else root
    return sum((sp.Rational(str(c)) * root**k for k, c in enumerate(element.coords)), sp.Integer(0))


def minpoly_coeffs(element) -> list[sp.Rational]:
    """Monic minimal polynomial, low degree first."""
    p = sp.Poly(sp.minimal_polynomial(to_expr(element), X), X)
    cs = [sp.Rational(c) for c in reversed(p.all_coeffs())]
    return [c / cs[-1] for c in cs]


def is_algebraic_integer_ref(element) -> bool:
    return all(c.q == 1 for c in minpoly_coeffs(element))


def hecke_minpoly_ref(q: int) -> list[sp.Rational]:
    p = sp.Poly(sp.minimal_polynomial(2 * sp.cos(sp.pi / q), X), X)
    return [sp.Rational(c) for c in reversed(p.all_coeffs())]


def matrix_expr(m, root=None) -> sp.Matrix:
    root = generator_expr(m.field) if root is None else root
    return sp.Matrix([[to_expr(x, root) for x in row] for row in m.rows])


def hull_dimension_ref(generators, max_len: int = 4) -> int:
    """Rank of all words of length <= max_len in generators and inverses (no pruning)."""
    root = generator_expr(generators[0].field)
    mats = [matrix_expr(g, root) for g in generators]
    letters = mats + [m.inv() for m in mats]
    n = mats[0].shape[0]
    vecs = [list(sp.eye(n))]
    for length in range(1, max_len + 1):
        for word in product(letters, repeat=length):
            prod = sp.eye(n)
            for m in word:
                prod = prod * m
            vecs.append([sp.nsimplify(sp.expand(x)) for x in prod])
    return sp.Matrix(vecs).rank(simplify=True)


@lru_cache(maxsize=None)
def generic_sl2():
    """Two symbolic SL(2) matrices with entries in Q(a, b, c, e, f, g)."""
    a, b, c, e, f, g = sp.symbols("a b c e f g")
    A = sp.Matrix([[a, b], [c, (1 + b * c) / a]])
    B = sp.Matrix([[e, f], [g, (1 + f * g) / e]])
    return A, B


def word_trace_symbolic(letters) -> sp.Expr:
    A, B = generic_sl2()
    mats = {1: A, 2: B, -1: A.inv(), -2: B.inv()}
    W = sp.eye(2)
    for x in letters:
        W = W * mats[x]
    return sp.simplify(W.trace())


def trace_poly_expr(poly) -> sp.Expr:
    A, B = generic_sl2()
    x, y, z = A.trace(), B.trace(), (A * B).trace()
    return sum(sp.Rational(str(c)) * x**i * y**j * z**k for (i, j, k), c in poly.terms.items())


def z_lattice_invariants(int_rows) -> tuple[int, int]:
    """(rank, product of nonzero Smith invariant factors) of the Z-row-span of an integer matrix.

    Two lattices with one contained in the other are equal exactly when both numbers agree.
    """
    M = sp.Matrix(int_rows)
    if M.rows == 0:
        return 0, 1
    snf = smith_normal_form(M, domain=sp.ZZ)
    diag = [snf[i, i] for i in range(min(snf.shape)) if snf[i, i] != 0]
    return len(diag), int(abs(sp.prod(diag)))
