from __future__ import annotations

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from numgroups._backend import QQ
from numgroups.exactfield import quadratic_field, rational_field
from numgroups.fricke import pi_lambda
from numgroups.linhull import (
    DegenerateFormError,
    SingularMatrixError,
    SpanTracker,
    SquareMatrix,
    Word,
    algebra_basis,
    dual_basis,
    elementary_matrices,
    gram_determinant,
    gram_matrix,
    inverse,
    is_completely_reducible,
    mat_ops,
    trace_form,
)

from .conftest import builtin_fields, elements
from .oracles import hull_dimension_ref

Q = rational_field()
Ki = quadratic_field(-1)


def unipotent():
    return [SquareMatrix(Q, [[1, 1], [0, 1]])]


def matrices(K, n=2):
    return st.lists(elements(K, 5, 4), min_size=n * n, max_size=n * n).map(
        lambda xs: SquareMatrix(K, [xs[i * n : (i + 1) * n] for i in range(n)])
    )


def test_mat_ops_examples():
    A = SquareMatrix(Q, [[0, -1], [1, 0]])
    assert mat_ops(SquareMatrix.identity(Q, 2), None, "trace") == 2
    assert mat_ops(A, None, "inverse") == SquareMatrix(Q, [[0, 1], [-1, 0]])
    assert mat_ops(A, None, "det") == 1
    lam = Ki.gen()
    spec = pi_lambda(Ki, lam)
    A, B = spec.generators
    assert mat_ops(A, B, "mul").trace() == lam


def test_mat_ops_errors():
    with pytest.raises(SingularMatrixError):
        SquareMatrix(Q, [[1, 2], [2, 4]]).inverse()
    with pytest.raises(ValueError):
        SquareMatrix(Q, [[1]]) @ SquareMatrix(Q, [[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        SquareMatrix(Q, [[1]]) @ SquareMatrix(Ki, [[1]])


def test_word_parsing_and_reduction():
    w = Word.parse("ABA^-1B⁻¹", ["A", "B"])
    assert w.letters == (1, 2, -1, -2)
    assert w.render(["A", "B"]) == "ABA^-1B^-1"
    assert Word((1, -1, 2)).freely_reduce() == Word((2,))
    assert not Word((1, -1)).reduced
    assert Word.parse("1", ["A"]).letters == ()


def test_span_tracker_coordinates():
    s = SpanTracker(3)
    one = Q.one()
    assert s.insert([one, Q(2), Q(0)])
    assert s.insert([Q(0), one, one])
    assert not s.insert([one, Q(3), one])
    assert s.coordinates([Q(2), Q(5), one]) == [2, 1]
    assert s.rank == 2


def test_hull_of_identity():
    b = algebra_basis([SquareMatrix.identity(Q, 2)])
    assert b.dim == 1 and b.matrices == [SquareMatrix.identity(Q, 2)]
    assert gram_matrix(b) == [[Q(2)]]
    assert is_completely_reducible(b)
    duals = dual_basis(b)
    assert duals == [SquareMatrix.identity(Q, 2).scale(QQ(1, 2))]


def test_hull_of_picard_group():
    b = algebra_basis(pi_lambda(Ki, Ki.gen()).generators)
    assert b.dim == 4 and b.is_full
    assert [w.render(["A", "B"]) for w in b.words] == ["1", "A", "B", "BA"]
    g = gram_matrix(b)
    assert all(g[i][j] == g[j][i] for i in range(4) for j in range(4))
    assert gram_determinant(b) == -1
    assert is_completely_reducible(b)


def test_unipotent_trace_form_is_degenerate():
    b = algebra_basis(unipotent())
    assert b.dim == 2
    assert b.matrices == [SquareMatrix.identity(Q, 2), unipotent()[0]]
    assert gram_matrix(b) == [[2, 2], [2, 2]]
    assert gram_determinant(b) == 0
    assert not is_completely_reducible(b)
    with pytest.raises(DegenerateFormError):
        dual_basis(b)


def test_singular_generator_rejected():
    with pytest.raises(SingularMatrixError):
        algebra_basis([SquareMatrix(Q, [[1, 1], [1, 1]])])


@pytest.mark.parametrize(
    "lam_str, field_d",
    [("1", None), ("1/2", None), ("5/2", None), ("i", -1), ("sqrt5", 5)],
)
def test_gram_determinant_of_pi_lambda(lam_str, field_d):
    # the Gram matrix of {1, A, B, BA} with symbolic lambda has determinant -lambda^4 (checked in sympy)
    if field_d is None:
        K = Q
        lam = K(QQ(lam_str))
    else:
        K = quadratic_field(field_d)
        lam = K.gen()
    b = algebra_basis(pi_lambda(K, lam).generators)
    assert gram_determinant(b) == -(lam**4)


@pytest.mark.parametrize("d, lam_coords", [(-1, [0, 1]), (5, [QQ(1, 2), QQ(1, 2)]), (-2, [0, 1])])
def test_hull_dimension_matches_reference(d, lam_coords):
    K = quadratic_field(d)
    gens = pi_lambda(K, K.element(lam_coords)).generators
    assert algebra_basis(gens).dim == hull_dimension_ref(gens, max_len=3)


def test_hull_dimension_reference_reducible():
    gens = [SquareMatrix(Q, [[1, 1, 0], [0, 1, 0], [0, 0, 2]])]
    assert algebra_basis(gens).dim == hull_dimension_ref(gens, max_len=3) == 3


@pytest.mark.parametrize("K", builtin_fields()[:4], ids=lambda K: K.name)
def test_full_hull_spans_elementary_matrices(K):
    b = algebra_basis(pi_lambda(K, K.one()).generators)
    span = b.span()
    assert b.is_full
    for E in elementary_matrices(K, 2):
        assert span.contains(E.vectorize())


def test_hull_is_multiplication_stable():
    for gens in (pi_lambda(Ki, Ki.gen()).generators, unipotent(), [SquareMatrix(Q, [[2, 0, 0], [0, 1, 1], [0, 0, 1]])]):
        b = algebra_basis(gens)
        span = b.span()
        for g in list(gens) + [g.inverse() for g in gens]:
            for m in b.matrices:
                assert span.contains((g @ m).vectorize())


def test_dual_basis_pairing_and_reduality():
    b = algebra_basis(pi_lambda(Ki, Ki.gen()).generators)
    duals = dual_basis(b)
    for i, d in enumerate(duals):
        for j, m in enumerate(b.matrices):
            assert trace_form(d, m) == (1 if i == j else 0)
    # duals span the same space, and dualizing again returns the basis
    span = b.span()
    assert all(span.contains(d.vectorize()) for d in duals)
    gram_d = [[trace_form(x, y) for y in duals] for x in duals]
    back = inverse(gram_d)
    for i, m in enumerate(b.matrices):
        s = SquareMatrix.identity(Ki, 2).scale(0)
        for j, d in enumerate(duals):
            s = s + d.scale(back[i][j])
        assert s == m


@settings(max_examples=80, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from(builtin_fields()[:6]).flatmap(lambda K: st.tuples(matrices(K), matrices(K))))
def test_trace_is_conjugation_invariant(pair):
    U, A = pair
    if not U.det():
        return
    assert (U @ A @ U.inverse()).trace() == A.trace()
    assert (U @ U.inverse()).is_identity()
    assert (U @ A).det() == U.det() * A.det()
