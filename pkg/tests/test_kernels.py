from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from numgroups import _kernel_py
from numgroups._backend import KERNEL, ZERO

from .conftest import builtin_fields, elements

compiled = pytest.importorskip("numgroups._kernel")


def matrices(K, n):
    return st.lists(elements(K, 9, 7), min_size=n * n, max_size=n * n).map(
        lambda xs: tuple(tuple(xs[i * n + j].coords for j in range(n)) for i in range(n))
    )


field_matrices = st.sampled_from(builtin_fields()).flatmap(
    lambda K: st.integers(1, 3).flatmap(lambda n: st.tuples(st.just(K), matrices(K, n), matrices(K, n)))
)


def test_compiled_kernel_selected_by_default():
    assert KERNEL in ("cython", "python")


@settings(max_examples=200, deadline=None)
@given(field_matrices)
def test_kernels_agree(kab):
    K, A, B = kab
    assert compiled.matmul_coords(A, B, K._red, ZERO) == _kernel_py.matmul_coords(A, B, K._red, ZERO)
    a, b = A[0][0], B[0][0]
    assert compiled.mul_coords(a, b, K._red, ZERO) == _kernel_py.mul_coords(a, b, K._red, ZERO)
