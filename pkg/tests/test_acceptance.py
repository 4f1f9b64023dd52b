"""The nine acceptance criteria, each reported as one pass/fail line."""

from __future__ import annotations

import json
import random
import time

import sympy as sp

from numgroups._backend import QQ
from numgroups.cli import main
from numgroups.decider import GroupSpec, VerdictKind, certify, trace_witness_search
from numgroups.exactfield import is_algebraic_integer, is_in_OK, quadratic_field, rational_field
from numgroups.fricke import commutator_poly, eval_trace_poly, hecke_value, pi_lambda, random_reduced_words, word_trace_poly
from numgroups.linhull import SquareMatrix, algebra_basis, det, dual_basis, trace_form
from numgroups.oklattice import EuclideanOK, lattice_closure
from numgroups.specfile import bundled_names, load_bundled

from .hnf_checks import check_hnf, random_rows
from .oracles import generic_sl2, trace_poly_expr, word_trace_symbolic

Q = rational_field()


def cli_json(capsys, *argv):
    code = main([*argv, "--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_criterion_1_picard_certified(acceptance, capsys):
    with acceptance(1, "Pi(i) over Q(i) certified Numerical, Z[i] conjugates of det 1, < 5 s") as rec:
        t0 = time.perf_counter()
        code, rep = cli_json(capsys, "certify", "builtin:picard")
        elapsed = time.perf_counter() - t0
        rec.detail = f"{elapsed:.2f}s"
        assert code == 0 and rep["verdict"] == "Numerical"
        assert elapsed < 5
        K = quadratic_field(-1)
        for rows in rep["conjugated_generators"].values():
            h = SquareMatrix(K, [[K.element(e) for e in row] for row in rows])
            assert all(is_in_OK(x)[0] for x in h.entries())
            assert h.det() == 1
        U = rep["conjugator"]
        assert U == [[["1", "0"], ["0", "0"]], [["0", "0"], ["1", "0"]]]


def test_criterion_2_rational_lambda_witness(acceptance):
    with acceptance(2, "Pi(1/2), Pi(5/2) NotNumerical via AB with trace lambda, < 1 s") as rec:
        t0 = time.perf_counter()
        for lam in (QQ(1, 2), QQ(5, 2)):
            v = certify(pi_lambda(Q, lam))
            assert v.kind is VerdictKind.NOT_NUMERICAL
            assert len(v.witness_word) == 2 and v.witness_word.render(["A", "B"]) == "AB"
            assert v.witness_trace == lam
        elapsed = time.perf_counter() - t0
        rec.detail = f"{elapsed:.3f}s"
        assert elapsed < 1


def test_criterion_3_unipotent(acceptance, capsys):
    with acceptance(3, "unipotent: r = 2, det(gram) = 0, still Numerical with conjugator Id"):
        code, rep = cli_json(capsys, "traceform", "builtin:unipotent")
        assert code == 0
        assert rep["algebra_dim"] == 2 and rep["gram_det"] == ["0"] and rep["classification"] == "degenerate"
        v = certify(load_bundled("unipotent"))
        assert v.kind is VerdictKind.NUMERICAL and v.conjugator.is_identity()
        assert not v.completely_reducible


def test_criterion_4_proposition_sweep(acceptance):
    with acceptance(4, "lambda sweep agrees with 'numerical iff lambda algebraic integer', < 60 s") as rec:
        Ki, K2, K5 = quadratic_field(-1), quadratic_field(-2), quadratic_field(-5)
        integral = [
            Q(1),
            hecke_value(4).lam,
            hecke_value(5).lam,
            hecke_value(7).lam,
            Ki.gen(),
            K2.gen(),
            K5.gen(),
        ]
        fractional = [Q(QQ(1, 2)), Q(QQ(5, 2)), Q(QQ(3, 7)), Ki.gen() / 2]
        t0 = time.perf_counter()
        for lam in integral:
            assert is_algebraic_integer(lam)
            assert trace_witness_search(pi_lambda(lam.field, lam), 8) is None, lam
        for lam in fractional:
            assert not is_algebraic_integer(lam)
            found = trace_witness_search(pi_lambda(lam.field, lam), 8)
            assert found is not None and len(found[0]) <= 2, lam
        elapsed = time.perf_counter() - t0
        rec.detail = f"{elapsed:.2f}s"
        assert elapsed < 60


def test_criterion_5_conjugation_stress(acceptance):
    with acceptance(5, "50 random rational conjugates of Pi(i) certified and verified, < 120 s") as rec:
        rng = random.Random(20240605)
        spec = pi_lambda(quadratic_field(-1), quadratic_field(-1).gen())
        K = spec.field
        t0 = time.perf_counter()
        count = 0
        while count < 50:
            V = SquareMatrix(K, [[QQ(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(2)] for _ in range(2)])
            if not V.det():
                continue
            conj = spec.conjugate(V)
            v = certify(conj)
            assert v.kind is VerdictKind.NUMERICAL
            Uinv = v.conjugator.inverse()
            for g, h in zip(conj.generators, v.conjugated_generators):
                assert Uinv @ g @ v.conjugator == h
                assert all(is_in_OK(x)[0] for x in h.entries())
                d = h.det()
                assert is_algebraic_integer(d) and is_algebraic_integer(d.inverse())
                assert h.trace() == g.trace()
            for g0, g in zip(spec.generators, conj.generators):
                assert g0.trace() == g.trace()
            count += 1
        elapsed = time.perf_counter() - t0
        rec.detail = f"{elapsed:.2f}s"
        assert elapsed < 120


def test_criterion_6_fricke_oracle(acceptance):
    with acceptance(6, "200 random words: trace polynomial equals product trace; commutator oracle"):
        K = quadratic_field(5)
        rng = random.Random(6)

        def el():
            return K.element([QQ(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(2)])

        def sl2():
            M = SquareMatrix.identity(K, 2)
            for _ in range(2):
                M = M @ SquareMatrix(K, [[1, el()], [0, 1]]) @ SquareMatrix(K, [[1, 0], [el(), 1]])
            return M

        checked = 0
        for _ in range(10):
            A, B = sl2(), sl2()
            assert A.det() == 1 and B.det() == 1
            spec = GroupSpec(K, [A, B])
            for word in random_reduced_words(rng, 20, 10):
                assert eval_trace_poly(word_trace_poly(word), spec) == word.evaluate([A, B]).trace()
                checked += 1
        assert checked == 200
        A, B = generic_sl2()
        x, y, z = A.trace(), B.trace(), (A * B).trace()
        brute = word_trace_symbolic((1, 2, -1, -2))
        assert sp.simplify(brute - (x**2 + y**2 + z**2 - x * y * z - 2)) == 0
        assert sp.simplify(trace_poly_expr(commutator_poly()) - brute) == 0


def test_criterion_7_hnf_properties(acceptance):
    with acceptance(7, "HNF over Z and Z[i] on 500 random matrices: span, idempotence, det up to unit, < 30 s") as rec:
        rng = random.Random(7)
        rings = [EuclideanOK(Q), EuclideanOK(quadratic_field(-1))]
        t0 = time.perf_counter()
        failures = []
        for k in range(500):
            ring = rings[k % 2]
            rows = random_rows(ring, rng, square=k % 4 < 2)
            failures += check_hnf(rows, ring)
        elapsed = time.perf_counter() - t0
        rec.detail = f"{elapsed:.2f}s"
        assert failures == []
        assert elapsed < 30


def test_criterion_8_divergence(acceptance):
    with acceptance(8, "Pi(1/2) closure diverges with strictly growing denominators over 16 rounds") as rec:
        spec = pi_lambda(Q, QQ(1, 2))
        c = lattice_closure(spec.generators, EuclideanOK(Q), max_rounds=16)
        rec.detail = f"denominators {c.denominators[:4]}...{c.denominators[-1]}"
        assert c.diverged and c.rounds == 16 and c.strictly_growing
        for L in (1, 2, 8):
            assert certify(spec, max_word_len=L).kind is not VerdictKind.NUMERICAL


def test_criterion_9_dual_basis(acceptance):
    with acceptance(9, "dual-basis identity on every bundled irreducible spec") as rec:
        names = []
        for name in bundled_names():
            spec = load_bundled(name)
            basis = algebra_basis(spec.generators)
            if not (basis.dim == spec.n**2 and det(basis.gram)):
                continue
            names.append(name)
            duals = dual_basis(basis)
            for i, d in enumerate(duals):
                for j, b in enumerate(basis.matrices):
                    assert trace_form(d, b) == (1 if i == j else 0)
        rec.detail = ", ".join(names)
        assert len(names) >= 8
