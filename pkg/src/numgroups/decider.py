"""Verdict pipeline: trace-form guard, trace refutation, constructive certification."""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field as dc_field
from enum import Enum

from .exactfield import FieldElement, NumberField, UniPoly, is_algebraic_integer, is_in_OK, minimal_polynomial
from .linhull import SingularMatrixError, SquareMatrix, Word, algebra_basis, det
from .oklattice import (
    EuclideanOK,
    LatticeClosure,
    UnsupportedRingError,
    conjugate_and_verify,
    extract_basis,
    lattice_closure,
)

DEFAULT_MAX_WORD_LEN = 8
DEFAULT_MAX_ROUNDS = 16

DEGENERATE_REASON = "trace criterion hypothesis unmet: trace form degenerate"
UNSUPPORTED_REASON = "construction requires principal/Euclidean O_K branch"


class VerdictKind(str, Enum):
    NUMERICAL = "Numerical"
    NOT_NUMERICAL = "NotNumerical"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class GroupSpec:
    field: NumberField
    generators: list[SquareMatrix]
    labels: list[str] = dc_field(default_factory=list)

    def __post_init__(self):
        if not self.generators:
            raise ValueError("a group needs at least one generator")
        n = self.generators[0].n
        for k, g in enumerate(self.generators):
            if g.n != n:
                raise ValueError(f"generator {k} has dimension {g.n}, expected {n}")
            if g.field != self.field:
                raise ValueError(f"generator {k} is not over {self.field.name}")
            if not g.det():
                raise SingularMatrixError(f"generator {k} is not invertible")
        if not self.labels:
            self.labels = [chr(ord("A") + k) for k in range(len(self.generators))]
        if len(self.labels) != len(self.generators) or len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be distinct, one per generator")

    @property
    def n(self) -> int:
        return self.generators[0].n

    def conjugate(self, V: SquareMatrix) -> GroupSpec:
        """The group V g V^-1."""
        Vinv = V.inverse()
        return GroupSpec(self.field, [V @ g @ Vinv for g in self.generators], list(self.labels))


@dataclass
class Verdict:
    kind: VerdictKind
    completely_reducible: bool
    irreducible: bool
    realness: str
    algebra_dim: int
    gram_det: FieldElement
    conjugator: SquareMatrix | None = None
    conjugated_generators: list[SquareMatrix] | None = None
    witness_word: Word | None = None
    witness_trace: FieldElement | None = None
    witness_minpoly: UniPoly | None = None
    reason: str | None = None
    closure: LatticeClosure | None = None
    elements_searched: int = 0
    timings: dict[str, float] = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.kind is VerdictKind.NUMERICAL and self.conjugator is None:
            raise AssertionError("a Numerical verdict needs a verified conjugator")
        if self.witness_word is not None and self.conjugator is not None:
            raise AssertionError("a trace witness and a conjugator cannot coexist")


def classify_realness(spec: GroupSpec) -> str:
    field = spec.field
    if field.embedding is None:
        warnings.warn(f"{field.name} has no pinned embedding; reporting complex", stacklevel=2)
        return "complex"
    return "real" if field.is_real else "complex"


def _search(spec: GroupSpec, max_len: int) -> tuple[tuple[Word, FieldElement] | None, int]:
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    gens = spec.generators
    m = len(gens)
    mats = {k + 1: g for k, g in enumerate(gens)}
    mats.update({-(k + 1): g.inverse() for k, g in enumerate(gens)})
    order = list(range(1, m + 1)) + [-k for k in range(1, m + 1)]

    ident = SquareMatrix.identity(spec.field, spec.n)
    seen = {ident}
    integral: dict[FieldElement, bool] = {}
    frontier: list[tuple[tuple[int, ...], SquareMatrix]] = [((), ident)]
    for _ in range(max_len):
        nxt = []
        for letters, mat in frontier:
            last = letters[-1] if letters else 0
            for x in order:
                if x == -last:
                    continue
                prod = mat @ mats[x]
                if prod in seen:
                    continue
                seen.add(prod)
                tr = prod.trace()
                ok = integral.get(tr)
                if ok is None:
                    ok = integral[tr] = is_in_OK(tr)[0]
                word = letters + (x,)
                if not ok:
                    return (Word(word), tr), len(seen) - 1
                nxt.append((word, prod))
        frontier = nxt
        if not frontier:
            break
    return None, len(seen) - 1


def trace_witness_search(spec: GroupSpec, max_len: int = DEFAULT_MAX_WORD_LEN) -> tuple[Word, FieldElement] | None:
    """First reduced word (breadth-first) whose trace is not an algebraic integer.

    Words are extended on the right by each generator and then each inverse;
    words evaluating to an already-seen matrix are pruned.  A returned witness
    proves the group is not numerical; ``None`` proves nothing on its own.
    """
    return _search(spec, max_len)[0]


def certify(
    spec: GroupSpec,
    max_word_len: int = DEFAULT_MAX_WORD_LEN,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
) -> Verdict:
    """Decide, refute or certify that ``spec`` generates a numerical group.

    A trace witness gives NotNumerical.  Otherwise, over a supported ring,
    the invariant lattice is built and its basis used as a conjugator into
    GL(n, O_K), which gives Numerical only after verification.  Everything
    else is Inconclusive, with the reason attached.
    """
    t0 = time.perf_counter()
    verdict = _certify(spec, max_word_len, max_rounds)
    verdict.timings["total"] = time.perf_counter() - t0
    return verdict


def _certify(spec: GroupSpec, max_word_len: int, max_rounds: int) -> Verdict:
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    basis = algebra_basis(spec.generators)
    gdet = det(basis.gram)
    reducible_ok = bool(gdet)
    common = dict(
        completely_reducible=reducible_ok,
        irreducible=reducible_ok and basis.dim == spec.n**2,
        realness=classify_realness(spec),
        algebra_dim=basis.dim,
        gram_det=gdet,
        timings=timings,
    )
    t1 = time.perf_counter()
    timings["trace_form"] = t1 - t0

    witness, searched = _search(spec, max_word_len)
    t2 = time.perf_counter()
    timings["witness_search"] = t2 - t1
    common["elements_searched"] = searched
    if witness is not None:
        word, tr = witness
        mp = minimal_polynomial(tr)
        assert not is_algebraic_integer(tr), "integrality tests disagree"
        return Verdict(
            VerdictKind.NOT_NUMERICAL,
            witness_word=word,
            witness_trace=tr,
            witness_minpoly=mp,
            reason=f"trace of {word.render(spec.labels)} is not an algebraic integer",
            **common,
        )

    hedge = [] if reducible_ok else [DEGENERATE_REASON]
    try:
        ring = EuclideanOK(spec.field)
    except UnsupportedRingError:
        return Verdict(
            VerdictKind.INCONCLUSIVE,
            reason="; ".join(hedge + [UNSUPPORTED_REASON, f"no trace witness up to word length {max_word_len}"]),
            **common,
        )

    closure = lattice_closure(spec.generators, ring, max_rounds)
    timings["lattice_closure"] = time.perf_counter() - t2
    if not closure.stabilized:
        growth = "strictly growing" if closure.strictly_growing else "not strictly growing"
        return Verdict(
            VerdictKind.INCONCLUSIVE,
            reason="; ".join(
                hedge + [f"lattice closure did not stabilize within {max_rounds} rounds (denominators {growth})"]
            ),
            closure=closure,
            **common,
        )
    U = extract_basis(closure.module)
    conj = conjugate_and_verify(U, spec.generators)
    return Verdict(
        VerdictKind.NUMERICAL,
        conjugator=U,
        conjugated_generators=conj,
        closure=closure,
        reason=None if reducible_ok else "verified conjugator; " + DEGENERATE_REASON,
        **common,
    )


def word_trace(spec: GroupSpec, word: Word) -> FieldElement:
    return word.evaluate(spec.generators).trace()
