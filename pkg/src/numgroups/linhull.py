"""Exact matrices over a number field, the linear hull of a matrix group, and its trace form."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from ._backend import ZERO, kernel
from .exactfield import FieldElement, FieldMismatchError, NumberField


class SingularMatrixError(ZeroDivisionError):
    pass


class DegenerateFormError(ValueError):
    """The trace form restricted to the algebra is degenerate."""


# ---------------------------------------------------------------------------
# Generic exact linear algebra over K (lists of FieldElements)


def det(rows: Sequence[Sequence[FieldElement]]) -> FieldElement:
    """Determinant by elimination with first-nonzero pivots."""
    n = len(rows)
    a = [list(r) for r in rows]
    K = a[0][0].field
    result = K.one()
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return K.zero()
        if p != c:
            a[c], a[p] = a[p], a[c]
            result = -result
        piv = a[c][c]
        result = result * piv
        inv = piv.inverse()
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y if j > c else x for j, (x, y) in enumerate(zip(a[i], a[c]))]
    return result


def inverse(rows: Sequence[Sequence[FieldElement]]) -> list[list[FieldElement]]:
    """Gauss-Jordan inverse; raises SingularMatrixError."""
    n = len(rows)
    K = rows[0][0].field
    zero, one = K.zero(), K.one()
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c]), None)
        if p is None:
            raise SingularMatrixError("matrix is singular")
        aug[c], aug[p] = aug[p], aug[c]
        inv = aug[c][c].inverse()
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


class SpanTracker:
    """Incremental echelon basis of a K-subspace of K^N.

    ``insert`` adds a vector if it enlarges the span; ``coordinates`` expresses
    a vector in terms of the inserted ones (or returns None if outside).
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: list[list[FieldElement]] = []  # echelon rows, pivot entry 1
        self._combos: list[list[FieldElement]] = []  # row = sum combo[k] * inserted[k]
        self._pivots: list[int] = []
        self.count = 0

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _reduce(self, vec: Sequence[FieldElement]):
        v = list(vec)
        K = v[0].field
        combo = [K.zero()] * self.count
        for row, c, piv in zip(self._rows, self._combos, self._pivots):
            f = v[piv]
            if f:
                v = [x - f * y for x, y in zip(v, row)]
                combo = [a - f * b for a, b in zip(combo, c)] + combo[len(c):]
        return v, combo

    def coordinates(self, vec: Sequence[FieldElement]) -> list[FieldElement] | None:
        v, combo = self._reduce(vec)
        if any(v):
            return None
        return [-x for x in combo]

    def contains(self, vec: Sequence[FieldElement]) -> bool:
        return self.coordinates(vec) is not None

    def insert(self, vec: Sequence[FieldElement]) -> bool:
        v, combo = self._reduce(vec)
        piv = next((j for j, x in enumerate(v) if x), None)
        if piv is None:
            return False
        K = v[0].field
        combo = combo + [K.one()]
        self.count += 1
        inv = v[piv].inverse()
        v = [x * inv for x in v]
        combo = [x * inv for x in combo]
        # keep earlier rows reduced at the new pivot
        for k, row in enumerate(self._rows):
            f = row[piv]
            if f:
                self._rows[k] = [x - f * y for x, y in zip(row, v)]
                old = self._combos[k] + [K.zero()] * (len(combo) - len(self._combos[k]))
                self._combos[k] = [x - f * y for x, y in zip(old, combo)]
        self._rows.append(v)
        self._combos.append(combo)
        self._pivots.append(piv)
        return True


# ---------------------------------------------------------------------------
# Matrices


class SquareMatrix:
    """Immutable n x n matrix with entries in a NumberField."""

    __slots__ = ("field", "n", "rows", "_hash")

    def __init__(self, field: NumberField, rows: Sequence[Sequence]):
        n = len(rows)
        if n < 1:
            raise ValueError("matrix dimension must be at least 1")
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self.field = field
        self.n = n
        self.rows: tuple[tuple[FieldElement, ...], ...] = tuple(tuple(field(x) for x in r) for r in rows)
        self._hash = None

    @classmethod
    def _raw(cls, field: NumberField, rows) -> SquareMatrix:
        m = cls.__new__(cls)
        m.field = field
        m.n = len(rows)
        m.rows = tuple(tuple(r) for r in rows)
        m._hash = None
        return m

    @classmethod
    def identity(cls, field: NumberField, n: int) -> SquareMatrix:
        zero, one = field.zero(), field.one()
        return cls._raw(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, field: NumberField, cols: Sequence[Sequence[FieldElement]]) -> SquareMatrix:
        n = len(cols)
        return cls(field, [[cols[j][i] for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> FieldElement:
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple[FieldElement, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[FieldElement, ...]]:
        return [self.column(j) for j in range(self.n)]

    def entries(self) -> list[FieldElement]:
        return [x for r in self.rows for x in r]

    def _check(self, other: SquareMatrix) -> None:
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
        if other.field is not self.field and other.field != self.field:
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")

    def __matmul__(self, other: SquareMatrix) -> SquareMatrix:
        self._check(other)
        K = self.field
        prod = kernel.matmul_coords(self._coords(), other._coords(), K._red, ZERO)
        return SquareMatrix._raw(K, [[FieldElement(K, c) for c in r] for r in prod])

    def _coords(self) -> tuple:
        return tuple(tuple(x.coords for x in r) for r in self.rows)

    def __add__(self, other: SquareMatrix) -> SquareMatrix:
        self._check(other)
        return SquareMatrix._raw(self.field, [[x + y for x, y in zip(a, b)] for a, b in zip(self.rows, other.rows)])

    def __sub__(self, other: SquareMatrix) -> SquareMatrix:
        self._check(other)
        return SquareMatrix._raw(self.field, [[x - y for x, y in zip(a, b)] for a, b in zip(self.rows, other.rows)])

    def __neg__(self) -> SquareMatrix:
        return SquareMatrix._raw(self.field, [[-x for x in r] for r in self.rows])

    def scale(self, s) -> SquareMatrix:
        return SquareMatrix._raw(self.field, [[x * s for x in r] for r in self.rows])

    def apply(self, vec: Sequence[FieldElement]) -> tuple[FieldElement, ...]:
        """Matrix times column vector."""
        out = []
        for r in self.rows:
            acc = self.field.zero()
            for x, y in zip(r, vec):
                if x and y:
                    acc = acc + x * y
            out.append(acc)
        return tuple(out)

    def trace(self) -> FieldElement:
        acc = self.field.zero()
        for i in range(self.n):
            acc = acc + self.rows[i][i]
        return acc

    def det(self) -> FieldElement:
        return det(self.rows)

    def inverse(self) -> SquareMatrix:
        return SquareMatrix._raw(self.field, inverse(self.rows))

    def transpose(self) -> SquareMatrix:
        return SquareMatrix._raw(self.field, [list(c) for c in self.columns()])

    def vectorize(self) -> list[FieldElement]:
        return self.entries()

    def is_identity(self) -> bool:
        return all((x == 1) if i == j else not x for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(x.coords for r in self.rows for x in r))
        return self._hash

    def to_json(self) -> list[list[list[str]]]:
        return [[x.to_json() for x in r] for r in self.rows]

    def __repr__(self) -> str:
        return "SquareMatrix([" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "])"


def mat_ops(A: SquareMatrix, B: SquareMatrix | None, op: str):
    if op == "mul":
        return A @ B
    if op == "add":
        return A + B
    if op == "inverse":
        return A.inverse()
    if op == "det":
        return A.det()
    if op == "trace":
        return A.trace()
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# Words in generators


@dataclass(frozen=True)
class Word:
    """Product of generators, left to right.

    Letters are 1-based generator indices; a negative index is the inverse.
    """

    letters: tuple[int, ...] = ()

    @property
    def reduced(self) -> bool:
        return all(a != -b for a, b in zip(self.letters, self.letters[1:]))

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def inverse(self) -> Word:
        return Word(tuple(-x for x in reversed(self.letters)))

    def freely_reduce(self) -> Word:
        out: list[int] = []
        for x in self.letters:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return Word(tuple(out))

    def evaluate(self, generators: Sequence[SquareMatrix], inverses: Sequence[SquareMatrix] | None = None) -> SquareMatrix:
        g0 = generators[0]
        if inverses is None:
            inverses = [g.inverse() for g in generators]
        m = SquareMatrix.identity(g0.field, g0.n)
        for x in self.letters:
            m = m @ (generators[x - 1] if x > 0 else inverses[-x - 1])
        return m

    def render(self, labels: Sequence[str] | None = None) -> str:
        if not self.letters:
            return "1"
        out = []
        for x in self.letters:
            name = labels[abs(x) - 1] if labels else _default_label(abs(x))
            out.append(name if x > 0 else f"{name}^-1")
        return "".join(out)

    def __str__(self) -> str:
        return self.render()

    @classmethod
    def parse(cls, text: str, labels: Sequence[str] | None = None) -> Word:
        """Parse e.g. ``"ABA^-1B^-1"``, ``"A B A⁻¹ B⁻¹"`` or ``"1"`` (identity)."""
        labels = list(labels) if labels else [_default_label(k) for k in range(1, 27)]
        s = text.replace(" ", "").replace("⁻¹", "^-1")
        if s in ("", "1", "Id", "I"):
            return cls()
        letters = []
        pos = 0
        order = sorted(range(len(labels)), key=lambda k: -len(labels[k]))
        while pos < len(s):
            for k in order:
                if s.startswith(labels[k], pos):
                    pos += len(labels[k])
                    if s.startswith("^-1", pos):
                        letters.append(-(k + 1))
                        pos += 3
                    else:
                        letters.append(k + 1)
                    break
            else:
                raise ValueError(f"cannot parse word {text!r} at position {pos}")
        return cls(tuple(letters))


def _default_label(k: int) -> str:
    return chr(ord("A") + k - 1)


# ---------------------------------------------------------------------------
# Linear hull and trace form


@dataclass
class AlgebraBasis:
    field: NumberField
    n: int
    words: list[Word]
    matrices: list[SquareMatrix]
    gram: list[list[FieldElement]] = dc_field(default_factory=list)
    dual: list[SquareMatrix] | None = None

    @property
    def dim(self) -> int:
        return len(self.matrices)

    @property
    def is_full(self) -> bool:
        return self.dim == self.n * self.n

    def span(self) -> SpanTracker:
        tracker = SpanTracker(self.n * self.n)
        for m in self.matrices:
            tracker.insert(m.vectorize())
        return tracker


def algebra_basis(generators: Sequence[SquareMatrix]) -> AlgebraBasis:
    """K-basis of the linear hull of the group generated by ``generators``.

    Breadth-first closure from the identity under left multiplication by each
    generator and then each inverse; a product is kept only if it raises the
    rank of the span.
    """
    if not generators:
        raise ValueError("at least one generator is required")
    K, n = generators[0].field, generators[0].n
    for g in generators:
        g._check(generators[0])
        if not g.det():
            raise SingularMatrixError("generators must be invertible")
    inverses = [g.inverse() for g in generators]
    letters = [(k + 1, g) for k, g in enumerate(generators)] + [(-(k + 1), h) for k, h in enumerate(inverses)]

    ident = SquareMatrix.identity(K, n)
    tracker = SpanTracker(n * n)
    tracker.insert(ident.vectorize())
    words, mats = [Word()], [ident]
    seen = {ident}
    queue = deque([0])
    while queue and tracker.rank < n * n:
        k = queue.popleft()
        for x, g in letters:
            prod = g @ mats[k]
            if prod in seen:
                continue
            seen.add(prod)
            if tracker.insert(prod.vectorize()):
                words.append(Word((x,) + words[k].letters))
                mats.append(prod)
                queue.append(len(mats) - 1)
    basis = AlgebraBasis(K, n, words, mats)
    basis.gram = gram_matrix(basis)
    return basis


def trace_form(a: SquareMatrix, b: SquareMatrix) -> FieldElement:
    """tr(AB) without forming the full product."""
    acc = a.field.zero()
    n = a.n
    for i in range(n):
        for j in range(n):
            x, y = a.rows[i][j], b.rows[j][i]
            if x and y:
                acc = acc + x * y
    return acc


def gram_matrix(basis: AlgebraBasis) -> list[list[FieldElement]]:
    r = basis.dim
    g = [[None] * r for _ in range(r)]
    for i in range(r):
        for j in range(i, r):
            g[i][j] = g[j][i] = trace_form(basis.matrices[i], basis.matrices[j])
    return g


def gram_determinant(basis: AlgebraBasis) -> FieldElement:
    gram = basis.gram or gram_matrix(basis)
    return det(gram)


def is_completely_reducible(basis: AlgebraBasis) -> bool:
    """Nondegeneracy of the trace form on the linear hull."""
    return bool(gram_determinant(basis))


def dual_basis(basis: AlgebraBasis) -> list[SquareMatrix]:
    gram = basis.gram or gram_matrix(basis)
    try:
        ginv = inverse(gram)
    except SingularMatrixError:
        raise DegenerateFormError("trace form is degenerate on the linear hull") from None
    K, n = basis.field, basis.n
    duals = []
    for i in range(basis.dim):
        acc = SquareMatrix._raw(K, [[K.zero()] * n for _ in range(n)])
        for j, b in enumerate(basis.matrices):
            if ginv[i][j]:
                acc = acc + b.scale(ginv[i][j])
        duals.append(acc)
    for i, d in enumerate(duals):
        for j, b in enumerate(basis.matrices):
            if trace_form(d, b) != (1 if i == j else 0):
                raise AssertionError("dual basis pairing check failed")
    basis.dual = duals
    return duals


def elementary_matrices(field: NumberField, n: int) -> Iterable[SquareMatrix]:
    zero, one = field.zero(), field.one()
    for i in range(n):
        for j in range(n):
            yield SquareMatrix._raw(field, [[one if (a, b) == (i, j) else zero for b in range(n)] for a in range(n)])
