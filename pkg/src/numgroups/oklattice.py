"""Finitely generated O_K-submodules of K^n over norm-Euclidean rings of integers.

Modules are kept as a single positive integer denominator D together with a
Hermite normal form of D times the generators.  Division in O_K uses a
canonical nearest-element rounding, which makes remainders (and hence the
reduced form) unique for a fixed pivot.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from ._backend import QQ, floor_half, lcm
from .exactfield import FieldElement, NumberField, _qq_inverse, is_algebraic_integer, is_in_OK, ok_coords
from .linhull import SquareMatrix

EUCLIDEAN_QUADRATIC = (-1, -2, -3, -7, -11, 2, 3, 5, 13)

Vector = tuple  # tuple[FieldElement, ...]


class UnsupportedRingError(ValueError):
    """O_K is not one of the supported norm-Euclidean rings."""


class CertificationError(ArithmeticError):
    """A proposed conjugator does not make the generators integral."""


class EuclideanOK:
    """Division with norm-decreasing remainder in Z or a norm-Euclidean quadratic ring."""

    def __init__(self, field: NumberField):
        self.field = field
        self.d = _quadratic_d(field)
        if field.degree == 1:
            self.d = None
        elif self.d is None or self.d not in EUCLIDEAN_QUADRATIC:
            raise UnsupportedRingError(
                f"{field.name}: ring of integers is not in the supported norm-Euclidean list"
            )
        self.units = self._units()

    @staticmethod
    def supports(field: NumberField) -> bool:
        try:
            EuclideanOK(field)
        except UnsupportedRingError:
            return False
        return True

    def _units(self) -> list[FieldElement]:
        K = self.field
        if self.d == -1:
            i = K.gen()
            return [K.one(), i, -K.one(), -i]
        if self.d == -3:
            w = (K.one() + K.gen()) / 2  # primitive 6th root of unity
            out, u = [], K.one()
            for _ in range(6):
                out.append(u)
                u = u * w
            return out
        return [K.one(), -K.one()]

    def norm(self, a: FieldElement):
        """Absolute value of the field norm."""
        if self.d is None:
            return abs(a.coords[0])
        x, y = a.coords
        return abs(x * x - self.d * y * y)

    def quotient(self, a: FieldElement, b: FieldElement) -> FieldElement:
        """Canonical nearest quotient q, so that N(a - q b) < N(b)."""
        if not b:
            raise ZeroDivisionError("Euclidean division by zero")
        K = self.field
        if self.d is None:
            return K(floor_half(a.coords[0] / b.coords[0]))
        u, v = (a / b).coords
        if self.d % 4 == 1:
            # basis 1, w = (1 + sqrt d)/2; round the w-coordinate first
            y = floor_half(2 * v)
            x = floor_half(u - QQ(y, 2))
            return K.element([QQ(x) + QQ(y, 2), QQ(y, 2)])
        return K.element([floor_half(u), floor_half(v)])

    def divmod(self, a: FieldElement, b: FieldElement) -> tuple[FieldElement, FieldElement]:
        q = self.quotient(a, b)
        return q, a - q * b

    def rem(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.divmod(a, b)[1]

    def divides(self, b: FieldElement, a: FieldElement) -> bool:
        if not b:
            return not a
        return is_in_OK(a / b)[0]

    def is_unit(self, a: FieldElement) -> bool:
        return bool(a) and is_in_OK(a)[0] and is_in_OK(a.inverse())[0]

    def normalize(self, a: FieldElement) -> tuple[FieldElement, FieldElement]:
        """Canonical associate ``u*a`` and the unit ``u``.

        Q and the quadratic rings with units +-1: positive first nonzero
        power-basis coordinate.  Z[i]: first quadrant (re > 0, im >= 0).
        Z[(1+sqrt -3)/2]: argument in [0, pi/3).
        """
        if not a:
            return a, self.field.one()
        for u in self.units:
            b = u * a
            if self._is_canonical(b):
                return b, u
        raise AssertionError("no canonical associate found")  # pragma: no cover

    def _is_canonical(self, b: FieldElement) -> bool:
        if self.d == -1:
            x, y = b.coords
            return x > 0 and y >= 0
        if self.d == -3:
            x, y = b.coords  # b = x + y sqrt(-3)
            return x > 0 and 0 <= y < x
        lead = next(c for c in b.coords if c)
        return lead > 0

    def gcd(self, a: FieldElement, b: FieldElement) -> FieldElement:
        while b:
            a, b = b, self.rem(a, b)
        return self.normalize(a)[0]


def _quadratic_d(field: NumberField) -> int | None:
    """d if ``field`` is presented as Q[t]/(t^2 - d) with the classical integral basis."""
    f = field.defining_poly.coeffs
    if field.degree != 2 or f[1] != 0:
        return None
    d = int(-f[0])
    basis = [[1, 0], [QQ(1, 2), QQ(1, 2)]] if d % 4 == 1 else [[1, 0], [0, 1]]
    # same Z-lattice iff each basis expresses the other with integer coefficients
    given = [list(r) for r in field.integral_basis]
    inv_std = _qq_inverse(basis)
    inv_given = _qq_inverse(given)
    m1 = [[sum(QQ(given[i][k]) * inv_std[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    m2 = [[sum(QQ(basis[i][k]) * inv_given[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    if all(x.denominator == 1 for r in m1 + m2 for x in r):
        return d
    return None


# ---------------------------------------------------------------------------
# Hermite normal form


def _axpy(row: Vector, q: FieldElement, piv: Vector) -> Vector:
    return tuple(x - q * y if y else x for x, y in zip(row, piv))


def hnf_reduce(rows: Sequence[Vector], ring: EuclideanOK) -> list[Vector]:
    """Row Hermite normal form over ``ring`` of vectors with O_K entries.

    Pivots are canonical associates, entries above a pivot are canonical
    remainders modulo it, zero rows are dropped.  The O_K-row-span is preserved.
    """
    rows = [tuple(r) for r in rows if any(r)]
    if not rows:
        return []
    n = len(rows[0])
    r = 0
    for col in range(n):
        if r == len(rows):
            break
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][col]]
            if not nz:
                break
            best = min(nz, key=lambda i: (ring.norm(rows[i][col]), i))
            rows[r], rows[best] = rows[best], rows[r]
            p = rows[r][col]
            clean = True
            for i in range(r + 1, len(rows)):
                if rows[i][col]:
                    q, rem = ring.divmod(rows[i][col], p)
                    rows[i] = _axpy(rows[i], q, rows[r])
                    if rem:
                        clean = False
            if clean:
                break
        if not any(rows[i][col] for i in range(r, len(rows))):
            continue
        _, u = ring.normalize(rows[r][col])
        if u != 1:
            rows[r] = tuple(u * x for x in rows[r])
        p = rows[r][col]
        for i in range(r):
            if rows[i][col]:
                q = ring.quotient(rows[i][col], p)
                if q:
                    rows[i] = _axpy(rows[i], q, rows[r])
        r += 1
    return [row for row in rows[:r]]


def pivot_columns(hnf: Sequence[Vector]) -> list[int]:
    return [next(j for j, x in enumerate(row) if x) for row in hnf]


def _solve_echelon(vec: Vector, hnf: Sequence[Vector]):
    """Coefficients c in O_K with vec = sum c_k hnf_k, or None."""
    w = tuple(vec)
    coeffs = []
    for row, col in zip(hnf, pivot_columns(hnf)):
        if any(w[:col]):
            return None
        c = w[col] / row[col]
        if not is_in_OK(c)[0]:
            return None
        coeffs.append(c)
        if c:
            w = _axpy(w, c, row)
    if any(w):
        return None
    return coeffs


# ---------------------------------------------------------------------------
# Modules


def _denominator(vectors: Sequence[Vector]) -> int:
    D = 1
    for v in vectors:
        for x in v:
            if x:
                D = lcm(D, x.denominator())
    return D


@dataclass
class OKModule:
    """O_K-span of ``gens`` inside K^n, with ``hnf`` the reduced form of ``denom * gens``."""

    field: NumberField
    n: int
    gens: list[Vector]
    denom: int
    hnf: list[Vector] | None

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[FieldElement]], ring: EuclideanOK | None = None) -> OKModule:
        vecs = [tuple(v) for v in vectors]
        if not vecs:
            raise ValueError("need at least one vector")
        K, n = vecs[0][0].field, len(vecs[0])
        D = _denominator(vecs)
        hnf = None
        if ring is not None:
            hnf = hnf_reduce([tuple(x * D for x in v) for v in vecs], ring)
        return cls(K, n, vecs, D, hnf)

    @classmethod
    def standard(cls, field: NumberField, n: int, ring: EuclideanOK | None = None) -> OKModule:
        zero, one = field.zero(), field.one()
        return cls.from_vectors([tuple(one if i == j else zero for j in range(n)) for i in range(n)], ring)

    def basis_vectors(self) -> list[Vector]:
        """The reduced generators as elements of K^n (denominator applied)."""
        if self.hnf is None:
            raise UnsupportedRingError("module has no reduced form")
        return [tuple(x / self.denom for x in row) for row in self.hnf]

    @property
    def rank(self) -> int:
        return len(self.hnf) if self.hnf is not None else 0

    def to_json(self) -> dict:
        """``{"denominator": D, "rows": [...]}`` with integral-basis coordinates of each entry."""
        if self.hnf is None:
            raise UnsupportedRingError("module has no reduced form")
        return {
            "denominator": self.denom,
            "rows": [[[int(c) for c in ok_coords(x)] for x in row] for row in self.hnf],
        }

    @classmethod
    def from_json(cls, data: dict, field: NumberField, ring: EuclideanOK | None = None) -> OKModule:
        D = int(data["denominator"])
        rows = [tuple(field.from_ok_coords(e) for e in row) for row in data["rows"]]
        gens = [tuple(x / D for x in r) for r in rows]
        mod = cls.from_vectors(gens, ring)
        return mod


def membership(v: Sequence[FieldElement], M: OKModule) -> tuple[bool, list[FieldElement] | None]:
    """Whether ``v`` lies in the O_K-span of ``M``; coefficients on ``M``'s reduced basis when it does."""
    if M.hnf is None:
        raise UnsupportedRingError("membership requires a reduced module")
    w = tuple(x * M.denom for x in v)
    if not all(is_in_OK(x)[0] for x in w):
        return False, None
    coeffs = _solve_echelon(w, M.hnf)
    return coeffs is not None, coeffs


@dataclass
class LatticeClosure:
    module: OKModule
    stabilized: bool
    rounds: int
    denominators: list[int] = dc_field(default_factory=list)
    added: list[int] = dc_field(default_factory=list)

    @property
    def diverged(self) -> bool:
        return not self.stabilized

    @property
    def strictly_growing(self) -> bool:
        d = self.denominators
        return all(a < b for a, b in zip(d, d[1:]))

    def summary(self) -> dict:
        return {
            "stabilized": self.stabilized,
            "rounds": self.rounds,
            "denominators": self.denominators,
            "added_vectors": self.added,
        }


def lattice_closure(generators: Sequence[SquareMatrix], ring: EuclideanOK, max_rounds: int = 16) -> LatticeClosure:
    """Smallest O_K-lattice containing O_K^n and stable under the generators and their inverses.

    Each round takes the generators and then their inverses in turn, applies
    each to every reduced basis vector of the current module, and adjoins the
    images that fall outside it (re-reducing before the next matrix).  Stops at
    the first round that adds nothing, or reports divergence after
    ``max_rounds`` rounds.
    """
    if not generators:
        raise ValueError("at least one generator is required")
    K, n = generators[0].field, generators[0].n
    mats = list(generators) + [g.inverse() for g in generators]
    M = OKModule.standard(K, n, ring)
    denoms = [M.denom]
    added = []
    for rnd in range(1, max_rounds + 1):
        count = 0
        for g in mats:
            basis = M.basis_vectors()
            new = [w for w in (g.apply(v) for v in basis) if not membership(w, M)[0]]
            if new:
                count += len(new)
                M = OKModule.from_vectors(basis + new, ring)
        added.append(count)
        if not count:
            return LatticeClosure(M, True, rnd, denoms, added)
        denoms.append(M.denom)
    return LatticeClosure(M, False, max_rounds, denoms, added)


def extract_basis(M: OKModule) -> SquareMatrix:
    """Conjugator whose columns are the reduced basis of a full-rank module."""
    if M.hnf is None or len(M.hnf) != M.n:
        raise ValueError(f"module has rank {M.rank}, expected a basis of {M.n} vectors")
    cols = M.basis_vectors()
    U = SquareMatrix.from_columns(M.field, cols)
    if not U.det():
        raise ValueError("reduced basis is linearly dependent")
    return U


def conjugate_and_verify(U: SquareMatrix, generators: Sequence[SquareMatrix]) -> list[SquareMatrix]:
    """U^-1 g U for each generator, checked to lie in GL(n, O_K) with unchanged trace."""
    Uinv = U.inverse()
    out = []
    for k, g in enumerate(generators):
        h = Uinv @ g @ U
        for i, row in enumerate(h.rows):
            for j, x in enumerate(row):
                if not is_in_OK(x)[0]:
                    raise CertificationError(f"generator {k}: entry ({i},{j}) = {x} is not an algebraic integer")
        dt = h.det()
        if not dt or not (is_algebraic_integer(dt) and is_algebraic_integer(dt.inverse())):
            raise CertificationError(f"generator {k}: determinant {dt} is not a unit")
        if h.trace() != g.trace():
            raise CertificationError(f"generator {k}: trace changed under conjugation")
        out.append(h)
    return out


__all__ = [
    "CertificationError",
    "EuclideanOK",
    "LatticeClosure",
    "OKModule",
    "UnsupportedRingError",
    "conjugate_and_verify",
    "extract_basis",
    "hnf_reduce",
    "lattice_closure",
    "membership",
]
