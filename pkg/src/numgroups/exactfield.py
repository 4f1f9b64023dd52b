"""Exact arithmetic in number fields K = Q[t]/(f).

Elements are stored as power-basis coordinates (rationals, low degree first).
Each field also carries an explicit integral basis, so membership in the ring
of integers is a linear solve.
"""

from __future__ import annotations

import math
import warnings
from functools import lru_cache
from operator import add, neg, sub
from typing import Iterable, Sequence

import numpy as np

from ._backend import ONE, QQ, ZERO, is_rational, kernel, lcm, qq, qq_str

Rational = QQ


class FieldMismatchError(ValueError):
    """Operands live in different number fields."""


class ReducibleFieldError(ValueError):
    """A zero divisor was found, so the defining polynomial is not irreducible."""


# ---------------------------------------------------------------------------
# Univariate polynomials over Q


class UniPoly:
    """Polynomial with rational coefficients, stored low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [qq(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple = tuple(c)

    @classmethod
    def _raw(cls, coeffs: list) -> UniPoly:
        p = cls.__new__(cls)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        p.coeffs = tuple(coeffs)
        return p

    @classmethod
    def monomial(cls, k: int, c=1) -> UniPoly:
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else ZERO

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def monic(self) -> UniPoly:
        lc = self.lead
        if lc == 0:
            raise ZeroDivisionError("zero polynomial has no monic associate")
        return UniPoly._raw([c / lc for c in self.coeffs])

    def __eq__(self, other) -> bool:
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("UniPoly", self.coeffs))

    def __neg__(self) -> UniPoly:
        return UniPoly._raw([-c for c in self.coeffs])

    def __add__(self, other: UniPoly) -> UniPoly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly._raw(out)

    def __sub__(self, other: UniPoly) -> UniPoly:
        return self + (-other)

    def __mul__(self, other) -> UniPoly:
        if not isinstance(other, UniPoly):
            s = qq(other)
            return UniPoly._raw([c * s for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly._raw([])
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return UniPoly._raw(out)

    __rmul__ = __mul__

    def __divmod__(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lb = other.lead
        quo = [ZERO] * max(len(rem) - db, 0)
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] / lb
            if c:
                quo[k] = c
                for j, y in enumerate(other.coeffs):
                    rem[k + j] -= c * y
        return UniPoly._raw(quo), UniPoly._raw(rem[:db] if db > 0 else [])

    def __mod__(self, other: UniPoly) -> UniPoly:
        return divmod(self, other)[1]

    def __floordiv__(self, other: UniPoly) -> UniPoly:
        return divmod(self, other)[0]

    def __call__(self, x):
        """Horner evaluation; ``x`` may be a rational, a FieldElement, a float..."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return x * 0
        if isinstance(x, FieldElement) and not isinstance(acc, FieldElement):
            return x.field(acc)
        return acc

    def __repr__(self) -> str:
        return f"UniPoly({[qq_str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return self.format("t")

    def format(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            if k == 0:
                body = qq_str(a)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if a == 1 else f"{qq_str(a)}*{mono}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> list[str]:
        return [qq_str(c) for c in self.coeffs]


def poly_xgcd(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    """Return ``(g, s, u)`` with ``g = s*a + u*b`` and ``g`` monic (or zero)."""
    r0, r1 = a, b
    s0, s1 = UniPoly([1]), UniPoly([])
    u0, u1 = UniPoly([]), UniPoly([1])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        u0, u1 = u1, u0 - q * u1
    if r0.is_zero():
        return r0, s0, u0
    lc = r0.lead
    inv = ONE / lc
    return r0 * inv, s0 * inv, u0 * inv


def cyclotomic_polynomial(m: int) -> UniPoly:
    """The m-th cyclotomic polynomial, by exact division of t^m - 1."""
    if m < 1:
        raise ValueError("m must be positive")
    p = UniPoly.monomial(m) - UniPoly([1])
    for k in range(1, m):
        if m % k == 0:
            q, r = divmod(p, cyclotomic_polynomial(k))
            assert r.is_zero()
            p = q
    return p


# ---------------------------------------------------------------------------
# Rational linear algebra (small dense systems)


def _qq_solve_left(rows: Sequence[Sequence], target: Sequence):
    """Solve ``c . rows = target`` for the row-combination vector ``c``.

    Returns None when there is no solution.  ``rows`` need not be independent;
    any solution is returned (the lowest-pivot one).
    """
    m = len(rows)
    if m == 0:
        return [] if all(x == 0 for x in target) else None
    n = len(target)
    # augmented system: columns are the rows, one equation per coordinate
    aug = [[rows[i][j] for i in range(m)] + [target[j]] for j in range(n)]
    piv_cols = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = ONE / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
        if r == n:
            break
    if any(aug[i][m] != 0 for i in range(r, n)):
        return None
    sol = [ZERO] * m
    for i, c in enumerate(piv_cols):
        sol[c] = aug[i][m]
    return sol


def _qq_inverse(mat: Sequence[Sequence]) -> list[list]:
    n = len(mat)
    aug = [list(map(QQ, row)) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular rational matrix")
        aug[c], aug[p] = aug[p], aug[c]
        inv = ONE / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


# ---------------------------------------------------------------------------
# Number fields


class NumberField:
    """K = Q[t]/(f) with an explicit integral basis and an optional pinned embedding.

    ``integral_basis`` rows are power-basis coordinates of a Z-basis of O_K;
    it defaults to the power basis 1, t, ..., t^(d-1).  ``embedding`` is an
    approximate complex value of t (a complex number or an ``(re, im)`` pair).
    The field is real when the pinned embedding has imaginary part exactly 0.
    """

    def __init__(
        self,
        defining_poly: UniPoly | Sequence,
        integral_basis: Sequence[Sequence] | None = None,
        embedding: complex | tuple[float, float] | None = None,
        name: str | None = None,
        gen_name: str = "t",
    ):
        f = defining_poly if isinstance(defining_poly, UniPoly) else UniPoly(defining_poly)
        if f.degree < 1:
            raise ValueError("defining polynomial must have degree >= 1")
        if not f.is_monic() or not f.is_integral():
            raise ValueError(f"defining polynomial {f} must be monic with integer coefficients")
        self.defining_poly = f
        self.degree = d = f.degree
        self.name = name or f"Q[t]/({f})"
        self.gen_name = gen_name

        if integral_basis is None:
            integral_basis = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
        basis = tuple(tuple(qq(x) for x in row) for row in integral_basis)
        if len(basis) != d or any(len(row) != d for row in basis):
            raise ValueError(f"integral basis must be a {d}x{d} matrix")
        self.integral_basis = basis
        try:
            self._basis_inv = tuple(tuple(r) for r in _qq_inverse(basis))
        except ZeroDivisionError:
            raise ValueError("integral basis is not invertible") from None

        # t^k mod f for k < 2d - 1
        red = []
        for k in range(2 * d - 1):
            r = UniPoly.monomial(k) % f
            red.append(tuple(r.coeffs) + (ZERO,) * (d - len(r.coeffs)))
        self._red = tuple(red)

        if embedding is None and d == 1:
            embedding = complex(float(-f.coeffs[0]), 0.0)
        if embedding is not None:
            if isinstance(embedding, (tuple, list)):
                embedding = complex(float(embedding[0]), float(embedding[1]))
            embedding = complex(embedding)
            roots = np.roots([float(c) for c in reversed(f.coeffs)]) if d > 1 else [-float(f.coeffs[0])]
            scale = max(1.0, abs(embedding))
            if min(abs(embedding - complex(r)) for r in roots) > 1e-6 * scale:
                raise ValueError(f"embedding {embedding} is not within 1e-6 of a root of {f}")
        self.embedding: complex | None = embedding

        one = tuple(ONE if j == 0 else ZERO for j in range(d))
        if one not in basis:
            raise ValueError("integral basis must contain the row (1, 0, ..., 0)")
        for row in basis:
            if not is_algebraic_integer(FieldElement(self, row)):
                raise ValueError(f"integral basis element {[qq_str(x) for x in row]} is not an algebraic integer")

    @property
    def is_real(self) -> bool:
        return self.embedding is not None and self.embedding.imag == 0.0

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, NumberField):
            return NotImplemented
        return self.defining_poly == other.defining_poly and self.integral_basis == other.integral_basis

    def __hash__(self) -> int:
        return hash((self.defining_poly, self.integral_basis))

    def __repr__(self) -> str:
        return f"NumberField({self.name})"

    # element constructors

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(f"{value.field!r} vs {self!r}")
            return value
        if is_rational(value) or isinstance(value, str):
            return FieldElement(self, (qq(value),) + (ZERO,) * (self.degree - 1))
        return self.element(value)

    def element(self, coords: Sequence) -> FieldElement:
        c = tuple(qq(x) for x in coords)
        if len(c) != self.degree:
            raise ValueError(f"expected {self.degree} coordinates, got {len(c)}")
        return FieldElement(self, c)

    def zero(self) -> FieldElement:
        return FieldElement(self, (ZERO,) * self.degree)

    def one(self) -> FieldElement:
        return self(1)

    def gen(self) -> FieldElement:
        return FieldElement(self, self._red[1])

    def basis_element(self, i: int) -> FieldElement:
        return FieldElement(self, self.integral_basis[i])

    def from_ok_coords(self, coords: Sequence) -> FieldElement:
        """Element with the given integral-basis coordinates."""
        d = self.degree
        out = [ZERO] * d
        for c, row in zip(coords, self.integral_basis):
            c = qq(c)
            if c:
                for j in range(d):
                    out[j] += c * row[j]
        return FieldElement(self, tuple(out))

    # coordinate kernels

    def _mul(self, a: tuple, b: tuple) -> tuple:
        return kernel.mul_coords(a, b, self._red, ZERO)

    def _inv(self, a: tuple) -> tuple:
        if self.degree == 1:
            if a[0] == 0:
                raise ZeroDivisionError("division by zero in number field")
            return (ONE / a[0],)
        p = UniPoly._raw(list(a))
        if p.is_zero():
            raise ZeroDivisionError("division by zero in number field")
        g, s, _ = poly_xgcd(p, self.defining_poly)
        if g.degree > 0:
            raise ReducibleFieldError(
                f"{p} is a zero divisor modulo {self.defining_poly}; the defining polynomial is reducible"
            )
        s = s % self.defining_poly
        return tuple(s.coeffs) + (ZERO,) * (self.degree - len(s.coeffs))


class FieldElement:
    """Immutable element of a NumberField."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: tuple):
        self.field = field
        self.coords = coords

    def _coerce(self, other) -> tuple | None:
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
            return other.coords
        if is_rational(other):
            return (qq(other),) + (ZERO,) * (self.field.degree - 1)
        return None

    def __add__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, tuple(map(add, self.coords, b)))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, tuple(map(sub, self.coords, b)))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, tuple(map(sub, b, self.coords)))

    def __neg__(self):
        return FieldElement(self.field, tuple(map(neg, self.coords)))

    def __mul__(self, other):
        if is_rational(other):
            s = qq(other)
            return FieldElement(self.field, tuple(c * s for c in self.coords))
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field._mul(self.coords, b))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field._inv(self.coords))

    def __truediv__(self, other):
        if is_rational(other):
            s = qq(other)
            if s == 0:
                raise ZeroDivisionError("division by zero in number field")
            return FieldElement(self.field, tuple(c / s for c in self.coords))
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field._mul(self.coords, self.field._inv(b)))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return FieldElement(self.field, self.field._mul(b, self.field._inv(self.coords)))

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.coords == other.coords and (self.field is other.field or self.field == other.field)
        if is_rational(other):
            return self.coords[0] == other and not any(self.coords[1:])
        return NotImplemented

    def __hash__(self) -> int:
        if not any(self.coords[1:]):
            return hash(self.coords[0])
        return hash(self.coords)

    def __bool__(self) -> bool:
        return any(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def denominator(self) -> int:
        """Smallest positive integer m with m*self in O_K."""
        m = 1
        for c in ok_coords(self):
            m = lcm(m, int(c.denominator))
        return m

    def to_complex(self) -> complex:
        e = self.field.embedding
        if e is None:
            raise ValueError("field has no pinned embedding")
        return sum((complex(float(c)) * e**k for k, c in enumerate(self.coords)), 0j)

    def to_poly(self) -> UniPoly:
        return UniPoly._raw(list(self.coords))

    def to_json(self) -> list[str]:
        return [qq_str(c) for c in self.coords]

    def __repr__(self) -> str:
        return f"FieldElement({self})"

    def __str__(self) -> str:
        if self.field.degree == 1:
            return qq_str(self.coords[0])
        return self.to_poly().format(self.field.gen_name)


# ---------------------------------------------------------------------------
# Operations


def fe_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


@lru_cache(maxsize=1 << 16)
def minimal_polynomial(a: FieldElement) -> UniPoly:
    """Monic minimal polynomial of ``a`` over Q.

    Found as the first linear dependence among 1, a, a^2, ... in power-basis
    coordinates.
    """
    powers = [a.field.one().coords]
    cur = a.field.one()
    for k in range(1, a.field.degree + 1):
        cur = cur * a
        sol = _qq_solve_left(powers, cur.coords)
        if sol is not None:
            return UniPoly._raw([-c for c in sol] + [ONE])
        powers.append(cur.coords)
    raise AssertionError("no dependence found within the field degree")  # pragma: no cover


def is_algebraic_integer(a: FieldElement) -> bool:
    return minimal_polynomial(a).is_integral()


def ok_coords(a: FieldElement) -> tuple:
    """Coordinates of ``a`` in the integral basis."""
    inv = a.field._basis_inv
    d = a.field.degree
    if d == 1:
        return (a.coords[0] * inv[0][0],)
    out = [ZERO] * d
    for x, row in zip(a.coords, inv):
        if x:
            for j in range(d):
                out[j] += x * row[j]
    return tuple(out)


def is_in_OK(a: FieldElement) -> tuple[bool, tuple]:
    """Return ``(integral, coords)`` with ``coords`` in the integral basis."""
    c = ok_coords(a)
    return all(x.denominator == 1 for x in c), c


def _is_squarefree(n: int) -> bool:
    n = abs(n)
    if n < 2:
        return n == 1
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


@lru_cache(maxsize=None)
def quadratic_field(d: int) -> NumberField:
    """Q(sqrt(d)) with its classical integral basis."""
    if d in (0, 1) or not _is_squarefree(d):
        raise ValueError(f"d = {d} must be a squarefree integer different from 0 and 1")
    basis = [[1, 0], ["1/2", "1/2"]] if d % 4 == 1 else [[1, 0], [0, 1]]
    emb = complex(math.sqrt(d), 0.0) if d > 0 else complex(0.0, math.sqrt(-d))
    gen = "i" if d == -1 else f"sqrt({d})"
    return NumberField([-d, 0, 1], basis, emb, name=f"Q(sqrt({d}))", gen_name=gen)


@lru_cache(maxsize=None)
def rational_field() -> NumberField:
    return NumberField([0, 1], name="Q")


def field_from_poly_root(poly: UniPoly, approx: complex, name: str | None = None) -> NumberField:
    """Field generated by the root of ``poly`` nearest to ``approx`` (power-basis integral basis)."""
    roots = np.roots([float(c) for c in reversed(poly.coeffs)])
    root = min(roots, key=lambda r: abs(r - approx))
    if abs(root.imag) < 1e-12:
        root = complex(root.real, 0.0)
    return NumberField(poly, None, complex(root), name=name)


def warn_missing_embedding(field: NumberField) -> None:
    warnings.warn(f"{field!r} has no pinned embedding; treating it as complex", stacklevel=3)
