"""Trace polynomials for two-generator subgroups of SL(2), Hecke values, and the groups Pi(lambda).

Every word W in A, B has tr(W) = P(tr A, tr B, tr AB) for an integer
polynomial P, obtained from the SL(2) identities

    tr(UV) + tr(U^-1 V) = tr(U) tr(V),   tr(U^-1) = tr(U),   tr(Id) = 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from ._backend import QQ, qq_str
from .decider import GroupSpec
from .exactfield import (
    FieldElement,
    NumberField,
    UniPoly,
    cyclotomic_polynomial,
    is_algebraic_integer,
    minimal_polynomial,
    quadratic_field,
    rational_field,
)
from .linhull import SquareMatrix, Word

Monomial = tuple[int, int, int]


class TracePoly:
    """Sparse polynomial in x = tr A, y = tr B, z = tr AB."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, object] | None = None):
        self.terms: dict[Monomial, object] = {m: QQ(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c) -> TracePoly:
        return cls({(0, 0, 0): c})

    @classmethod
    def var(cls, k: int) -> TracePoly:
        e = [0, 0, 0]
        e[k] = 1
        return cls({tuple(e): 1})

    def __add__(self, other: TracePoly) -> TracePoly:
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return TracePoly(out)

    def __neg__(self) -> TracePoly:
        return TracePoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: TracePoly) -> TracePoly:
        return self + (-other)

    def __mul__(self, other) -> TracePoly:
        if not isinstance(other, TracePoly):
            return TracePoly({m: c * other for m, c in self.terms.items()})
        out: dict[Monomial, object] = {}
        for (a1, b1, c1), u in self.terms.items():
            for (a2, b2, c2), v in other.terms.items():
                m = (a1 + a2, b1 + b2, c1 + c2)
                out[m] = out.get(m, 0) + u * v
        return TracePoly(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TracePoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms.items())))

    def items(self) -> list[tuple[Monomial, object]]:
        """Monomials in descending total degree, then descending lexicographic order."""
        return sorted(self.terms.items(), key=lambda mc: (-sum(mc[0]), tuple(-e for e in mc[0])))

    def has_integer_coefficients(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    def evaluate(self, x, y, z):
        powers = [[None], [None], [None]]

        def pw(k, base, e):
            cache = powers[k]
            while len(cache) <= e:
                cache.append(base if len(cache) == 1 else cache[-1] * base)
            return cache[e]

        acc = None
        for (a, b, c), coef in self.terms.items():
            term = coef
            for k, base, e in ((0, x, a), (1, y, b), (2, z, c)):
                if e:
                    term = pw(k, base, e) * term
            acc = term if acc is None else acc + term
        if acc is None:
            return x * 0
        return acc

    def to_json(self) -> list[list]:
        """Sorted ``[[i, j, k], coefficient]`` pairs."""
        return [[list(m), int(c) if c.denominator == 1 else qq_str(c)] for m, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data) -> TracePoly:
        return cls({tuple(m): QQ(c) if isinstance(c, int) else QQ(*map(int, c.split("/"))) for m, c in data})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for m, c in self.items():
            mono = "*".join(
                (v if e == 1 else f"{v}^{e}") for v, e in zip("xyz", m) if e
            )
            a = abs(c)
            if not mono:
                body = qq_str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{qq_str(a)}*{mono}"
            sign = "-" if c < 0 else "+"
            out = (("-" if sign == "-" else "") + body) if not out else f"{out} {sign} {body}"
        return out

    __repr__ = __str__


X, Y, Z = TracePoly.var(0), TracePoly.var(1), TracePoly.var(2)
TWO = TracePoly.const(2)


# ---------------------------------------------------------------------------
# Word traces


def _syllables(letters) -> tuple[tuple[int, int], ...]:
    """Cyclically reduced syllable form ((generator, exponent), ...)."""
    syl: list[list[int]] = []
    for x in letters:
        g, s = abs(x), (1 if x > 0 else -1)
        if syl and syl[-1][0] == g:
            syl[-1][1] += s
            if syl[-1][1] == 0:
                syl.pop()
        else:
            syl.append([g, s])
    while len(syl) > 1 and syl[0][0] == syl[-1][0]:
        g, e = syl.pop()
        syl[0][1] += e
        if syl[0][1] == 0:
            syl.pop(0)
    return tuple((g, e) for g, e in syl)


def _canonical(syl: tuple[tuple[int, int], ...]) -> tuple[tuple[int, int], ...]:
    """Least rotation of the word or its inverse (same trace in SL(2)).

    Prefers whichever of the two has fewer negative syllables, so the
    recursion's (length, negatives) measure keeps decreasing.
    """
    if not syl:
        return syl
    inv = tuple((g, -e) for g, e in reversed(syl))
    neg_w = sum(e < 0 for _, e in syl)
    neg_i = len(syl) - neg_w
    cands = (syl,) if neg_w < neg_i else (inv,) if neg_i < neg_w else (syl, inv)
    return min(w[i:] + w[:i] for w in cands for i in range(len(w)))


def _rotate_to(syl, i):
    return syl[i:] + syl[:i]


def _with_exponent(syl, e):
    """Replace the first syllable's exponent by e and renormalize."""
    g = syl[0][0]
    letters = [g if e > 0 else -g] * abs(e)
    for h, f in syl[1:]:
        letters.extend([h if f > 0 else -h] * abs(f))
    return _syllables(letters)


@lru_cache(maxsize=1 << 16)
def _trace_syl(syl: tuple[tuple[int, int], ...]) -> TracePoly:
    if not syl:
        return TWO
    if len(syl) == 1:
        g, e = syl[0]
        v = X if g == 1 else Y
        if abs(e) == 1:
            return v
        s = 1 if e > 0 else -1
        return v * _trace(_syllables([g * s] * (abs(e) - 1))) - _trace(_syllables([g * s] * (abs(e) - 2)))

    # pivot on the last syllable of largest |exponent|
    top = max(abs(e) for _, e in syl)
    if top >= 2:
        i = max(k for k, (_, e) in enumerate(syl) if abs(e) == top)
        w = _rotate_to(syl, i)
        g, e = w[0]
        s = 1 if e > 0 else -1
        v = X if g == 1 else Y
        return v * _trace(_with_exponent(w, e - s)) - _trace(_with_exponent(w, e - 2 * s))

    negatives = [k for k, (_, e) in enumerate(syl) if e < 0]
    if negatives:
        w = _rotate_to(syl, negatives[-1])
        g = w[0][0]
        v = X if g == 1 else Y
        rest = _syllables([h if f > 0 else -h for h, f in w[1:]])
        flipped = _syllables([g] + [h if f > 0 else -h for h, f in w[1:]])
        return v * _trace(rest) - _trace(flipped)

    # (AB)^k with k >= 1
    k = len(syl) // 2
    if k == 1:
        return Z
    return Z * _trace(_syllables([1, 2] * (k - 1))) - _trace(_syllables([1, 2] * (k - 2)))


def _trace(syl) -> TracePoly:
    return _trace_syl(_canonical(syl))


def word_trace_poly(word: Word) -> TracePoly:
    """Integer polynomial P with tr(word) = P(tr A, tr B, tr AB) for all A, B in SL(2)."""
    if any(abs(x) > 2 for x in word.letters):
        raise ValueError("trace polynomials are implemented for two generators only")
    p = _trace(_syllables(word.letters))
    if not p.has_integer_coefficients():
        raise AssertionError(f"non-integral trace polynomial for {word}")
    return p


def commutator_poly() -> TracePoly:
    return X * X + Y * Y + Z * Z - X * Y * Z - TWO


def _sl2_traces(spec: GroupSpec) -> tuple[FieldElement, FieldElement, FieldElement]:
    if len(spec.generators) != 2 or spec.n != 2:
        raise ValueError("trace polynomials need exactly two 2x2 generators")
    A, B = spec.generators
    if A.det() != 1 or B.det() != 1:
        raise ValueError("generators must have determinant 1")
    return A.trace(), B.trace(), (A @ B).trace()


def eval_trace_poly(p: TracePoly, spec: GroupSpec) -> FieldElement:
    x, y, z = _sl2_traces(spec)
    return spec.field(p.evaluate(x, y, z)) if p.terms else spec.field.zero()


# ---------------------------------------------------------------------------
# Pi(lambda) and Hecke values


def pi_lambda(field: NumberField, lam) -> GroupSpec:
    """The group generated by A = [[0, -1], [1, 0]] and B = [[1, lam], [0, 1]]."""
    lam = field(lam)
    A = SquareMatrix(field, [[0, -1], [1, 0]])
    B = SquareMatrix(field, [[1, lam], [0, 1]])
    return GroupSpec(field, [A, B], ["A", "B"])


@dataclass(frozen=True)
class HeckeValue:
    q: int
    field: NumberField
    lam: FieldElement

    @property
    def minpoly(self) -> UniPoly:
        return minimal_polynomial(self.lam)


def hecke_minpoly(q: int) -> UniPoly:
    """Minimal polynomial of 2 cos(pi/q), from the 2q-th cyclotomic polynomial.

    z^(-h) Phi_2q(z) is a polynomial in x = z + 1/z, rewritten with the
    Chebyshev relation z^j + z^-j = C_j(x), C_0 = 2, C_1 = x.
    """
    if q < 3:
        raise ValueError("q must be at least 3")
    phi = cyclotomic_polynomial(2 * q)
    h = phi.degree // 2
    c = phi.coeffs
    x = UniPoly([0, 1])
    cheb = [UniPoly([2]), x]
    while len(cheb) <= h:
        cheb.append(x * cheb[-1] - cheb[-2])
    p = UniPoly([c[h]])
    for j in range(1, h + 1):
        p = p + cheb[j] * c[h + j]
    return p


def _squarefree_part(n: int) -> tuple[int, int]:
    """(k, d) with n = k^2 d, d squarefree."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    k = 1
    f = 2
    while f * f <= n:
        while n % (f * f) == 0:
            n //= f * f
            k *= f
        f += 1
    return k, sign * n


@lru_cache(maxsize=None)
def hecke_value(q: int) -> HeckeValue:
    """lambda_q = 2 cos(pi/q) in the smallest convenient presentation of Q(lambda_q).

    Rational for q = 3, the classical quadratic field for q = 4, 5, 6, and
    Q[t]/(minpoly) with the power basis otherwise (Z[lambda_q] is the ring of
    integers of the maximal real subfield of a cyclotomic field).
    """
    p = hecke_minpoly(q)
    approx = 2 * math.cos(math.pi / q)
    if p.degree == 1:
        K = rational_field()
        lam = K(-p.coeffs[0])
    elif p.degree == 2:
        b, c = p.coeffs[1], p.coeffs[0]
        k, d = _squarefree_part(int(b * b - 4 * c))
        K = quadratic_field(d)
        lam = (K(-b) + K.gen() * k) / 2
    else:
        K = NumberField(p, None, complex(approx, 0.0), name=f"Q(2cos(pi/{q}))", gen_name=f"lambda{q}")
        lam = K.gen()
    if minimal_polynomial(lam) != p or abs(lam.to_complex() - approx) > 1e-9:
        raise AssertionError(f"failed to construct 2cos(pi/{q})")
    if not is_algebraic_integer(lam):
        raise AssertionError("lambda_q must be an algebraic integer")
    return HeckeValue(q, K, lam)


def is_hecke_value(lam: FieldElement, max_q: int = 60) -> int | None:
    """q with lam = 2cos(pi/q), or None (searches q <= max_q)."""
    if lam.field.embedding is None or not lam.field.is_real:
        return None
    mp = minimal_polynomial(lam)
    value = lam.to_complex().real
    for q in range(3, max_q + 1):
        if hecke_minpoly(q) == mp and abs(value - 2 * math.cos(math.pi / q)) < 1e-9:
            return q
    return None


def random_reduced_words(rng, count: int, max_len: int) -> Iterator[Word]:
    letters = [1, 2, -1, -2]
    for _ in range(count):
        n = rng.randint(1, max_len)
        w: list[int] = []
        while len(w) < n:
            x = rng.choice(letters)
            if w and w[-1] == -x:
                continue
            w.append(x)
        yield Word(tuple(w))
