"""Arithmetic backends selected at import time.

Rationals are GMP ``gmpy2.mpq`` when available, else ``fractions.Fraction``.
The coordinate kernels (field multiplication, matrix products) come from the
compiled ``_kernel`` extension when it was built, else from ``_kernel_py``.
``NUMGROUPS_PURE_PYTHON=1`` forces both fallbacks; ``NUMGROUPS_KERNEL=python``
forces only the pure-Python kernels.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

BACKEND = "python"
QQ = Fraction
_QQ_TYPES: tuple[type, ...] = (Fraction,)

_PURE = os.environ.get("NUMGROUPS_PURE_PYTHON", "") in ("1", "true", "yes")

if not _PURE:
    try:
        import gmpy2
    except ImportError:  # pragma: no cover - depends on environment
        pass
    else:
        BACKEND = "gmpy2"
        QQ = gmpy2.mpq
        _QQ_TYPES = (gmpy2.mpq, Fraction)

KERNEL = "python"
from . import _kernel_py as kernel  # noqa: E402

if not _PURE and os.environ.get("NUMGROUPS_KERNEL", "") != "python":
    try:
        from . import _kernel as kernel  # type: ignore[no-redef]  # noqa: E402
    except ImportError:  # pragma: no cover - extension not built
        pass
    else:
        KERNEL = "cython"

ZERO = QQ(0)
ONE = QQ(1)


def qq(value) -> "QQ":
    """Coerce an int, Fraction, mpq or ``"p/q"`` string to the backend rational."""
    if isinstance(value, str):
        value = value.strip()
        if not value:
            raise ValueError("empty rational string")
        # Fraction accepts "p/q", ints and decimals; both backends take a Fraction.
        return QQ(Fraction(value))
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a string or Fraction")
    return QQ(value)


def is_rational(value) -> bool:
    return isinstance(value, _QQ_TYPES) or (isinstance(value, int) and not isinstance(value, bool))


def is_integer(value) -> bool:
    return value.denominator == 1 if not isinstance(value, int) else True


def floor_half(value) -> int:
    """Round to nearest integer, ties toward +infinity: ``floor(x + 1/2)``."""
    return int(math.floor(value + QQ(1, 2)))


def lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def qq_str(value) -> str:
    v = QQ(value)
    if v.denominator == 1:
        return str(int(v.numerator))
    return f"{int(v.numerator)}/{int(v.denominator)}"
